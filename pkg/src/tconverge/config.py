"""Run configuration: defaults, JSON loading, grid construction.

A configuration names the distribution labels for y, x and (optionally) z,
the sample sizes, the batch sizes R and B, and run plumbing (seed, output
path, workers, resume).  ``n_values`` may be the literal preset name
"paper54" instead of a list; it expands to the 54-point sample-size grid
of the main experiment, spanning 4 to 10000 with step widths that grow
with n.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .distributions import CATALOG, lookup
from .engine import CellSpec, expand_grid
from .errors import ConfigError, ParameterDomainError

_N_SPANS = (
    (4, 28, 2),
    (30, 50, 5),
    (60, 100, 10),
    (120, 200, 20),
    (250, 500, 50),
    (600, 1000, 100),
    (1250, 2000, 250),
    (2500, 5000, 500),
    (6000, 10000, 1000),
)


def _preset_n_grid() -> list[int]:
    out: list[int] = []
    for lo, hi, step in _N_SPANS:
        out.extend(range(lo, hi + 1, step))
    return out


N_PRESETS: dict[str, list[int]] = {"paper54": _preset_n_grid()}

_ALL_LABELS = list(CATALOG)


@dataclass
class RunConfig:
    y_dists: list[str] = field(default_factory=lambda: list(_ALL_LABELS))
    x_dists: list[str] = field(default_factory=lambda: list(_ALL_LABELS))
    z_dists: list[str] = field(default_factory=list)
    n_values: list[int] | str = "paper54"
    R: int = 1000
    B: int = 500
    alpha: float = 0.05
    master_seed: int = 0
    output: str = "results.csv"
    workers: int | str = "auto"
    resume: bool = False


_FIELDS = set(RunConfig.__dataclass_fields__)


def default_config() -> RunConfig:
    """Full bivariate grid: all eleven shapes for y and x, preset n."""
    return RunConfig()


def parse_config(path: str | Path) -> RunConfig:
    """Load a JSON config; unknown keys and bad values raise ConfigError."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - _FIELDS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig(**raw)
    validate_config(cfg)
    return cfg


def resolve_n_values(cfg: RunConfig) -> list[int]:
    if isinstance(cfg.n_values, str):
        try:
            return list(N_PRESETS[cfg.n_values])
        except KeyError:
            raise ConfigError(
                f"unknown n preset {cfg.n_values!r}; known: {sorted(N_PRESETS)}"
            ) from None
    return list(cfg.n_values)


def resolve_workers(cfg: RunConfig) -> int:
    if cfg.workers == "auto":
        return os.cpu_count() or 1
    if isinstance(cfg.workers, int) and not isinstance(cfg.workers, bool) and cfg.workers >= 1:
        return cfg.workers
    raise ConfigError(f"workers must be a positive integer or 'auto', got {cfg.workers!r}")


def validate_config(cfg: RunConfig) -> None:
    for group, labels in (("y_dists", cfg.y_dists), ("x_dists", cfg.x_dists), ("z_dists", cfg.z_dists)):
        if not isinstance(labels, list) or (group != "z_dists" and not labels):
            raise ConfigError(f"{group} must be a non-empty list of labels")
        for label in labels:
            try:
                lookup(label)
            except ParameterDomainError as exc:
                raise ConfigError(f"{group}: {exc}") from None
    n_values = resolve_n_values(cfg)
    if not n_values:
        raise ConfigError("n_values must not be empty")
    n_min = 5 if cfg.z_dists else 4
    for n in n_values:
        if not isinstance(n, int) or n < n_min:
            raise ConfigError(f"every n must be an integer >= {n_min}, got {n!r}")
    if not (isinstance(cfg.R, int) and cfg.R >= 2):
        raise ConfigError(f"R must be an integer >= 2, got {cfg.R!r}")
    if not (isinstance(cfg.B, int) and cfg.B >= 1):
        raise ConfigError(f"B must be an integer >= 1, got {cfg.B!r}")
    if not (0.0 < cfg.alpha < 1.0):
        raise ConfigError(f"alpha must lie in (0, 1), got {cfg.alpha!r}")
    if not isinstance(cfg.master_seed, int) or cfg.master_seed < 0:
        raise ConfigError(f"master_seed must be a non-negative integer, got {cfg.master_seed!r}")
    resolve_workers(cfg)


def build_cells(cfg: RunConfig) -> list[CellSpec]:
    """Expand a validated config into its cell list."""
    validate_config(cfg)
    return expand_grid(
        y_dists=[lookup(l) for l in cfg.y_dists],
        x_dists=[lookup(l) for l in cfg.x_dists],
        z_dists=[lookup(l) for l in cfg.z_dists] if cfg.z_dists else None,
        n_values=resolve_n_values(cfg),
        R=cfg.R,
        B=cfg.B,
    )
