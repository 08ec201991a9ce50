"""Rejection-rate figures from a simulation results CSV.

The input is the results file written by the simulation runner: one row
per cell with the columns in ``REQUIRED_COLUMNS``.  A figure plots one
metric against sample size (log axis by default), one line per regressor
shape, one facet per response shape (or per response x z pair), with the
nominal 5% level and its binomial sampling band drawn for reference.

SVG output is byte-deterministic: a fixed hash salt and no embedded
creation date.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# the results-file contract of the simulation runner
REQUIRED_COLUMNS = (
    "cell_id",
    "y_dist",
    "x_dist",
    "z_dist",
    "n",
    "R",
    "B",
    "ad_reject_rate",
    "cvm_reject_rate",
    "ks_reject_rate",
    "type1_rate_x",
    "type1_rate_z",
    "redraw_count",
    "clamp_count",
    "elapsed_ms",
    "master_seed",
)

METRICS = (
    "ad_reject_rate",
    "cvm_reject_rate",
    "ks_reject_rate",
    "type1_rate_x",
    "type1_rate_z",
)

# presentation order for the standard shapes; unknown labels sort after
# these, alphabetically
_LABEL_ORDER = (
    "normal",
    "uniform",
    "laplace",
    "beta_0.1_0.1",
    "beta_5_2",
    "beta_5_1",
    "beta_5_0.5",
    "lognormal_0.5",
    "lognormal_1",
    "lognormal_1.5",
    "lognormal_2",
)

_HASH_SALT = "tconverge-figures"


class SchemaError(ValueError):
    """The CSV does not carry the columns a results file must have."""

    def __init__(self, missing: list[str]):
        self.missing = list(missing)
        super().__init__(f"results file is missing columns: {', '.join(missing)}")


class RenderError(ValueError):
    """The requested figure cannot be drawn from these rows."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: a metric, a facet layout, axis and band options."""

    metric: str = "ad_reject_rate"
    facet: str = "y"  # "y" or "yz"
    log_n: bool = True
    band: tuple[float, float] | None = None  # defaults to binomial 95% around 0.05
    title: str | None = None

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise RenderError(f"unknown metric {self.metric!r}; choose from {', '.join(METRICS)}")
        if self.facet not in ("y", "yz"):
            raise RenderError(f"facet must be 'y' or 'yz', got {self.facet!r}")


def load_rows(path: str | Path) -> list[dict]:
    """Parse a results CSV into row dicts, enforcing the column contract."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in fields]
        if missing:
            raise SchemaError(missing)
        rows = []
        for raw in reader:
            row = dict(raw)
            row["n"] = int(raw["n"])
            row["B"] = int(raw["B"])
            row["z_dist"] = raw["z_dist"] or None
            for col in ("ad_reject_rate", "cvm_reject_rate", "ks_reject_rate", "type1_rate_x"):
                row[col] = float(raw[col])
            row["type1_rate_z"] = float(raw["type1_rate_z"]) if raw["type1_rate_z"] else None
            rows.append(row)
    return rows


def _label_sort_key(label: str):
    try:
        return (0, _LABEL_ORDER.index(label))
    except ValueError:
        return (1, label)


def _ordered(labels) -> list[str]:
    return sorted(set(labels), key=_label_sort_key)


def _default_band(rows: list[dict]) -> tuple[float, float]:
    bs = sorted(r["B"] for r in rows)
    b = bs[len(bs) // 2]
    half = 1.96 * math.sqrt(0.05 * 0.95 / b)
    return (max(0.0, 0.05 - half), 0.05 + half)


def build_figure(rows: list[dict], spec: FigureSpec):
    """Assemble the matplotlib figure for ``spec`` from parsed rows."""
    usable = [r for r in rows if r[spec.metric] is not None]
    if not usable:
        raise RenderError(f"no rows carry a value for {spec.metric!r}")

    if spec.facet == "yz":
        facets = [
            (y, z)
            for y in _ordered(r["y_dist"] for r in usable)
            for z in _ordered(r["z_dist"] for r in usable if r["z_dist"] is not None)
        ]
        if not facets:
            raise RenderError("facet 'yz' needs rows with a z regressor")
        selector = lambda r, f: r["y_dist"] == f[0] and r["z_dist"] == f[1]
        caption = lambda f: f"y: {f[0]}   z: {f[1]}"
    else:
        facets = [(y,) for y in _ordered(r["y_dist"] for r in usable)]
        selector = lambda r, f: r["y_dist"] == f[0]
        caption = lambda f: f"y: {f[0]}"

    x_labels = _ordered(r["x_dist"] for r in usable)
    band = spec.band if spec.band is not None else _default_band(usable)

    ncols = min(3, len(facets))
    nrows = (len(facets) + ncols - 1) // ncols
    fig, axes = plt.subplots(
        nrows,
        ncols,
        figsize=(4.6 * ncols, 3.4 * nrows),
        squeeze=False,
        sharey=True,
    )
    flat = [ax for row in axes for ax in row]

    seen_handles: dict[str, object] = {}
    for ax, facet in zip(flat, facets):
        cell_rows = [r for r in usable if selector(r, facet)]
        if not cell_rows:
            warnings.warn(f"facet {caption(facet)} has no rows; skipped", stacklevel=2)
            ax.remove()
            continue
        ax.axhspan(band[0], band[1], color="0.85", zorder=0, label="_band")
        ax.axhline(0.05, color="0.4", linewidth=0.8, zorder=1, label="_nominal")
        for x_label in x_labels:
            pts = sorted(
                ((r["n"], r[spec.metric]) for r in cell_rows if r["x_dist"] == x_label)
            )
            if not pts:
                continue
            (line,) = ax.plot(
                [p[0] for p in pts],
                [p[1] for p in pts],
                marker="o",
                markersize=3,
                linewidth=1.1,
                label=x_label,
            )
            seen_handles.setdefault(x_label, line)
        if spec.log_n:
            ax.set_xscale("log")
        ax.set_title(caption(facet), fontsize=9)
        ax.set_xlabel("n")
        ax.set_ylabel(spec.metric)
    for ax in flat[len(facets) :]:
        ax.remove()

    handles = [seen_handles[l] for l in x_labels if l in seen_handles]
    fig.legend(handles, [h.get_label() for h in handles], loc="lower center", ncol=min(6, max(1, len(handles))), fontsize=8, frameon=False)
    fig.suptitle(spec.title or spec.metric)
    fig.tight_layout(rect=(0.0, 0.06, 1.0, 0.96))
    return fig


def render(csv_path: str | Path, spec: FigureSpec, out_path: str | Path) -> Path:
    """Load, draw, and save; returns the output path."""
    rows = load_rows(csv_path)
    out = Path(out_path)
    with plt.rc_context({"svg.hashsalt": _HASH_SALT}):
        fig = build_figure(rows, spec)
        try:
            if out.suffix.lower() == ".svg":
                fig.savefig(out, format="svg", metadata={"Date": None})
            else:
                fig.savefig(out)
        finally:
            plt.close(fig)
    return out
