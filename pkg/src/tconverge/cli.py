"""Command-line interface.

Subcommands:

* ``run``     execute a grid (config JSON plus flag overrides), write CSV
* ``expand``  print the cells a config expands to, one per line
* ``check``   run the built-in self checks
* ``version`` print the package version
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from . import __version__
from .check import run_all
from .config import RunConfig, build_cells, default_config, parse_config, resolve_workers, validate_config
from .engine import run_grid
from .errors import CellRunError, ConfigError


def _add_override_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (defaults used when omitted)")
    p.add_argument("--y-dists", help="comma-separated y distribution labels")
    p.add_argument("--x-dists", help="comma-separated x distribution labels")
    p.add_argument("--z-dists", help="comma-separated z distribution labels")
    p.add_argument("--n-values", help="comma-separated sample sizes, or a preset name")
    p.add_argument("--R", type=int, help="regressions per repeat")
    p.add_argument("--B", type=int, help="outer repeats per cell")
    p.add_argument("--alpha", type=float, help="test level")
    p.add_argument("--seed", type=int, help="master seed")


def _parse_n_values(text: str):
    parts = [s.strip() for s in text.split(",") if s.strip()]
    if len(parts) == 1 and not parts[0].isdigit():
        return parts[0]
    try:
        return [int(s) for s in parts]
    except ValueError:
        raise ConfigError(f"--n-values must be integers or a preset name, got {text!r}") from None


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = parse_config(args.config) if args.config else default_config()
    updates = {}
    if args.y_dists:
        updates["y_dists"] = [s.strip() for s in args.y_dists.split(",") if s.strip()]
    if args.x_dists:
        updates["x_dists"] = [s.strip() for s in args.x_dists.split(",") if s.strip()]
    if args.z_dists:
        updates["z_dists"] = [s.strip() for s in args.z_dists.split(",") if s.strip()]
    if args.n_values:
        updates["n_values"] = _parse_n_values(args.n_values)
    for name in ("R", "B", "alpha"):
        val = getattr(args, name)
        if val is not None:
            updates[name] = val
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if getattr(args, "output", None):
        updates["output"] = args.output
    if getattr(args, "workers", None):
        w = args.workers
        updates["workers"] = w if w == "auto" else int(w)
    if getattr(args, "resume", False):
        updates["resume"] = True
    cfg = dataclasses.replace(cfg, **updates)
    validate_config(cfg)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tconverge")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a simulation grid")
    _add_override_flags(p_run)
    p_run.add_argument("--output", help="results CSV path")
    p_run.add_argument("--workers", help="process count or 'auto'")
    p_run.add_argument("--resume", action="store_true", help="continue an interrupted run")

    p_exp = sub.add_parser("expand", help="list the cells a config expands to")
    _add_override_flags(p_exp)

    p_chk = sub.add_parser("check", help="run the built-in self checks")
    p_chk.add_argument("--quick", action="store_true", help="smaller, faster variants")

    sub.add_parser("version", help="print the package version")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    cells = build_cells(cfg)
    summary = run_grid(
        cells,
        master_seed=cfg.master_seed,
        results_path=cfg.output,
        workers=resolve_workers(cfg),
        alpha=cfg.alpha,
        resume=cfg.resume,
    )
    print(
        f"{summary.cells_total} cells ({summary.cells_skipped} resumed, "
        f"{summary.cells_run} run) in {summary.wall_ms} ms; "
        f"{summary.redraw_total} redraws, {summary.clamp_total} clamped; "
        f"results in {summary.results_path}"
    )
    return 0


def _cmd_expand(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    for c in build_cells(cfg):
        z = c.z_dist.label if c.z_dist is not None else "-"
        print(f"{c.cell_id}\t{c.y_dist.label}\t{c.x_dist.label}\t{z}\t{c.n}\t{c.R}\t{c.B}")
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    failed = False
    for outcome in run_all(quick=args.quick):
        status = "PASS" if outcome.ok else "FAIL"
        failed |= not outcome.ok
        print(f"{status} {outcome.name}: {outcome.detail} [{outcome.elapsed_s:.1f}s]")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "expand":
            return _cmd_expand(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "version":
            print(__version__)
            return 0
    except (ConfigError, CellRunError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


def entrypoint() -> None:
    sys.exit(main())
