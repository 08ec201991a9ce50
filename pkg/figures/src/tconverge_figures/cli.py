"""Command-line interface: render a figure from a results CSV."""

from __future__ import annotations

import argparse
import sys

from .render import METRICS, FigureSpec, RenderError, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tconverge-figures")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="draw one metric from a results CSV")
    p.add_argument("--csv", required=True, help="results file")
    p.add_argument("--out", required=True, help="output image path (.svg for deterministic bytes)")
    p.add_argument("--metric", default="ad_reject_rate", choices=METRICS)
    p.add_argument("--facet", default="y", choices=("y", "yz"), help="facet per y, or per (y, z) pair")
    p.add_argument("--linear-n", action="store_true", help="linear instead of log sample-size axis")
    p.add_argument("--band", nargs=2, type=float, metavar=("LO", "HI"), help="reference band override")
    p.add_argument("--title", help="figure title")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec_kwargs = dict(
        metric=args.metric,
        facet=args.facet,
        log_n=not args.linear_n,
        title=args.title,
    )
    if args.band:
        spec_kwargs["band"] = (args.band[0], args.band[1])
    try:
        out = render(args.csv, FigureSpec(**spec_kwargs), args.out)
    except (SchemaError, RenderError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def entrypoint() -> None:
    sys.exit(main())
