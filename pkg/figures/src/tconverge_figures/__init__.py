"""Figures for t-statistic convergence results files."""

__version__ = "0.1.0"

from .render import (
    METRICS,
    REQUIRED_COLUMNS,
    FigureSpec,
    RenderError,
    SchemaError,
    build_figure,
    load_rows,
    render,
)

__all__ = [
    "__version__",
    "METRICS",
    "REQUIRED_COLUMNS",
    "FigureSpec",
    "RenderError",
    "SchemaError",
    "build_figure",
    "load_rows",
    "render",
]
