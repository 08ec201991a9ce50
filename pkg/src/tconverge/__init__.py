"""Monte Carlo laboratory for the convergence of OLS t-statistics to
their reference t distribution under the null hypothesis."""

__version__ = "0.1.0"

from .distributions import (
    CATALOG,
    DistributionSpec,
    Family,
    Moments,
    Sample,
    center,
    draw,
    lookup,
    sample,
    theoretical_moments,
)
from .engine import (
    CellResult,
    CellSpec,
    GridSummary,
    cell_identifier,
    expand_grid,
    read_results,
    run_cell,
    run_grid,
)
from .errors import (
    CellRunError,
    ConfigError,
    ContractViolation,
    DegenerateFitError,
    ParameterDomainError,
)
from .gof import GofReport, ad_pvalue, cvm_pvalue, edf_statistics, evaluate, evaluate_pit, ks_pvalue, pit
from .regression import FitResult, fit_simple, fit_simple_batch, fit_two, fit_two_batch, t_cdf
from .rng import derive_seed, make_stream
from .config import RunConfig, build_cells, default_config, parse_config

__all__ = [
    "__version__",
    "CATALOG",
    "CellResult",
    "CellRunError",
    "CellSpec",
    "ConfigError",
    "ContractViolation",
    "DegenerateFitError",
    "DistributionSpec",
    "Family",
    "FitResult",
    "GofReport",
    "GridSummary",
    "Moments",
    "ParameterDomainError",
    "RunConfig",
    "Sample",
    "ad_pvalue",
    "build_cells",
    "cell_identifier",
    "center",
    "cvm_pvalue",
    "default_config",
    "derive_seed",
    "draw",
    "edf_statistics",
    "evaluate",
    "evaluate_pit",
    "expand_grid",
    "fit_simple",
    "fit_simple_batch",
    "fit_two",
    "fit_two_batch",
    "ks_pvalue",
    "lookup",
    "make_stream",
    "parse_config",
    "pit",
    "read_results",
    "run_cell",
    "run_grid",
    "sample",
    "t_cdf",
    "theoretical_moments",
]
