"""Exception types shared across the package."""


class ParameterDomainError(ValueError):
    """A distribution parameter lies outside its legal domain."""


class ContractViolation(ValueError):
    """An operation was called with arguments that break its precondition."""


class DegenerateFitError(RuntimeError):
    """The regression inputs carry no usable variation (constant x,
    constant y, perfect fit, or a rank-deficient two-regressor design)."""


class CellRunError(RuntimeError):
    """A simulation cell could not be completed."""


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""
