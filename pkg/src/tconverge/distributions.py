"""Source distributions for the simulation grid.

Five families are supported: standard normal, uniform on (0, 1), standard
Laplace, beta(a, b), and log-normal with log-scale location 0 and log-scale
sigma.  Each family has closed-form moments; ``kurtosis`` throughout is the
raw fourth standardized moment (3 for the normal), not excess kurtosis.

The default catalog holds the eleven shapes used by the main experiment,
ordered from light to heavy tails within each family.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ContractViolation, ParameterDomainError


class Family(enum.Enum):
    NORMAL = "normal"
    UNIFORM = "uniform"
    LAPLACE = "laplace"
    BETA = "beta"
    LOGNORMAL = "lognormal"


def _default_label(family: Family, p1: float, p2: float) -> str:
    def fmt(v: float) -> str:
        return f"{v:g}"

    if family is Family.BETA:
        return f"beta_{fmt(p1)}_{fmt(p2)}"
    if family is Family.LOGNORMAL:
        return f"lognormal_{fmt(p1)}"
    return family.value


@dataclass(frozen=True)
class DistributionSpec:
    """One member of a family.

    ``param1``/``param2`` mean (a, b) for beta and (sigma, unused) for
    log-normal; the three parameter-free families ignore both.
    """

    family: Family
    param1: float = 0.0
    param2: float = 0.0
    label: str = ""

    def __post_init__(self) -> None:
        if self.family is Family.BETA and not (self.param1 > 0.0 and self.param2 > 0.0):
            raise ParameterDomainError(
                f"beta needs two positive shape parameters, got "
                f"({self.param1}, {self.param2})"
            )
        if self.family is Family.LOGNORMAL and not self.param1 > 0.0:
            raise ParameterDomainError(
                f"lognormal needs sigma > 0, got {self.param1}"
            )
        if not self.label:
            object.__setattr__(
                self, "label", _default_label(self.family, self.param1, self.param2)
            )


@dataclass(frozen=True)
class Moments:
    mean: float
    sd: float
    skewness: float
    kurtosis: float


@dataclass(frozen=True)
class Sample:
    """Draws from one spec, tagged so centering cannot be applied twice."""

    values: np.ndarray
    spec: DistributionSpec
    centered: bool = False


def theoretical_moments(spec: DistributionSpec) -> Moments:
    """Exact mean, sd, skewness and (raw) kurtosis of ``spec``."""
    f = spec.family
    if f is Family.NORMAL:
        return Moments(0.0, 1.0, 0.0, 3.0)
    if f is Family.UNIFORM:
        return Moments(0.5, math.sqrt(1.0 / 12.0), 0.0, 1.8)
    if f is Family.LAPLACE:
        return Moments(0.0, math.sqrt(2.0), 0.0, 6.0)
    if f is Family.BETA:
        a, b = spec.param1, spec.param2
        s = a + b
        mean = a / s
        var = a * b / (s * s * (s + 1.0))
        skew = 2.0 * (b - a) * math.sqrt(s + 1.0) / ((s + 2.0) * math.sqrt(a * b))
        # excess kurtosis, then shift to the raw convention
        ex = (
            6.0
            * ((a - b) ** 2 * (s + 1.0) - a * b * (s + 2.0))
            / (a * b * (s + 2.0) * (s + 3.0))
        )
        return Moments(mean, math.sqrt(var), skew, ex + 3.0)
    if f is Family.LOGNORMAL:
        s2 = spec.param1 * spec.param1
        w = math.exp(s2)  # e^{sigma^2}
        mean = math.exp(s2 / 2.0)
        var = (w - 1.0) * w
        skew = (w + 2.0) * math.sqrt(w - 1.0)
        kurt = w**4 + 2.0 * w**3 + 3.0 * w * w - 3.0
        return Moments(mean, math.sqrt(var), skew, kurt)
    raise ContractViolation(f"unknown family {f!r}")


def draw(spec: DistributionSpec, shape: int | tuple[int, ...], stream: np.random.Generator) -> np.ndarray:
    """Raw (uncentered) draws with the given shape, consumed from ``stream``."""
    f = spec.family
    if f is Family.NORMAL:
        return stream.standard_normal(shape)
    if f is Family.UNIFORM:
        return stream.random(shape)
    if f is Family.LAPLACE:
        return stream.laplace(0.0, 1.0, shape)
    if f is Family.BETA:
        return stream.beta(spec.param1, spec.param2, shape)
    if f is Family.LOGNORMAL:
        return stream.lognormal(0.0, spec.param1, shape)
    raise ContractViolation(f"unknown family {f!r}")


def sample(spec: DistributionSpec, n: int, stream: np.random.Generator) -> Sample:
    """Draw ``n`` values as an uncentered :class:`Sample`."""
    if n < 1:
        raise ContractViolation(f"sample size must be >= 1, got {n}")
    return Sample(values=draw(spec, n, stream), spec=spec, centered=False)


def center(s: Sample) -> Sample:
    """Subtract the exact theoretical mean.  Centering twice is an error."""
    if s.centered:
        raise ContractViolation("sample is already centered")
    mu = theoretical_moments(s.spec).mean
    return replace(s, values=s.values - mu, centered=True)


def _build_catalog() -> dict[str, DistributionSpec]:
    entries = [
        DistributionSpec(Family.NORMAL),
        DistributionSpec(Family.UNIFORM),
        DistributionSpec(Family.LAPLACE),
        DistributionSpec(Family.BETA, 0.1, 0.1),
        DistributionSpec(Family.BETA, 5.0, 2.0),
        DistributionSpec(Family.BETA, 5.0, 1.0),
        DistributionSpec(Family.BETA, 5.0, 0.5),
        DistributionSpec(Family.LOGNORMAL, 0.5),
        DistributionSpec(Family.LOGNORMAL, 1.0),
        DistributionSpec(Family.LOGNORMAL, 1.5),
        DistributionSpec(Family.LOGNORMAL, 2.0),
    ]
    return {e.label: e for e in entries}


CATALOG: dict[str, DistributionSpec] = _build_catalog()


def lookup(label: str) -> DistributionSpec:
    """Catalog entry by label, with a helpful error for typos."""
    try:
        return CATALOG[label]
    except KeyError:
        known = ", ".join(CATALOG)
        raise ParameterDomainError(
            f"unknown distribution label {label!r}; known labels: {known}"
        ) from None
