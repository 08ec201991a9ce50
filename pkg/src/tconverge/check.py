"""Built-in self checks: moment table, OLS oracle, null calibration.

Three independent validations that the machinery is sound:

* ``moment_check`` recomputes the catalog's theoretical skewness and
  kurtosis and compares them against a frozen high-precision reference.
* ``ols_oracle_check`` refits thousands of random instances with an
  extended-precision (long double) solver that uses the raw, uncentered
  normal equations and explicit residuals, a deliberately different code
  path from the production two-pass centered fit.
* ``gof_calibration_check`` feeds exact Student t draws through the full
  transform-and-test pipeline; each EDF test must reject a true null at
  close to its nominal 5% rate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .distributions import CATALOG, draw, theoretical_moments
from .gof import evaluate
from .regression import fit_simple, fit_two
from .rng import make_stream

# skewness and kurtosis per catalog label, evaluated from the closed forms
# at 40-digit precision (tests/oracles/moment_reference.py)
REFERENCE_SHAPE: dict[str, tuple[float, float]] = {
    "normal": (0.0, 3.0),
    "uniform": (0.0, 1.8),
    "laplace": (0.0, 6.0),
    "beta_0.1_0.1": (0.0, 1.125),
    "beta_5_2": (-0.596284794, 2.88),
    "beta_5_1": (-1.18321595662, 4.2),
    "beta_5_0.5": (-1.93494185959, 7.24941176471),
    "lognormal_0.5": (1.75018965507, 8.89844567378),
    "lognormal_1": (6.18487713863, 113.936392176),
    "lognormal_1.5": (33.4680467973, 10078.2528465),
    "lognormal_2": (414.3593433, 9220559.97731),
}

# two-decimal agreement
MOMENT_TOL = 0.005


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    ok: bool
    detail: str
    elapsed_s: float


def oracle_fit_simple(y: np.ndarray, x: np.ndarray) -> float:
    """Long-double t statistic for the slope of y on (1, x)."""
    ld = np.longdouble
    yl = np.asarray(y, dtype=ld)
    xl = np.asarray(x, dtype=ld)
    n = ld(yl.size)
    sx = xl.sum()
    sy = yl.sum()
    sxx = (xl * xl).sum()
    sxy = (xl * yl).sum()
    det = n * sxx - sx * sx
    b1 = (n * sxy - sx * sy) / det
    b0 = (sy - b1 * sx) / n
    resid = yl - b0 - b1 * xl
    sse = (resid * resid).sum()
    var_b1 = sse / (yl.size - 2) * n / det
    return float(b1 / np.sqrt(var_b1))


def oracle_fit_two(y: np.ndarray, x: np.ndarray, z: np.ndarray) -> tuple[float, float]:
    """Long-double t statistics for both slopes of y on (1, x, z)."""
    ld = np.longdouble
    yl = np.asarray(y, dtype=ld)
    xl = np.asarray(x, dtype=ld)
    zl = np.asarray(z, dtype=ld)
    n = ld(yl.size)
    a01, a02 = xl.sum(), zl.sum()
    a11, a22 = (xl * xl).sum(), (zl * zl).sum()
    a12 = (xl * zl).sum()
    r0, r1, r2 = yl.sum(), (xl * yl).sum(), (zl * yl).sum()
    det = (
        n * (a11 * a22 - a12 * a12)
        - a01 * (a01 * a22 - a12 * a02)
        + a02 * (a01 * a12 - a11 * a02)
    )
    b0 = (
        r0 * (a11 * a22 - a12 * a12)
        - a01 * (r1 * a22 - a12 * r2)
        + a02 * (r1 * a12 - a11 * r2)
    ) / det
    b1 = (
        n * (r1 * a22 - a12 * r2)
        - r0 * (a01 * a22 - a12 * a02)
        + a02 * (a01 * r2 - r1 * a02)
    ) / det
    b2 = (
        n * (a11 * r2 - r1 * a12)
        - a01 * (a01 * r2 - r1 * a02)
        + r0 * (a01 * a12 - a11 * a02)
    ) / det
    resid = yl - b0 - b1 * xl - b2 * zl
    sse = (resid * resid).sum()
    sigma2 = sse / (yl.size - 3)
    inv11 = (n * a22 - a02 * a02) / det
    inv22 = (n * a11 - a01 * a01) / det
    t_x = b1 / np.sqrt(sigma2 * inv11)
    t_z = b2 / np.sqrt(sigma2 * inv22)
    return float(t_x), float(t_z)


def moment_check() -> CheckOutcome:
    """Recompute all 22 skew/kurt entries; each must match the frozen
    reference to two decimals."""
    started = time.perf_counter()
    worst = 0.0
    worst_label = ""
    for label, (skew_ref, kurt_ref) in REFERENCE_SHAPE.items():
        m = theoretical_moments(CATALOG[label])
        for got, want in ((m.skewness, skew_ref), (m.kurtosis, kurt_ref)):
            diff = abs(got - want)
            if diff > worst:
                worst, worst_label = diff, label
    ok = worst <= MOMENT_TOL
    return CheckOutcome(
        name="moments",
        ok=ok,
        detail=f"22 entries, worst |diff| {worst:.2e} ({worst_label})",
        elapsed_s=time.perf_counter() - started,
    )


def _random_instance(stream: np.random.Generator, labels: list[str], with_z: bool):
    n = int(stream.integers(5 if with_z else 4, 201))
    y = draw(CATALOG[labels[stream.integers(len(labels))]], n, stream)
    x = draw(CATALOG[labels[stream.integers(len(labels))]], n, stream)
    z = draw(CATALOG[labels[stream.integers(len(labels))]], n, stream) if with_z else None
    return y, x, z


def ols_oracle_check(instances: int = 10_000, seed: int = 61_803_398) -> CheckOutcome:
    """Production t statistics against long-double refits of random
    instances; relative error must stay within 1e-10."""
    started = time.perf_counter()
    stream = make_stream(seed)
    labels = list(CATALOG)
    worst = 0.0
    for i in range(instances):
        with_z = bool(i % 2)
        y, x, z = _random_instance(stream, labels, with_z)
        if with_z:
            res = fit_two(y, x, z)
            ref_x, ref_z = oracle_fit_two(y, x, z)
            pairs = ((res.t_x, ref_x), (res.t_z, ref_z))
        else:
            res = fit_simple(y, x)
            pairs = ((res.t_x, oracle_fit_simple(y, x)),)
        for got, ref in pairs:
            err = abs(got - ref) / max(1.0, abs(ref))
            if err > worst:
                worst = err
    ok = worst <= 1e-10
    return CheckOutcome(
        name="ols-oracle",
        ok=ok,
        detail=f"{instances} instances, worst rel err {worst:.2e}",
        elapsed_s=time.perf_counter() - started,
    )


def gof_calibration_check(
    B: int = 500, m: int = 1000, df: int = 28, seed: int = 27_182_818, band: float = 0.03
) -> CheckOutcome:
    """Exact t(df) draws through the full pipeline; each test's rejection
    rate at alpha = 0.05 must land in 0.05 +/- band."""
    started = time.perf_counter()
    stream = make_stream(seed)
    hits = np.zeros(3)
    for _ in range(B):
        rep = evaluate(stream.standard_t(df, m), df)
        hits += [rep.p_ad <= 0.05, rep.p_cvm <= 0.05, rep.p_ks <= 0.05]
    rates = hits / B
    ok = bool(np.all(np.abs(rates - 0.05) <= band))
    return CheckOutcome(
        name="gof-calibration",
        ok=ok,
        detail=(
            f"B={B} m={m} df={df}: ad {rates[0]:.3f}, cvm {rates[1]:.3f}, "
            f"ks {rates[2]:.3f} (band 0.05 +/- {band})"
        ),
        elapsed_s=time.perf_counter() - started,
    )


def run_all(quick: bool = False) -> list[CheckOutcome]:
    """The three checks; ``quick`` shrinks sizes and widens the band."""
    if quick:
        return [
            moment_check(),
            ols_oracle_check(instances=1500),
            gof_calibration_check(B=120, band=0.05),
        ]
    return [moment_check(), ols_oracle_check(), gof_calibration_check()]
