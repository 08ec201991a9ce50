"""EDF goodness-of-fit of a t-statistic batch against a fixed t(df).

The reference distribution is fully specified (no parameters estimated from
the batch), so the classical simple-hypothesis forms apply.  Given the
probability integral transform u_i = F(t_i) sorted ascending, with m values:

    Anderson-Darling   A^2 = -m - (1/m) sum_i (2i-1) [ln u_i + ln(1 - u_{m+1-i})]
    Cramer-von Mises   W^2 = 1/(12m) + sum_i (u_i - (2i-1)/(2m))^2
    Kolmogorov-Smirnov D   = max_i max(i/m - u_i, u_i - (i-1)/m)

P-values use the asymptotic null distributions: the Anderson-Darling
two-branch rational approximation of Marsaglia & Marsaglia (2004), the
Bessel-function series for the Cramer-von Mises limit (Anderson & Darling
1952), and the Kolmogorov series Q(lambda) = 2 sum_j (-1)^{j-1}
exp(-2 j^2 lambda^2) evaluated at lambda = sqrt(m) D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ContractViolation
from .regression import t_cdf

# u values are clamped into [CLAMP, 1 - CLAMP] before taking logs
CLAMP = 1e-15


@dataclass(frozen=True)
class GofReport:
    """Statistics and p-values of one batch, plus diagnostics.

    ``n_clamped`` counts transformed values that fell outside
    [CLAMP, 1 - CLAMP] and were pulled back before the log terms.
    """

    a2: float
    w2: float
    d: float
    p_ad: float
    p_cvm: float
    p_ks: float
    m: int
    df: int
    n_clamped: int = 0


def pit(tvalues: np.ndarray, df: int) -> np.ndarray:
    """Sorted, clamped probability integral transform of ``tvalues``."""
    t = np.asarray(tvalues, dtype=float)
    if t.ndim != 1 or t.shape[0] < 1:
        raise ContractViolation("tvalues must be a non-empty one-dimensional array")
    if not np.all(np.isfinite(t)):
        raise ContractViolation("tvalues contains non-finite values")
    u = np.sort(t_cdf(t, df))
    return np.clip(u, CLAMP, 1.0 - CLAMP)


def edf_statistics(u: np.ndarray) -> tuple[float, float, float]:
    """(A^2, W^2, D) from sorted u in (0, 1)."""
    u = np.asarray(u, dtype=float)
    m = u.shape[0]
    if u.ndim != 1 or m < 1:
        raise ContractViolation("u must be a non-empty one-dimensional array")
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ContractViolation("u values must lie strictly inside (0, 1)")
    if np.any(np.diff(u) < 0.0):
        raise ContractViolation("u must be sorted ascending")
    i = np.arange(1, m + 1, dtype=float)
    odd = 2.0 * i - 1.0
    a2 = -m - np.sum(odd * (np.log(u) + np.log(1.0 - u[::-1]))) / m
    w2 = 1.0 / (12.0 * m) + np.sum((u - odd / (2.0 * m)) ** 2)
    d = max(np.max(i / m - u), np.max(u - (i - 1.0) / m))
    return float(a2), float(w2), float(d)


def ad_pvalue(a2: float) -> float:
    """Upper-tail p of the A^2 limit law (Marsaglia & Marsaglia 2004)."""
    if not np.isfinite(a2):
        raise ContractViolation(f"a2 must be finite, got {a2}")
    z = a2
    if z <= 0.0:
        return 1.0
    if z < 2.0:
        cdf = (
            np.exp(-1.2337141 / z)
            / np.sqrt(z)
            * (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z)
        )
    else:
        cdf = np.exp(
            -np.exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z)
        )
    return float(min(1.0, max(0.0, 1.0 - cdf)))


def cvm_pvalue(w2: float) -> float:
    """Upper-tail p of the W^2 limit law via its Bessel-K series."""
    if not np.isfinite(w2):
        raise ContractViolation(f"w2 must be finite, got {w2}")
    x = w2
    if x <= 0.0:
        return 1.0
    if x > 12.0:
        return 0.0
    cdf = 0.0
    for k in range(20):
        y = 4.0 * k + 1.0
        q = y * y / (16.0 * x)
        if q > 700.0:
            break
        u = np.exp(special.gammaln(k + 0.5) - special.gammaln(k + 1.0)) / (
            np.pi**1.5 * np.sqrt(x)
        )
        term = u * np.sqrt(y) * np.exp(-q) * special.kv(0.25, q)
        cdf += term
        if abs(term) < 1e-14:
            break
    return float(min(1.0, max(0.0, 1.0 - cdf)))


def ks_pvalue(d: float, m: int) -> float:
    """Two-sided Kolmogorov p via Q(sqrt(m) d), series cut at 1e-12."""
    if not np.isfinite(d) or d < 0.0:
        raise ContractViolation(f"d must be finite and >= 0, got {d}")
    if m < 1:
        raise ContractViolation(f"m must be >= 1, got {m}")
    lam = np.sqrt(m) * d
    if lam < 0.2:
        return 1.0
    s = 0.0
    j = 1
    while True:
        term = np.exp(-2.0 * j * j * lam * lam)
        s += term if j % 2 == 1 else -term
        if term < 1e-12:
            break
        j += 1
    return float(min(1.0, max(0.0, 2.0 * s)))


def evaluate_pit(u_raw: np.ndarray, df: int) -> GofReport:
    """Full report from unsorted, unclamped transform values."""
    u_raw = np.asarray(u_raw, dtype=float)
    if u_raw.ndim != 1 or u_raw.shape[0] < 1:
        raise ContractViolation("u_raw must be a non-empty one-dimensional array")
    n_clamped = int(np.count_nonzero((u_raw < CLAMP) | (u_raw > 1.0 - CLAMP)))
    u = np.clip(np.sort(u_raw), CLAMP, 1.0 - CLAMP)
    m = u.shape[0]
    a2, w2, d = edf_statistics(u)
    return GofReport(
        a2=a2,
        w2=w2,
        d=d,
        p_ad=ad_pvalue(a2),
        p_cvm=cvm_pvalue(w2),
        p_ks=ks_pvalue(d, m),
        m=m,
        df=int(df),
        n_clamped=n_clamped,
    )


def evaluate(tvalues: np.ndarray, df: int) -> GofReport:
    """Report for a batch of t statistics against the t(df) reference."""
    t = np.asarray(tvalues, dtype=float)
    if t.ndim != 1 or t.shape[0] < 1:
        raise ContractViolation("tvalues must be a non-empty one-dimensional array")
    if not np.all(np.isfinite(t)):
        raise ContractViolation("tvalues contains non-finite values")
    return evaluate_pit(t_cdf(t, df), df)
