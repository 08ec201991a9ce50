"""Closed-form OLS fits with one or two regressors plus an intercept.

All cross-products are accumulated two-pass (means subtracted first) with
pairwise summation, so heavy-tailed draws that span many orders of magnitude
keep close to full double precision.  The t statistic for a slope is
``beta_hat / se(beta_hat)`` with residual degrees of freedom n - 2 (one
regressor) or n - 3 (two regressors).

``t_cdf`` evaluates the Student t distribution function through the
regularized incomplete beta function, using the complement identity

    F(x) = 1/2 + sign(x)/2 * I_{x^2/(df+x^2)}(1/2, df/2)

which stays accurate near x = 0 at large df, where the textbook form
``1 - I_{df/(df+x^2)}(df/2, 1/2) / 2`` loses digits to cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ContractViolation, DegenerateFitError

# relative floors for "no usable variation": Sxx against sum(x^2),
# Syy against sum(y^2), SSE against Syy
_REL_TOL_VARIATION = 1e-12
# relative floor for the 2x2 centered normal-equation determinant
_REL_TOL_RANK = 1e-10


@dataclass(frozen=True)
class FitResult:
    """Slope t statistics of one fit and their alpha = 0.05 verdicts."""

    t_x: float
    df: int
    reject_x_at_05: bool
    t_z: float | None = None
    reject_z_at_05: bool | None = None


def t_cdf(x, df):
    """Student t distribution function, elementwise over ``x``.

    Accepts scalars or arrays; ``df`` must be a positive integer (scalar).
    Absolute error stays below 1e-12 for df up to 1e5.
    """
    if df < 1 or int(df) != df:
        raise ContractViolation(f"df must be a positive integer, got {df}")
    x = np.asarray(x, dtype=float)
    # q = x^2 / (df + x^2) in a form that survives x^2 overflowing: the
    # ratio df / x^2 underflows to 0 and q saturates at 1
    with np.errstate(over="ignore", divide="ignore"):
        q = 1.0 / (1.0 + df / (x * x))
    half = 0.5 * special.betainc(0.5, df / 2.0, q)
    out = np.where(x >= 0.0, 0.5 + half, 0.5 - half)
    if out.ndim == 0:
        return float(out)
    return out


def _two_sided_p(t: float, df: int) -> float:
    return 2.0 * (1.0 - t_cdf(abs(t), df))


def _as_matrix(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float)[None, :]


def _validate_vectors(name_by_vec: dict[str, np.ndarray], n_min: int) -> int:
    lengths = set()
    for name, v in name_by_vec.items():
        v = np.asarray(v)
        if v.ndim != 1:
            raise ContractViolation(f"{name} must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise ContractViolation(f"{name} contains non-finite values")
        lengths.add(v.shape[0])
    if len(lengths) != 1:
        raise ContractViolation(f"input lengths differ: {sorted(lengths)}")
    n = lengths.pop()
    if n < n_min:
        raise ContractViolation(f"need at least {n_min} observations, got {n}")
    return n


def fit_simple_batch(Y: np.ndarray, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise fits of y on (1, x) over matching (R, n) matrices.

    Returns (t, ok); rows flagged not-ok are degenerate and their t is
    meaningless.  No exception is raised here so callers can redraw.
    """
    n = Y.shape[1]
    Ym = Y - Y.mean(axis=1, keepdims=True)
    Xm = X - X.mean(axis=1, keepdims=True)
    sxx = np.sum(Xm * Xm, axis=1)
    sxy = np.sum(Xm * Ym, axis=1)
    syy = np.sum(Ym * Ym, axis=1)
    ok = (sxx > _REL_TOL_VARIATION * np.sum(X * X, axis=1)) & (
        syy > _REL_TOL_VARIATION * np.sum(Y * Y, axis=1)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = np.where(ok, sxy, np.nan) / np.where(ok, sxx, 1.0)
        sse = syy - beta * sxy
        ok &= sse > _REL_TOL_VARIATION * syy
        t = beta / np.sqrt(sse / ((n - 2) * sxx))
    ok &= np.isfinite(t)
    return t, ok


def fit_two_batch(
    Y: np.ndarray, X: np.ndarray, Z: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Row-wise fits of y on (1, x, z).  Returns (t_x, t_z, ok)."""
    n = Y.shape[1]
    Ym = Y - Y.mean(axis=1, keepdims=True)
    Xm = X - X.mean(axis=1, keepdims=True)
    Zm = Z - Z.mean(axis=1, keepdims=True)
    sxx = np.sum(Xm * Xm, axis=1)
    szz = np.sum(Zm * Zm, axis=1)
    sxz = np.sum(Xm * Zm, axis=1)
    sxy = np.sum(Xm * Ym, axis=1)
    szy = np.sum(Zm * Ym, axis=1)
    syy = np.sum(Ym * Ym, axis=1)
    det = sxx * szz - sxz * sxz
    ok = (
        (sxx > _REL_TOL_VARIATION * np.sum(X * X, axis=1))
        & (szz > _REL_TOL_VARIATION * np.sum(Z * Z, axis=1))
        & (syy > _REL_TOL_VARIATION * np.sum(Y * Y, axis=1))
        & (det > _REL_TOL_RANK * sxx * szz)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(ok, det, 1.0)
        bx = (szz * sxy - sxz * szy) / d
        bz = (sxx * szy - sxz * sxy) / d
        sse = syy - bx * sxy - bz * szy
        ok &= sse > _REL_TOL_VARIATION * syy
        scale = np.sqrt(sse / ((n - 3) * d))
        t_x = bx / (scale * np.sqrt(szz))
        t_z = bz / (scale * np.sqrt(sxx))
    ok &= np.isfinite(t_x) & np.isfinite(t_z)
    return t_x, t_z, ok


def fit_simple(y: np.ndarray, x: np.ndarray, alpha: float = 0.05) -> FitResult:
    """Fit y on (1, x); raises :class:`DegenerateFitError` when x or y is
    (numerically) constant or the fit is perfect."""
    n = _validate_vectors({"y": y, "x": x}, n_min=3)
    t, ok = fit_simple_batch(_as_matrix(y), _as_matrix(x))
    if not ok[0]:
        raise DegenerateFitError("no usable variation in the (y, x) fit")
    df = n - 2
    tx = float(t[0])
    return FitResult(t_x=tx, df=df, reject_x_at_05=_two_sided_p(tx, df) <= alpha)


def fit_two(y: np.ndarray, x: np.ndarray, z: np.ndarray, alpha: float = 0.05) -> FitResult:
    """Fit y on (1, x, z); degenerate or rank-deficient designs raise."""
    n = _validate_vectors({"y": y, "x": x, "z": z}, n_min=4)
    t_x, t_z, ok = fit_two_batch(_as_matrix(y), _as_matrix(x), _as_matrix(z))
    if not ok[0]:
        raise DegenerateFitError("no usable variation or rank in the (y, x, z) fit")
    df = n - 3
    tx, tz = float(t_x[0]), float(t_z[0])
    return FitResult(
        t_x=tx,
        df=df,
        reject_x_at_05=_two_sided_p(tx, df) <= alpha,
        t_z=tz,
        reject_z_at_05=_two_sided_p(tz, df) <= alpha,
    )
