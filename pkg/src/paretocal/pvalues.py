"""Concentration-bound p-values for nulls of the form "true risk exceeds alpha".

Both p-value kinds accept a scalar or an array of empirical risks and are
vectorized over that argument. Small p-values are evidence that the true risk
of a configuration is below the bound.
"""

from __future__ import annotations

import numpy as np
from scipy import special, stats

__all__ = [
    "hoeffding_pvalue",
    "hb_pvalue",
    "binomial_cdf",
    "combine_max",
]

# floating-point means of 0/1 losses must map back to exact counts
_COUNT_TOL = 1e-9


def _check_args(r_hat, alpha: float, m: int) -> np.ndarray:
    r = np.asarray(r_hat, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError("empirical risk must lie in [0, 1]")
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must lie in (0, 1]")
    if m < 1:
        raise ValueError("sample count m must be at least 1")
    return r


def hoeffding_pvalue(r_hat, alpha: float, m: int):
    """Hoeffding p-value exp(-2 m (alpha - r_hat)_+^2)."""
    r = _check_args(r_hat, alpha, m)
    gap = np.maximum(alpha - r, 0.0)
    p = np.exp(-2.0 * m * gap**2)
    return float(p) if np.isscalar(r_hat) or p.ndim == 0 else p


def binomial_cdf(k: int, m: int, q: float) -> float:
    """P(Binomial(m, q) <= k)."""
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    if m < 1:
        raise ValueError("need m >= 1")
    if not 0.0 <= q <= 1.0:
        raise ValueError("success probability must lie in [0, 1]")
    return float(stats.binom.cdf(k, m, q))


def _risk_counts(r: np.ndarray, m: int) -> np.ndarray:
    """ceil(m * r), rounding near-integer products to the integer first."""
    scaled = m * r
    nearest = np.rint(scaled)
    snapped = np.where(np.abs(scaled - nearest) <= _COUNT_TOL * m, nearest, np.ceil(scaled))
    return snapped.astype(int)


def hb_pvalue(r_hat, alpha: float, m: int):
    """Hoeffding-Bentkus p-value.

    The minimum of a KL-Hoeffding tail term exp(-m * h1(min(r_hat, alpha), alpha))
    and the Bentkus term e * P(Binomial(m, alpha) <= ceil(m * r_hat)), clamped
    to 1. Monotone non-decreasing in r_hat, non-increasing in alpha.
    """
    r = _check_args(r_hat, alpha, m)
    a = np.minimum(r, alpha)
    # h1(a, b) = a log(a/b) + (1-a) log((1-a)/(1-b)); rel_entr handles a = 0
    kl = special.rel_entr(a, alpha) + special.rel_entr(1.0 - a, 1.0 - alpha)
    with np.errstate(over="ignore"):
        kl_term = np.exp(-m * kl)
    bentkus_term = np.e * stats.binom.cdf(_risk_counts(r, m), m, alpha)
    p = np.minimum(1.0, np.minimum(kl_term, bentkus_term))
    return float(p) if np.isscalar(r_hat) or p.ndim == 0 else p


def combine_max(pvals):
    """Combined p-value for the union null over several risks: the maximum."""
    arr = np.asarray(pvals, dtype=float)
    if arr.size == 0:
        raise ValueError("combine_max needs at least one p-value")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("p-values must lie in [0, 1]")
    return float(arr.max())


def pvalue_fn(kind: str):
    """Look up a p-value function by kind name."""
    if kind == "hoeffding":
        return hoeffding_pvalue
    if kind == "hoeffding_bentkus":
        return hb_pvalue
    raise ValueError(f"unknown p-value kind {kind!r}")
