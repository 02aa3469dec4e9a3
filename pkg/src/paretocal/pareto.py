"""Pareto-front extraction, frontier pruning and p-value ordering.

Front extraction uses strict dominance in every coordinate, exactly as the
selection stage defines it; duplicates of a front point are therefore
retained. Frontier pruning works in the reduced (combined p-value, free
objectives) space and uses standard weak dominance there, so candidates that
differ only along controlled dimensions without improving anything are
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pvalues import combine_max, pvalue_fn

__all__ = [
    "ObjectivePoint",
    "OrderedCandidate",
    "pareto_front",
    "prune_front",
    "order_by_pvalue",
]


@dataclass(frozen=True)
class ObjectivePoint:
    """One configuration's empirical risks on the optimization split."""

    grid_index: int
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))


@dataclass(frozen=True)
class OrderedCandidate:
    """A front member annotated with its combined optimization-split p-value."""

    grid_index: int
    p_opt: float
    free_values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "free_values", tuple(float(v) for v in self.free_values)
        )


def strict_non_dominated_mask(values: np.ndarray) -> np.ndarray:
    """True for rows not strictly dominated (another row smaller in every
    coordinate) by any other row."""
    n, d = values.shape
    if n == 0:
        return np.zeros(0, dtype=bool)
    if d == 2:
        return _sweep_mask_2d(values)
    keep = np.ones(n, dtype=bool)
    # O(n^2) dominance filter; fine at front sizes used here
    for i in range(n):
        dominated = np.all(values < values[i], axis=1)
        if dominated.any():
            keep[i] = False
    return keep


def _sweep_mask_2d(values: np.ndarray) -> np.ndarray:
    order = np.lexsort((values[:, 1], values[:, 0]))
    keep = np.ones(len(values), dtype=bool)
    best_y_prev = np.inf  # min y among points with strictly smaller x
    i = 0
    while i < len(order):
        j = i
        x = values[order[i], 0]
        group_min_y = np.inf
        while j < len(order) and values[order[j], 0] == x:
            idx = order[j]
            if values[idx, 1] > best_y_prev:
                keep[idx] = False
            group_min_y = min(group_min_y, values[idx, 1])
            j += 1
        best_y_prev = min(best_y_prev, group_min_y)
        i = j
    return keep


def pareto_front(points) -> list[ObjectivePoint]:
    """The subset of points not strictly dominated by any other point."""
    points = list(points)
    if not points:
        return []
    dims = {len(p.values) for p in points}
    if len(dims) != 1:
        raise ValueError("all points must share the same dimensionality")
    values = np.array([p.values for p in points], dtype=float)
    keep = strict_non_dominated_mask(values)
    return [p for p, k in zip(points, keep) if k]


def weak_non_dominated_mask(values: np.ndarray) -> np.ndarray:
    """True for rows not weakly dominated (<= everywhere, < somewhere)."""
    n = values.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        leq = np.all(values <= values[i], axis=1)
        lt = np.any(values < values[i], axis=1)
        if np.any(leq & lt):
            keep[i] = False
    return keep


def prune_front(candidates) -> list[OrderedCandidate]:
    """Drop candidates dominated in the reduced (p_opt, free values) space."""
    candidates = list(candidates)
    if not candidates:
        return []
    values = np.array(
        [(c.p_opt, *c.free_values) for c in candidates], dtype=float
    )
    keep = weak_non_dominated_mask(values)
    return [c for c, k in zip(candidates, keep) if k]


def combined_pvalues(
    risk_matrix: np.ndarray, alphas, m: int, pvalue_kind: str
) -> np.ndarray:
    """Max-combined p-values for rows of controlled empirical risks.

    ``risk_matrix`` has one row per candidate and one column per controlled
    objective; the combination across objectives is the per-row maximum.
    """
    pfun = pvalue_fn(pvalue_kind)
    cols = [pfun(risk_matrix[:, i], a, m) for i, a in enumerate(alphas)]
    return np.max(np.column_stack(cols), axis=1)


def order_by_pvalue(
    front, alphas, m1: int, pvalue_kind: str, budget: int | None = None
) -> list[OrderedCandidate]:
    """Annotate front points with combined p-values and sort for testing.

    Points are sorted by p_opt ascending (most rejectable first). Ties are
    broken by descending first-free-objective estimate so a rejection streak
    that ends inside a tie group keeps the less aggressive configurations;
    remaining ties fall back to grid index for determinism. The result is
    truncated to ``budget`` entries.
    """
    front = list(front)
    if not front:
        raise ValueError("order_by_pvalue needs a non-empty front")
    c = len(alphas)
    pfun = pvalue_fn(pvalue_kind)
    candidates = []
    for point in front:
        controlled = point.values[:c]
        p_opt = combine_max([pfun(r, a, m1) for r, a in zip(controlled, alphas)])
        candidates.append(
            OrderedCandidate(point.grid_index, p_opt, point.values[c:])
        )
    first_free = lambda cand: cand.free_values[0] if cand.free_values else 0.0
    candidates.sort(key=lambda cand: (cand.p_opt, -first_free(cand), cand.grid_index))
    if budget is not None:
        candidates = candidates[:budget]
    return candidates
