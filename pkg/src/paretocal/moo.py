"""Candidate-front construction: exhaustive grid evaluation, or a budgeted
scalarized search over continuous threshold space.

The search replaces a surrogate-based black-box optimizer with random
augmented-Tchebycheff scalarizations refined by coordinate descent: cheap,
dependency-free and deterministic given its seed, while exposing the same
interface (a budgeted evaluator producing an approximate front).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objectives import empirical_risks
from .pareto import ObjectivePoint, pareto_front, strict_non_dominated_mask
from .types import ConfigGrid, ConfigPoint, LossTable

__all__ = ["EvalBudget", "grid_front", "scalarized_search", "SearchResult"]

_AUGMENTATION = 0.05


@dataclass(frozen=True)
class EvalBudget:
    max_evaluations: int
    seed: int = 0

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be at least 1")


def grid_front(
    table: LossTable, spec_objectives, opt_idx: np.ndarray
) -> list[ObjectivePoint]:
    """Exact Pareto front of all grid configurations on the optimization split."""
    opt_idx = np.asarray(opt_idx)
    if opt_idx.size == 0:
        raise ValueError("optimization split must be non-empty")
    risks = empirical_risks(table, spec_objectives, opt_idx)
    stacked = np.column_stack([risks[o.id] for o in spec_objectives])
    points = [
        ObjectivePoint(i, tuple(stacked[i])) for i in range(stacked.shape[0])
    ]
    return pareto_front(points)


@dataclass
class SearchResult:
    """Non-dominated archive of a scalarized search run."""

    points: list[ConfigPoint]
    values: np.ndarray  # (len(points), n_objectives)
    evaluations: int


class _BudgetExhausted(Exception):
    pass


class _CachedEvaluator:
    """Counts true evaluations against the budget; repeats are free."""

    def __init__(self, fn, max_evaluations: int):
        self.fn = fn
        self.max_evaluations = max_evaluations
        self.count = 0
        self.cache: dict[tuple[float, ...], np.ndarray] = {}
        self.archive_x: list[tuple[float, ...]] = []
        self.archive_f: list[np.ndarray] = []

    def __call__(self, x: np.ndarray) -> np.ndarray:
        key = tuple(float(v) for v in x)
        if key in self.cache:
            return self.cache[key]
        if self.count >= self.max_evaluations:
            raise _BudgetExhausted
        self.count += 1
        f = np.asarray(self.fn(ConfigPoint(key)), dtype=float)
        self.cache[key] = f
        self.archive_x.append(key)
        self.archive_f.append(f)
        return f


def _snap(x: np.ndarray, grid: ConfigGrid) -> np.ndarray:
    out = []
    for v, axis in zip(x, grid.dims):
        arr = np.asarray(axis)
        out.append(arr[np.argmin(np.abs(arr - v))])
    return np.array(out)


def scalarized_search(
    eval_fn,
    bounds,
    budget: EvalBudget,
    grid: ConfigGrid | None = None,
) -> SearchResult:
    """Approximate the Pareto front of a black-box objective vector.

    Repeatedly draws a random weight vector on the probability simplex,
    minimizes the augmented Tchebycheff scalarization of archive-normalized
    objectives by coordinate search from the incumbent, and returns the
    non-dominated archive once the evaluation budget is spent. Deterministic
    given ``budget.seed``. When a grid is supplied, candidate thresholds are
    snapped to grid values before evaluation.
    """
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([b[1] for b in bounds], dtype=float)
    ndim = len(bounds)
    if budget.max_evaluations < ndim + 1:
        raise ValueError("budget must allow at least dimension + 1 evaluations")
    rng = np.random.default_rng(budget.seed)
    ev = _CachedEvaluator(eval_fn, budget.max_evaluations)

    def propose(x):
        x = np.clip(x, lo, hi)
        return _snap(x, grid) if grid is not None else x

    try:
        f0 = ev(propose((lo + hi) / 2.0))
        n_obj = f0.size
        for _ in range(max(ndim, 2)):
            ev(propose(lo + (hi - lo) * rng.random(ndim)))
        stagnant = 0
        while True:
            count_before = ev.count
            w = rng.dirichlet(np.ones(n_obj))
            arch = np.array(ev.archive_f)
            fmin = arch.min(axis=0)
            frange = np.maximum(arch.max(axis=0) - fmin, 1e-12)

            def scal(f):
                z = (f - fmin) / frange
                return float(np.max(w * z) + _AUGMENTATION * np.sum(w * z))

            scores = [scal(f) for f in ev.archive_f]
            best = int(np.argmin(scores))
            x = np.array(ev.archive_x[best])
            fbest = scal(ev.archive_f[best])
            step = 0.25
            while step > 1e-3:
                improved = False
                for d in rng.permutation(ndim):
                    for sign in (1.0, -1.0):
                        cand = x.copy()
                        cand[d] += sign * step * (hi[d] - lo[d])
                        cand = propose(cand)
                        fc = scal(ev(cand))
                        if fc < fbest - 1e-15:
                            x, fbest, improved = cand, fc, True
                if not improved:
                    step *= 0.5
            if ev.count == count_before:
                # descent only revisited cached points; try fresh random
                # proposals, and stop once the reachable space is exhausted
                for _ in range(32):
                    ev(propose(lo + (hi - lo) * rng.random(ndim)))
                    if ev.count > count_before:
                        break
            if ev.count == count_before:
                stagnant += 1
                if stagnant >= 3:
                    break
            else:
                stagnant = 0
    except _BudgetExhausted:
        pass

    if not ev.archive_f:
        raise RuntimeError("budget exhausted before any evaluation completed")
    values = np.array(ev.archive_f)
    keep = strict_non_dominated_mask(values)
    # drop exact duplicates of kept rows so the archive stays compact
    seen: set[tuple[float, ...]] = set()
    points, vals = [], []
    for i in np.flatnonzero(keep):
        key = ev.archive_x[i]
        if key in seen:
            continue
        seen.add(key)
        points.append(ConfigPoint(key))
        vals.append(values[i])
    return SearchResult(points, np.array(vals), ev.count)
