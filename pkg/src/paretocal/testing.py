"""Configuration-selection procedures.

The main entry point is :func:`pareto_testing`; the remaining procedures are
the baselines it is compared against (fixed-sequence and graphical multiple
testing, Bonferroni, path-based orderings, and the naive constrained
selections that forgo FWER control). Every procedure is deterministic given
(table, spec, seed) and returns a :class:`~paretocal.types.TestOutcome`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .objectives import empirical_risks
from .pareto import (
    ObjectivePoint,
    OrderedCandidate,
    combined_pvalues,
    order_by_pvalue,
    pareto_front,
    prune_front,
    weak_non_dominated_mask,
)
from .pvalues import pvalue_fn
from .types import CalibrationSpec, LossTable, TestOutcome

__all__ = [
    "FSTResult",
    "BudgetGraph",
    "SimplexWeights",
    "split_examples",
    "fixed_sequence_test",
    "pareto_testing",
    "bonferroni",
    "bonferroni_select",
    "sgt",
    "build_3d_hamming_graph",
    "sgt_3d",
    "split_fst_baseline",
    "low_risk_path",
    "constrained_path",
    "alpha_constrained",
    "alpha_delta_constrained",
    "time_share",
    "METHODS",
]


# ---------------------------------------------------------------------------
# splitting and shared per-split computations


def split_examples(m: int, split_fraction: float, seed: int):
    """Seeded shuffle split into optimization and testing index arrays."""
    if m < 2:
        raise ValueError("need at least two examples to split")
    m1 = min(max(int(round(split_fraction * m)), 1), m - 1)
    perm = np.random.default_rng(seed).permutation(m)
    return np.sort(perm[:m1]), np.sort(perm[m1:])


def _split_hash(opt_idx: np.ndarray, test_idx: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(opt_idx.astype(np.int64).tobytes())
    h.update(b"|")
    h.update(test_idx.astype(np.int64).tobytes())
    return h.hexdigest()[:16]


@dataclass
class _SplitRisks:
    opt_idx: np.ndarray
    test_idx: np.ndarray
    risks_opt: dict[str, np.ndarray]
    risks_test: dict[str, np.ndarray]
    split_hash: str

    @property
    def m1(self) -> int:
        return self.opt_idx.size

    @property
    def m2(self) -> int:
        return self.test_idx.size


def _compute_split(table: LossTable, spec: CalibrationSpec, seed: int) -> _SplitRisks:
    opt_idx, test_idx = split_examples(
        table.example_count, spec.split_fraction, seed
    )
    return _SplitRisks(
        opt_idx,
        test_idx,
        empirical_risks(table, spec.objectives, opt_idx),
        empirical_risks(table, spec.objectives, test_idx),
        _split_hash(opt_idx, test_idx),
    )


def _controlled_matrix(risks: dict[str, np.ndarray], spec: CalibrationSpec, cols):
    return np.column_stack([risks[o.id][cols] for o in spec.controlled])


def _free_matrix(risks: dict[str, np.ndarray], spec: CalibrationSpec, cols):
    return np.column_stack([risks[o.id][cols] for o in spec.free])


# ---------------------------------------------------------------------------
# fixed sequence testing


@dataclass(frozen=True)
class FSTResult:
    """Outcome of a fixed-sequence test walk.

    ``stop_index`` is the 0-based position of the first test that failed
    (equal to the sequence length when every test rejected); the rejected
    positions are exactly ``range(stop_index)``.
    """

    stop_index: int

    @property
    def rejected(self) -> list[int]:
        return list(range(self.stop_index))


def fixed_sequence_test(ordered_pvalues, delta: float) -> FSTResult:
    """Walk an ordered p-value sequence at full budget, stop at first failure."""
    p = np.asarray(ordered_pvalues, dtype=float)
    if p.size and (p.min() < 0.0 or p.max() > 1.0):
        raise ValueError("p-values must lie in [0, 1]")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    failures = np.flatnonzero(p >= delta)
    return FSTResult(int(failures[0]) if failures.size else p.size)


# ---------------------------------------------------------------------------
# outcome assembly shared by the sequential procedures


def _testing_pvalues(
    risk_rows: np.ndarray, spec: CalibrationSpec, m2: int
) -> tuple[np.ndarray, list[str]]:
    """Combined testing p-values and the binding objective id per row."""
    pfun = pvalue_fn(spec.pvalue_kind)
    cols = np.column_stack(
        [pfun(risk_rows[:, i], o.alpha, m2) for i, o in enumerate(spec.controlled)]
    )
    binding = [spec.controlled[j].id for j in np.argmax(cols, axis=1)]
    return cols.max(axis=1), binding


def _select_from_rejected(
    rejected: list[int], free_test: np.ndarray, k: int
) -> tuple[int, ...]:
    """Final selection: non-dominated rejected configurations under
    testing-split free estimates (single argmin when k == 1)."""
    if not rejected:
        return ()
    if k == 1:
        return (rejected[int(np.argmin(free_test[:, 0]))],)
    keep = weak_non_dominated_mask(free_test)
    return tuple(g for g, kp in zip(rejected, keep) if kp)


def _sequential_outcome(
    ordered: list[OrderedCandidate],
    sr: _SplitRisks,
    spec: CalibrationSpec,
    method: str,
    extra_diagnostics: dict | None = None,
) -> TestOutcome:
    """Run FST over an ordered candidate list and assemble the outcome."""
    idx = np.array([c.grid_index for c in ordered], dtype=int)
    test_controlled = _controlled_matrix(sr.risks_test, spec, idx)
    p_test, binding = _testing_pvalues(test_controlled, spec, sr.m2)
    fst = fixed_sequence_test(p_test, spec.delta)
    rejected = [ordered[i].grid_index for i in fst.rejected]
    free_test = _free_matrix(sr.risks_test, spec, np.array(rejected, dtype=int))
    selected = _select_from_rejected(rejected, free_test, spec.k)
    diagnostics = {
        "method": method,
        "split_hash": sr.split_hash,
        "m1": sr.m1,
        "m2": sr.m2,
        "binding_objective": {
            int(g): b for g, b in zip(idx.tolist(), binding)
        },
        "free_testing": {
            int(g): _free_matrix(sr.risks_test, spec, np.array([g]))[0].tolist()
            for g in rejected
        },
    }
    if extra_diagnostics:
        diagnostics.update(extra_diagnostics)
    return TestOutcome(
        ordered_candidates=tuple(
            (c.grid_index, c.p_opt, c.free_values) for c in ordered
        ),
        rejected=tuple(rejected),
        selected=selected,
        stop_index=fst.stop_index,
        testing_pvalues={int(g): float(p) for g, p in zip(idx.tolist(), p_test)},
        diagnostics=diagnostics,
    )


def _abstention(method: str, sr: _SplitRisks | None = None) -> TestOutcome:
    diagnostics = {"method": method}
    if sr is not None:
        diagnostics["split_hash"] = sr.split_hash
    return TestOutcome((), (), (), 0, {}, diagnostics)


# ---------------------------------------------------------------------------
# Pareto Testing


def order_candidates(
    risks_opt: np.ndarray, spec: CalibrationSpec, m1: int, indices=None
) -> list[OrderedCandidate]:
    """Front extraction, optional pruning and p-value ordering.

    ``risks_opt`` has one row per candidate, columns ordered as the spec's
    objectives (controlled first). ``indices`` maps rows to grid indices.
    """
    n = risks_opt.shape[0]
    if indices is None:
        indices = np.arange(n)
    points = [ObjectivePoint(int(indices[i]), tuple(risks_opt[i])) for i in range(n)]
    front = pareto_front(points)
    ordered = order_by_pvalue(
        front,
        [o.alpha for o in spec.controlled],
        m1,
        spec.pvalue_kind,
        budget=None,
    )
    if spec.c > 1:
        ordered = prune_front(ordered)
        ordered.sort(
            key=lambda c: (
                c.p_opt,
                -(c.free_values[0] if c.free_values else 0.0),
                c.grid_index,
            )
        )
    return ordered[: spec.front_budget]


def pareto_testing(
    table: LossTable, spec: CalibrationSpec, split_seed: int
) -> TestOutcome:
    """Two-stage selection: Pareto front on the optimization split, ordered by
    combined p-values, then fixed-sequence testing on the testing split."""
    sr = _compute_split(table, spec, split_seed)
    all_cols = np.arange(table.config_count)
    risks_opt = np.column_stack(
        [sr.risks_opt[o.id][all_cols] for o in spec.objectives]
    )
    ordered = order_candidates(risks_opt, spec, sr.m1)
    if not ordered:
        return _abstention("pareto_testing", sr)
    return _sequential_outcome(ordered, sr, spec, "pareto_testing")


# ---------------------------------------------------------------------------
# Bonferroni


def bonferroni(pvalues: dict[int, float], delta: float, n_tests: int) -> set[int]:
    """Reject exactly the configurations with p < delta / n_tests."""
    if n_tests < len(pvalues):
        raise ValueError("n_tests must cover all supplied p-values")
    threshold = delta / n_tests
    return {g for g, p in pvalues.items() if p < threshold}


def bonferroni_select(
    table: LossTable, spec: CalibrationSpec, split_seed: int = 0
) -> TestOutcome:
    """Bonferroni correction over the full calibration set (no split)."""
    m = table.example_count
    risks = empirical_risks(table, spec.objectives)
    all_cols = np.arange(table.config_count)
    controlled = _controlled_matrix(risks, spec, all_cols)
    p_cal = combined_pvalues(
        controlled, [o.alpha for o in spec.controlled], m, spec.pvalue_kind
    )
    rejected_set = bonferroni(
        {int(g): float(p) for g, p in enumerate(p_cal)},
        spec.delta,
        table.config_count,
    )
    order = sorted(rejected_set, key=lambda g: (p_cal[g], g))
    free = _free_matrix(risks, spec, np.array(order, dtype=int)) if order else np.zeros((0, spec.k))
    selected = _select_from_rejected(order, free, spec.k)
    ordered_candidates = tuple(
        (g, float(p_cal[g]), tuple(_free_matrix(risks, spec, np.array([g]))[0]))
        for g in order
    )
    return TestOutcome(
        ordered_candidates=ordered_candidates,
        rejected=tuple(order),
        selected=selected,
        stop_index=len(order),
        testing_pvalues={g: float(p_cal[g]) for g in order},
        diagnostics={
            "method": "bonferroni",
            "threshold": spec.delta / table.config_count,
            "free_testing": {
                int(g): _free_matrix(risks, spec, np.array([g]))[0].tolist()
                for g in order
            },
        },
    )


# ---------------------------------------------------------------------------
# sequential graphical testing


@dataclass(frozen=True)
class BudgetGraph:
    """Directed error-budget graph for graphical testing.

    ``initial_budgets`` sum to the total tolerance; each node's outgoing
    weights sum to at most 1.
    """

    node_count: int
    initial_budgets: tuple[float, ...]
    weights: dict[int, tuple[tuple[int, float], ...]] = field(default_factory=dict)

    def __post_init__(self):
        budgets = tuple(float(b) for b in self.initial_budgets)
        object.__setattr__(self, "initial_budgets", budgets)
        if len(budgets) != self.node_count:
            raise ValueError("one initial budget per node required")
        if any(b < 0 for b in budgets):
            raise ValueError("budgets must be non-negative")
        weights = {
            int(src): tuple((int(dst), float(w)) for dst, w in edges)
            for src, edges in self.weights.items()
        }
        object.__setattr__(self, "weights", weights)
        for src, edges in weights.items():
            if not 0 <= src < self.node_count:
                raise ValueError("edge source out of range")
            total = 0.0
            for dst, w in edges:
                if not 0 <= dst < self.node_count:
                    raise ValueError("edge target out of range")
                if w < 0:
                    raise ValueError("edge weights must be non-negative")
                total += w
            if total > 1.0 + 1e-12:
                raise ValueError("outgoing edge weights must sum to at most 1")

    @property
    def delta(self) -> float:
        return float(sum(self.initial_budgets))


def sgt(graph: BudgetGraph, pvalues, return_trace: bool = False):
    """Sequential graphical test; returns node indices in rejection order.

    Repeatedly tests the live node minimizing p / budget; on rejection its
    budget flows along outgoing edges to live nodes, on the first failure the
    walk terminates (the printed loop form would spin forever there). With
    ``return_trace`` the per-step budget vectors are returned as well, for
    auditing budget conservation.
    """
    p = np.asarray(pvalues, dtype=float)
    if p.size != graph.node_count:
        raise ValueError("one p-value per node required")
    budgets = np.array(graph.initial_budgets, dtype=float)
    live = np.ones(graph.node_count, dtype=bool)
    rejected: list[int] = []
    trace = [budgets.copy()]
    while True:
        candidates = np.flatnonzero(live & (budgets > 0.0))
        if candidates.size == 0:
            break
        ratios = p[candidates] / budgets[candidates]
        best = int(candidates[np.argmin(ratios)])
        if p[best] >= budgets[best]:
            break
        rejected.append(best)
        live[best] = False
        freed = budgets[best]
        budgets[best] = 0.0
        for dst, w in graph.weights.get(best, ()):
            if live[dst]:
                budgets[dst] += freed * w
        trace.append(budgets.copy())
    if return_trace:
        return rejected, trace
    return rejected


def build_3d_hamming_graph(dims, corner, delta: float) -> BudgetGraph:
    """Axis-aligned budget-propagation graph over a threshold grid.

    All initial budget sits at ``corner`` (the most conservative grid index,
    given as a multi-index on the grid boundary); each node's outgoing edges
    point to its axis neighbors one step away from the corner, with the
    budget split equally among the forward neighbors that exist.
    """
    dims = tuple(int(d) for d in dims)
    corner = tuple(int(c) for c in corner)
    if len(corner) != len(dims):
        raise ValueError("corner must have one index per dimension")
    directions = []
    for c, d in zip(corner, dims):
        if c == 0:
            directions.append(1)
        elif c == d - 1:
            directions.append(-1)
        else:
            raise ValueError("corner must sit on the grid boundary in every dimension")
    shape = dims
    n = int(np.prod(shape))
    budgets = [0.0] * n
    budgets[int(np.ravel_multi_index(corner, shape))] = delta
    weights: dict[int, tuple[tuple[int, float], ...]] = {}
    for node in range(n):
        multi = np.array(np.unravel_index(node, shape))
        targets = []
        for axis, step in enumerate(directions):
            nxt = multi.copy()
            nxt[axis] += step
            if 0 <= nxt[axis] < shape[axis]:
                targets.append(int(np.ravel_multi_index(tuple(nxt), shape)))
        if targets:
            w = 1.0 / len(targets)
            weights[node] = tuple((t, w) for t in targets)
    return BudgetGraph(n, tuple(budgets), weights)


def sgt_3d(
    table: LossTable,
    spec: CalibrationSpec,
    split_seed: int = 0,
    corner: tuple[int, ...] | None = None,
) -> TestOutcome:
    """Graphical testing over the full calibration set on a threshold grid."""
    if table.grid is None:
        raise ValueError("sgt_3d needs a grid-backed loss table")
    m = table.example_count
    risks = empirical_risks(table, spec.objectives)
    all_cols = np.arange(table.config_count)
    p_cal = combined_pvalues(
        _controlled_matrix(risks, spec, all_cols),
        [o.alpha for o in spec.controlled],
        m,
        spec.pvalue_kind,
    )
    if corner is None:
        corner = (0,) * table.grid.ndim
    graph = build_3d_hamming_graph(table.grid.shape, corner, spec.delta)
    rejected = sgt(graph, p_cal)
    free = (
        _free_matrix(risks, spec, np.array(rejected, dtype=int))
        if rejected
        else np.zeros((0, spec.k))
    )
    selected = _select_from_rejected(rejected, free, spec.k)
    ordered_candidates = tuple(
        (g, float(p_cal[g]), tuple(_free_matrix(risks, spec, np.array([g]))[0]))
        for g in rejected
    )
    return TestOutcome(
        ordered_candidates=ordered_candidates,
        rejected=tuple(rejected),
        selected=selected,
        stop_index=len(rejected),
        testing_pvalues={int(g): float(p_cal[g]) for g in rejected},
        diagnostics={
            "method": "sgt_3d",
            "corner": list(corner),
            "free_testing": {
                int(g): _free_matrix(risks, spec, np.array([g]))[0].tolist()
                for g in rejected
            },
        },
    )


# ---------------------------------------------------------------------------
# Split-FST baseline


def split_fst_baseline(
    table: LossTable,
    spec: CalibrationSpec,
    split_seed: int,
    beta_step: float = 0.01,
) -> TestOutcome:
    """Order configurations by sweeping a target level over per-risk
    optimization-split p-values, then run FST on the testing split.

    For each swept level the configuration whose p-value vector is closest in
    infinity norm is picked (lowest grid index on ties); duplicates keep their
    first occurrence.
    """
    sr = _compute_split(table, spec, split_seed)
    all_cols = np.arange(table.config_count)
    pfun = pvalue_fn(spec.pvalue_kind)
    p_opt_vec = np.column_stack(
        [
            pfun(sr.risks_opt[o.id][all_cols], o.alpha, sr.m1)
            for o in spec.controlled
        ]
    )
    betas = np.arange(0.0, 1.0 + beta_step / 2, beta_step)
    order: list[int] = []
    seen: set[int] = set()
    for beta in betas:
        dist = np.abs(p_opt_vec - beta).max(axis=1)
        pick = int(np.argmin(dist))
        if pick not in seen:
            seen.add(pick)
            order.append(pick)
    ordered = [
        OrderedCandidate(
            g,
            float(p_opt_vec[g].max()),
            tuple(_free_matrix(sr.risks_opt, spec, np.array([g]))[0]),
        )
        for g in order
    ]
    if not ordered:
        return _abstention("split_fst", sr)
    return _sequential_outcome(ordered, sr, spec, "split_fst")


# ---------------------------------------------------------------------------
# path-based baselines


def _constrained_argmin(
    risks: dict[str, np.ndarray], spec: CalibrationSpec, margins=None
) -> int | None:
    """Grid index minimizing the first free risk subject to controlled risks
    strictly below alpha_i - margin_i; None if infeasible."""
    all_cols = np.arange(next(iter(risks.values())).size)
    controlled = _controlled_matrix(risks, spec, all_cols)
    if margins is None:
        margins = np.zeros(spec.c)
    bounds = np.array([o.alpha for o in spec.controlled]) - np.asarray(margins)
    feasible = np.all(controlled < bounds, axis=1)
    if not feasible.any():
        return None
    free0 = risks[spec.free[0].id]
    masked = np.where(feasible, free0, np.inf)
    return int(np.argmin(masked))


def low_risk_path(
    table: LossTable, spec: CalibrationSpec, split_seed: int
) -> TestOutcome:
    """FST along a low-p-value grid path through the constrained optimum.

    The path starts at the most conservative grid corner, walks one grid step
    at a time (always the axis step with the lowest combined
    optimization-split p-value) to the constrained optimum, then continues to
    the opposite corner. If the constrained problem is infeasible on the
    optimization split the path runs corner to corner and the fallback is
    recorded in the outcome.
    """
    if table.grid is None:
        raise ValueError("low_risk_path needs a grid-backed loss table")
    grid = table.grid
    sr = _compute_split(table, spec, split_seed)
    all_cols = np.arange(table.config_count)
    p_opt = combined_pvalues(
        _controlled_matrix(sr.risks_opt, spec, all_cols),
        [o.alpha for o in spec.controlled],
        sr.m1,
        spec.pvalue_kind,
    )
    opt_cfg = _constrained_argmin(sr.risks_opt, spec)
    fallback = opt_cfg is None
    start = (0,) * grid.ndim
    end = tuple(s - 1 for s in grid.shape)

    def create_path(a, b):
        cur = np.array(a)
        path = [tuple(cur)]
        target = np.array(b)
        while not np.array_equal(cur, target):
            best, best_p = None, np.inf
            for axis in range(grid.ndim):
                if cur[axis] < target[axis]:
                    nxt = cur.copy()
                    nxt[axis] += 1
                    p = p_opt[grid.multi_to_index(tuple(nxt))]
                    if p < best_p:
                        best, best_p = nxt, p
            cur = best
            path.append(tuple(cur))
        return path

    if fallback:
        multis = create_path(start, end)
    else:
        mid = grid.index_to_multi(opt_cfg)
        multis = create_path(start, mid) + create_path(mid, end)[1:]
    order: list[int] = []
    seen: set[int] = set()
    for multi in multis:
        g = grid.multi_to_index(multi)
        if g not in seen:
            seen.add(g)
            order.append(g)
    ordered = [
        OrderedCandidate(
            g,
            float(p_opt[g]),
            tuple(_free_matrix(sr.risks_opt, spec, np.array([g]))[0]),
        )
        for g in order
    ]
    return _sequential_outcome(
        ordered, sr, spec, "low_risk_path", {"fallback_path": fallback}
    )


def constrained_path(
    table: LossTable,
    spec: CalibrationSpec,
    split_seed: int,
    eps_steps: int = 20,
) -> TestOutcome:
    """FST over the solutions of progressively looser constrained problems.

    The slack sweeps from min_i alpha_i down to 0; infeasible slack values are
    skipped and the de-duplicated solution sequence (most conservative first)
    is tested on the testing split.
    """
    if eps_steps < 2:
        raise ValueError("eps_steps must be at least 2")
    sr = _compute_split(table, spec, split_seed)
    min_alpha = min(o.alpha for o in spec.controlled)
    order: list[int] = []
    seen: set[int] = set()
    for eps in np.linspace(min_alpha, 0.0, eps_steps):
        pick = _constrained_argmin(sr.risks_opt, spec, margins=np.full(spec.c, eps))
        if pick is None or pick in seen:
            continue
        seen.add(pick)
        order.append(pick)
    if not order:
        return _abstention("constrained_path", sr)
    all_cols = np.arange(table.config_count)
    p_opt = combined_pvalues(
        _controlled_matrix(sr.risks_opt, spec, all_cols),
        [o.alpha for o in spec.controlled],
        sr.m1,
        spec.pvalue_kind,
    )
    ordered = [
        OrderedCandidate(
            g,
            float(p_opt[g]),
            tuple(_free_matrix(sr.risks_opt, spec, np.array([g]))[0]),
        )
        for g in order
    ]
    return _sequential_outcome(ordered, sr, spec, "constrained_path")


# ---------------------------------------------------------------------------
# naive (non-risk-controlling) selections


def alpha_constrained(table: LossTable, spec: CalibrationSpec) -> int | None:
    """Constrained empirical selection on the full calibration set; no
    statistical testing. Returns None when infeasible."""
    risks = empirical_risks(table, spec.objectives)
    return _constrained_argmin(risks, spec)


def alpha_delta_constrained(table: LossTable, spec: CalibrationSpec) -> int | None:
    """Like :func:`alpha_constrained` but feasibility means the combined
    calibration p-value falls below delta (testing without FWER control)."""
    m = table.example_count
    risks = empirical_risks(table, spec.objectives)
    all_cols = np.arange(table.config_count)
    p_cal = combined_pvalues(
        _controlled_matrix(risks, spec, all_cols),
        [o.alpha for o in spec.controlled],
        m,
        spec.pvalue_kind,
    )
    feasible = p_cal < spec.delta
    if not feasible.any():
        return None
    free0 = risks[spec.free[0].id]
    return int(np.argmin(np.where(feasible, free0, np.inf)))


def _naive_outcome(table, spec, pick, method) -> TestOutcome:
    if pick is None:
        return _abstention(method)
    risks = empirical_risks(table, spec.objectives)
    free = tuple(_free_matrix(risks, spec, np.array([pick]))[0])
    return TestOutcome(
        ordered_candidates=((pick, 1.0, free),),
        rejected=(pick,),
        selected=(pick,),
        stop_index=1,
        testing_pvalues={},
        diagnostics={"method": method, "fwer_controlled": False,
                     "free_testing": {int(pick): list(free)}},
    )


# ---------------------------------------------------------------------------
# time sharing


@dataclass(frozen=True)
class SimplexWeights:
    """A point on the probability simplex over the selected configurations."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if any(x < 0 for x in w):
            raise ValueError("weights must be non-negative")
        if abs(sum(w) - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")


def time_share(
    selected, weights: SimplexWeights, example_count: int, seed: int
) -> np.ndarray:
    """Per-example i.i.d. draw of which selected configuration to use."""
    selected = list(selected)
    if len(selected) != len(weights.weights):
        raise ValueError("one weight per selected configuration required")
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(selected), size=example_count, p=np.array(weights.weights))
    return np.array([selected[i] for i in picks], dtype=int)


# ---------------------------------------------------------------------------
# registry used by the harness and CLI

METHODS = {
    "pareto_testing": pareto_testing,
    "split_fst": split_fst_baseline,
    "sgt_3d": sgt_3d,
    "bonferroni": bonferroni_select,
    "low_risk_path": low_risk_path,
    "constrained_path": constrained_path,
    "alpha_constrained": lambda table, spec, split_seed=0: _naive_outcome(
        table, spec, alpha_constrained(table, spec), "alpha_constrained"
    ),
    "alpha_delta_constrained": lambda table, spec, split_seed=0: _naive_outcome(
        table, spec, alpha_delta_constrained(table, spec), "alpha_delta_constrained"
    ),
}
