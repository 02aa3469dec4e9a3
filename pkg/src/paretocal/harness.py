"""Monte Carlo evaluation harness.

Runs calibration procedures over repeated trials drawn from a data source,
flags family-wise violations against ground-truth risks, and aggregates
violation rates (with one-sided Clopper-Pearson bounds) and efficiency
statistics. Two sources are provided: a synthetic-model source whose truth is
a high-precision oracle estimate, and a loss-table source whose truth per
trial is the held-out remainder of the table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .objectives import empirical_risks
from .simulator import SimModel, build_loss_table, oracle_risk_grid
from .testing import METHODS
from .types import CalibrationSpec, ConfigGrid, LossTable, TestOutcome

__all__ = [
    "SimulatorSource",
    "TableSource",
    "TrialRecord",
    "MethodSummary",
    "clopper_pearson",
    "violation_flag",
    "run_trials",
    "summarize",
    "violation_rate",
    "efficiency_summary",
]


def clopper_pearson(k: int, n: int, level: float = 0.05) -> tuple[float, float]:
    """One-sided exact binomial bounds at the given tail level each.

    Returns (lower, upper) such that P(rate < lower) and P(rate > upper) are
    each at most ``level`` under the binomial model.
    """
    if not 0 <= k <= n or n < 1:
        raise ValueError("need 0 <= k <= n with n >= 1")
    lower = 0.0 if k == 0 else float(stats.beta.ppf(level, k, n - k + 1))
    upper = 1.0 if k == n else float(stats.beta.ppf(1.0 - level, k + 1, n - k))
    return lower, upper


def violation_flag(
    outcome: TestOutcome, truth: dict[str, np.ndarray], spec: CalibrationSpec
) -> bool:
    """True iff any rejected configuration's true risk exceeds its bound.

    An abstaining outcome is vacuously valid.
    """
    for g in outcome.rejected:
        for o in spec.controlled:
            if truth[o.id][g] > o.alpha:
                return True
    return False


@dataclass
class TrialRecord:
    """One (method, trial) outcome against ground truth."""

    method: str
    trial: int
    abstained: bool
    violated: bool
    rejected_count: int
    selected: tuple[int, ...]
    selected_free: dict[str, float]  # true free risks, averaged over selection


@dataclass
class MethodSummary:
    """Aggregate of a method's trial records."""

    method: str
    trials: int
    violations: int
    abstentions: int
    violation_rate: float
    violation_lower: float
    violation_upper: float
    abstention_rate: float
    mean_selected_free: dict[str, float]
    mean_rejected: float

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "trials": self.trials,
            "violations": self.violations,
            "abstentions": self.abstentions,
            "violation_rate": self.violation_rate,
            "violation_lower": self.violation_lower,
            "violation_upper": self.violation_upper,
            "abstention_rate": self.abstention_rate,
            "mean_selected_free": dict(self.mean_selected_free),
            "mean_rejected": self.mean_rejected,
        }


class SimulatorSource:
    """Trials sampled fresh from a synthetic model; truth from a large,
    disjoint oracle sample evaluated once per (model, grid, spec)."""

    def __init__(
        self,
        model: SimModel,
        grid: ConfigGrid,
        m: int,
        lam: float | None = None,
        n_oracle: int = 200_000,
        oracle_seed: int = 0,
    ):
        if m < 2:
            raise ValueError("need at least two calibration examples")
        self.model = model
        self.grid = grid
        self.m = m
        self.lam = lam
        self.n_oracle = n_oracle
        self.oracle_seed = oracle_seed
        self._truth_cache: dict[tuple, dict[str, np.ndarray]] = {}

    def _truth(self, spec: CalibrationSpec) -> dict[str, np.ndarray]:
        key = tuple(
            (o.id, o.kind, o.alpha, o.aggregation) for o in spec.objectives
        )
        if key not in self._truth_cache:
            risks = oracle_risk_grid(
                self.model,
                self.grid,
                spec.objectives,
                n_oracle=self.n_oracle,
                seed=self.oracle_seed,
                lam=self.lam,
            )
            self._truth_cache[key] = {oid: mean for oid, (mean, _) in risks.items()}
        return self._truth_cache[key]

    def trial(
        self, spec: CalibrationSpec, data_seed: int
    ) -> tuple[LossTable, dict[str, np.ndarray]]:
        batch = self.model.sample(self.m, seed=data_seed)
        table = build_loss_table(batch, self.grid, spec.objectives, lam=self.lam)
        return table, self._truth(spec)


class TableSource:
    """Trials drawn by subsampling calibration examples from a fixed loss
    table; truth per trial is estimated on the held-out remainder."""

    def __init__(self, table: LossTable, m: int):
        if not 2 <= m < table.example_count:
            raise ValueError("m must leave a non-empty held-out remainder")
        self.table = table
        self.m = m

    def trial(
        self, spec: CalibrationSpec, data_seed: int
    ) -> tuple[LossTable, dict[str, np.ndarray]]:
        rng = np.random.default_rng(data_seed)
        perm = rng.permutation(self.table.example_count)
        calib = self.table.subset(np.sort(perm[: self.m]))
        truth = empirical_risks(
            self.table, spec.objectives, np.sort(perm[self.m :])
        )
        return calib, truth


def run_trials(
    source,
    spec: CalibrationSpec,
    methods,
    n_trials: int,
    seed: int = 0,
) -> list[TrialRecord]:
    """Run each method on every trial and score it against the trial's truth.

    All methods within a trial see the same calibration table and the same
    split seed, so comparisons are paired. Per-trial seeds derive from a
    spawned seed sequence and never collide across trials.
    """
    methods = list(methods)
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise KeyError(f"unknown methods: {unknown}")
    records: list[TrialRecord] = []
    for t, child in enumerate(np.random.SeedSequence(seed).spawn(n_trials)):
        data_seed, split_seed = (int(s) for s in child.generate_state(2))
        table, truth = source.trial(spec, data_seed)
        for name in methods:
            outcome = METHODS[name](table, spec, split_seed)
            records.append(_score(name, t, outcome, truth, spec))
    return records


def _score(
    name: str,
    trial: int,
    outcome: TestOutcome,
    truth: dict[str, np.ndarray],
    spec: CalibrationSpec,
) -> TrialRecord:
    abstained = outcome.abstained
    selected_free: dict[str, float] = {}
    if not abstained:
        sel = np.array(outcome.selected, dtype=int)
        for o in spec.free:
            selected_free[o.id] = float(truth[o.id][sel].mean())
    return TrialRecord(
        method=name,
        trial=trial,
        abstained=abstained,
        violated=violation_flag(outcome, truth, spec),
        rejected_count=len(outcome.rejected),
        selected=outcome.selected,
        selected_free=selected_free,
    )


def violation_rate(records, level: float = 0.05) -> dict[str, dict]:
    """Per-method violation fraction with exact binomial bounds.

    Abstained trials count as non-violations (nothing was selected); when
    every trial abstained the result carries a ``no_selections`` flag.
    """
    out: dict[str, dict] = {}
    for name, s in summarize(records, level).items():
        out[name] = {
            "rate": s.violation_rate,
            "lower": s.violation_lower,
            "upper": s.violation_upper,
            "trials": s.trials,
            "no_selections": s.abstentions == s.trials,
        }
    return out


def efficiency_summary(records) -> dict[str, dict]:
    """Per-method mean and standard error of each free objective over
    non-abstained trials, plus the abstention rate."""
    by_method: dict[str, list[TrialRecord]] = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    out: dict[str, dict] = {}
    for name, recs in by_method.items():
        active = [r for r in recs if not r.abstained]
        free_ids = sorted({oid for r in active for oid in r.selected_free})
        stats_by_obj = {}
        for oid in free_ids:
            vals = np.array([r.selected_free[oid] for r in active])
            se = (
                float(vals.std(ddof=1) / np.sqrt(vals.size))
                if vals.size > 1
                else None
            )
            stats_by_obj[oid] = {"mean": float(vals.mean()), "se": se}
        out[name] = {
            "free": stats_by_obj,
            "abstention_rate": sum(r.abstained for r in recs) / len(recs),
        }
    return out


def summarize(records, level: float = 0.05) -> dict[str, MethodSummary]:
    """Per-method aggregation of trial records."""
    by_method: dict[str, list[TrialRecord]] = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    out: dict[str, MethodSummary] = {}
    for name, recs in by_method.items():
        n = len(recs)
        k = sum(r.violated for r in recs)
        a = sum(r.abstained for r in recs)
        lower, upper = clopper_pearson(k, n, level)
        active = [r for r in recs if not r.abstained]
        free_ids = sorted({oid for r in active for oid in r.selected_free})
        mean_free = {
            oid: float(np.mean([r.selected_free[oid] for r in active]))
            for oid in free_ids
        }
        out[name] = MethodSummary(
            method=name,
            trials=n,
            violations=k,
            abstentions=a,
            violation_rate=k / n,
            violation_lower=lower,
            violation_upper=upper,
            abstention_rate=a / n,
            mean_selected_free=mean_free,
            mean_rejected=float(np.mean([r.rejected_count for r in recs])),
        )
    return out
