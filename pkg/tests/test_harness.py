import numpy as np
import pytest

from paretocal import (
    CalibrationSpec,
    ConfigGrid,
    LossTable,
    ObjectiveSpec,
    SimModel,
    SimModelSpec,
    SimulatorSource,
    TableSource,
    clopper_pearson,
    efficiency_summary,
    run_trials,
    summarize,
    violation_rate,
)
from paretocal.harness import violation_flag
from paretocal.types import TestOutcome


def _spec(alpha=0.1):
    return CalibrationSpec(
        objectives=(
            ObjectiveSpec("accuracy", "controlled", alpha),
            ObjectiveSpec("cost", "free"),
        ),
        delta=0.1,
    )


class TestClopperPearson:
    def test_zero_violations_anchor(self):
        _, upper = clopper_pearson(0, 500)
        assert upper == pytest.approx(1.0 - 0.05 ** (1 / 500), abs=1e-12)
        assert clopper_pearson(0, 500)[0] == 0.0

    def test_all_violations(self):
        lower, upper = clopper_pearson(500, 500)
        assert upper == 1.0
        assert lower == pytest.approx(0.05 ** (1 / 500), abs=1e-12)

    def test_bracket_contains_rate(self):
        lower, upper = clopper_pearson(50, 500)
        assert lower < 0.1 < upper

    def test_validation(self):
        with pytest.raises(ValueError):
            clopper_pearson(3, 2)


class TestViolationFlag:
    def _outcome(self, rejected):
        cands = tuple((g, 0.01, (0.5,)) for g in rejected)
        return TestOutcome(cands, tuple(rejected), tuple(rejected[:1]), len(rejected))

    def test_any_rejected_above_alpha_violates(self):
        truth = {"accuracy": np.array([0.05, 0.2])}
        spec = _spec(alpha=0.1)
        assert violation_flag(self._outcome([0, 1]), truth, spec)
        assert not violation_flag(self._outcome([0]), truth, spec)

    def test_abstention_is_vacuously_valid(self):
        truth = {"accuracy": np.array([0.9])}
        assert not violation_flag(self._outcome([]), truth, _spec())


class TestRunTrials:
    def _source(self):
        model = SimModel(SimModelSpec(layers=4, heads=4))
        grid = ConfigGrid(((0.0, 0.05), (0.0, 0.05), (0.0, 0.05)))
        return SimulatorSource(model, grid, m=80, n_oracle=5_000)

    def test_cardinality_and_determinism(self):
        spec = _spec()
        src = self._source()
        recs = run_trials(src, spec, ["pareto_testing", "bonferroni"], 5, seed=1)
        assert len(recs) == 10
        again = run_trials(src, spec, ["pareto_testing", "bonferroni"], 5, seed=1)
        assert [(r.method, r.trial, r.selected, r.violated) for r in recs] == [
            (r.method, r.trial, r.selected, r.violated) for r in again
        ]

    def test_unknown_method(self):
        with pytest.raises(KeyError):
            run_trials(self._source(), _spec(), ["magic"], 2)

    def test_all_ones_table_abstains_without_violations(self):
        table = LossTable(
            {"accuracy": np.ones((60, 4)), "cost": np.ones((60, 4))}
        )
        src = TableSource(table, m=30)
        recs = run_trials(src, _spec(alpha=0.05), ["pareto_testing"], 10, seed=0)
        assert all(r.abstained for r in recs)
        assert not any(r.violated for r in recs)
        rates = violation_rate(recs)
        assert rates["pareto_testing"]["rate"] == 0.0
        assert rates["pareto_testing"]["no_selections"]

    def test_table_source_bounds(self):
        table = LossTable({"accuracy": np.zeros((10, 2)), "cost": np.zeros((10, 2))})
        with pytest.raises(ValueError):
            TableSource(table, m=10)


class TestSummaries:
    def _records(self):
        src = SimModel(SimModelSpec(layers=3, heads=3))
        grid = ConfigGrid(((0.0, 0.03), (0.0, 0.03), (0.0, 0.03)))
        source = SimulatorSource(src, grid, m=80, n_oracle=4_000)
        return run_trials(source, _spec(), ["pareto_testing"], 6, seed=2)

    def test_summarize_consistency(self):
        recs = self._records()
        s = summarize(recs)["pareto_testing"]
        assert s.trials == 6
        assert s.violation_rate == s.violations / 6
        assert 0.0 <= s.violation_lower <= s.violation_rate <= s.violation_upper <= 1.0

    def test_efficiency_summary_shapes(self):
        recs = self._records()
        eff = efficiency_summary(recs)["pareto_testing"]
        assert 0.0 <= eff["abstention_rate"] <= 1.0
        if eff["free"]:
            stats = eff["free"]["cost"]
            assert 0.0 <= stats["mean"] <= 1.0

    def test_single_trial_se_absent(self):
        src = SimModel(SimModelSpec(layers=3, heads=3))
        grid = ConfigGrid(((0.0,), (0.0,), (0.0,)))
        source = SimulatorSource(src, grid, m=40, n_oracle=2_000)
        recs = run_trials(source, _spec(), ["pareto_testing"], 1, seed=0)
        eff = efficiency_summary(recs)["pareto_testing"]
        if eff["free"]:
            assert eff["free"]["cost"]["se"] is None
