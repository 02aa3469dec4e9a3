import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paretocal import (
    ExampleRecord,
    LossTable,
    ObjectiveSpec,
    abstention_loss,
    accuracy_reduction_loss,
    empirical_risk,
    empirical_risk_vector,
    empirical_risks,
    selective_loss,
    worst_class_empirical_risk,
)


def _rec(full=True, pruned=True, label=0, conf=1.0, cost=1.0):
    return ExampleRecord(full, pruned, label, conf, cost)


class TestAccuracyReduction:
    def test_truth_table(self):
        assert accuracy_reduction_loss(_rec(True, False)) == 1
        assert accuracy_reduction_loss(_rec(True, True)) == 0
        assert accuracy_reduction_loss(_rec(False, False)) == 0
        # an incorrect full model made correct is clipped to 0, not -1
        assert accuracy_reduction_loss(_rec(False, True)) == 0


class TestEmpiricalRisk:
    def test_mean(self):
        assert empirical_risk([0, 1, 1, 0]) == 0.5

    def test_empty_errors(self):
        with pytest.raises(ValueError):
            empirical_risk([])


class TestWorstClass:
    def test_absent_class_scores_alpha(self):
        # class 1 has no examples, so its unconditional risk is exactly alpha
        recs = [_rec(True, True, label=0), _rec(True, True, label=0)]
        assert worst_class_empirical_risk(recs, alpha=0.15, class_count=2) == pytest.approx(0.15)
        # a populated class with losses dominates the absent-class baseline
        recs = [_rec(True, False, label=0), _rec(True, True, label=0)]
        assert worst_class_empirical_risk(recs, alpha=0.15, class_count=2) == pytest.approx(0.5)

    def test_hand_example(self):
        recs = [
            _rec(True, False, label=0),
            _rec(True, True, label=0),
            _rec(True, False, label=1),
            _rec(True, False, label=1),
        ]
        alpha = 0.2
        # class 0: (1 + 0 + 0.2 + 0.2)/4; class 1: (0.2 + 0.2 + 1 + 1)/4
        assert worst_class_empirical_risk(recs, alpha, 2) == pytest.approx(2.4 / 4)

    def test_label_range_checked(self):
        with pytest.raises(ValueError):
            worst_class_empirical_risk([_rec(label=3)], 0.1, class_count=2)


class TestAbstentionAndSelective:
    def test_abstention_strict(self):
        assert abstention_loss(_rec(conf=0.3), lam=0.5) == 1
        assert abstention_loss(_rec(conf=0.5), lam=0.5) == 0

    def test_selective_substitutes_alpha(self):
        r = _rec(True, False, conf=0.2, cost=0.7)
        assert selective_loss(r, lam=0.5, alpha=0.1, base="cost") == 0.1
        assert selective_loss(r, lam=0.1, alpha=0.1, base="cost") == 0.7
        assert selective_loss(r, lam=0.1, alpha=0.1, base="accuracy") == 1.0

    def test_selective_validation(self):
        with pytest.raises(ValueError):
            selective_loss(_rec(), 0.5, 0.0, "cost")
        with pytest.raises(ValueError):
            selective_loss(_rec(), 0.5, 0.1, "entropy")


class TestTableRisks:
    def _table(self):
        mat = np.array(
            [[0.0, 1.0], [1.0, 1.0], [0.0, 0.0], [0.0, 1.0]]
        )
        return LossTable({"acc": mat}, labels=np.array([0, 0, 1, 1]))

    def test_mean_aggregation(self):
        o = ObjectiveSpec("acc", "controlled", 0.5)
        risks = empirical_risk_vector(self._table(), o)
        assert np.allclose(risks, [0.25, 0.75])

    def test_mean_with_split(self):
        o = ObjectiveSpec("acc", "controlled", 0.5)
        risks = empirical_risk_vector(self._table(), o, np.array([0, 1]))
        assert np.allclose(risks, [0.5, 1.0])
        with pytest.raises(ValueError):
            empirical_risk_vector(self._table(), o, np.array([], dtype=int))

    def test_worst_class_matches_record_path(self):
        o = ObjectiveSpec("acc", "controlled", 0.2, aggregation="worst_class")
        table = self._table()
        risks = empirical_risk_vector(table, o)
        for j in range(table.config_count):
            recs = [
                _rec(True, table.matrix("acc")[i, j] == 0.0, label=int(table.labels[i]))
                for i in range(table.example_count)
            ]
            assert risks[j] == pytest.approx(
                worst_class_empirical_risk(recs, 0.2, 2)
            )

    def test_worst_class_needs_labels(self):
        o = ObjectiveSpec("acc", "controlled", 0.2, aggregation="worst_class")
        table = LossTable({"acc": np.zeros((3, 2))})
        with pytest.raises(ValueError):
            empirical_risk_vector(table, o)

    def test_empirical_risks_dict(self):
        objs = (
            ObjectiveSpec("acc", "controlled", 0.5),
            ObjectiveSpec("cost", "free"),
        )
        table = LossTable(
            {"acc": np.zeros((2, 2)), "cost": np.full((2, 2), 0.5)}
        )
        risks = empirical_risks(table, objs)
        assert set(risks) == {"acc", "cost"}
        assert np.allclose(risks["cost"], 0.5)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=50))
    def test_worst_class_bounded(self, losses):
        mat = np.array(losses, dtype=float).reshape(-1, 1)
        labels = np.zeros(len(losses), dtype=int)
        table = LossTable({"acc": mat}, labels=labels, class_count=3)
        o = ObjectiveSpec("acc", "controlled", 0.3, aggregation="worst_class")
        risk = empirical_risk_vector(table, o)[0]
        assert risk <= 1.0
        # absent classes contribute exactly alpha, so the max is at least alpha
        assert risk >= 0.3
        # and at least the plain mean of the single populated class
        assert risk >= mat.mean() - 1e-12
