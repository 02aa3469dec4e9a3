import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from paretocal import (
    CalibrationSpec,
    LossTable,
    ObjectiveSpec,
    RiskControlCalibrator,
    available_methods,
    pareto_testing,
)


def _spec():
    return CalibrationSpec(
        objectives=(
            ObjectiveSpec("acc", "controlled", 0.3),
            ObjectiveSpec("cost", "free"),
        ),
        delta=0.1,
    )


def _table():
    rng = np.random.default_rng(0)
    base = rng.random(12)
    acc = (rng.random((300, 12)) < base * 0.4).astype(float)
    cost = np.clip(1.0 - base[None, :] + rng.normal(0, 0.05, (300, 12)), 0, 1)
    return LossTable({"acc": acc, "cost": cost})


class TestRiskControlCalibrator:
    def test_fit_matches_functional_api(self):
        cal = RiskControlCalibrator(spec=_spec(), split_seed=4).fit(_table())
        direct = pareto_testing(_table(), _spec(), split_seed=4)
        assert cal.outcome_ == direct
        assert cal.selected_ == direct.selected
        assert cal.rejected_ == direct.rejected
        assert not cal.abstained_
        assert np.array_equal(cal.predict(), np.array(direct.selected))

    def test_get_set_params_and_clone(self):
        cal = RiskControlCalibrator(spec=_spec(), method="bonferroni", split_seed=2)
        params = cal.get_params()
        assert params["method"] == "bonferroni"
        cloned = clone(cal)
        assert cloned.get_params()["split_seed"] == 2
        cal.set_params(method="pareto_testing")
        assert cal.method == "pareto_testing"

    def test_unfitted_raises(self):
        cal = RiskControlCalibrator(spec=_spec())
        with pytest.raises(NotFittedError):
            cal.predict()

    def test_validation(self):
        with pytest.raises(ValueError):
            RiskControlCalibrator().fit(_table())
        with pytest.raises(ValueError):
            RiskControlCalibrator(spec=_spec(), method="nope").fit(_table())
        with pytest.raises(TypeError):
            RiskControlCalibrator(spec=_spec()).fit(np.zeros((3, 3)))

    def test_every_registered_method_fits(self):
        # grid-free table, so skip the procedures that need one
        table = _table()
        for method in available_methods():
            if method in ("sgt_3d", "low_risk_path"):
                continue
            cal = RiskControlCalibrator(spec=_spec(), method=method).fit(table)
            assert hasattr(cal, "outcome_")
