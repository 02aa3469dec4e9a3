"""Estimator-style front end over the selection procedures.

A calibrator holds the calibration problem and procedure choice as
constructor parameters (so it composes with standard parameter-search and
cloning utilities) and exposes the selection result as fitted attributes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .testing import METHODS
from .types import CalibrationSpec, LossTable

__all__ = ["RiskControlCalibrator", "available_methods"]


def available_methods() -> list[str]:
    """Identifiers accepted by :class:`RiskControlCalibrator`."""
    return sorted(METHODS)


class RiskControlCalibrator(BaseEstimator):
    """Select risk-controlling configurations from a loss table.

    Parameters
    ----------
    spec : CalibrationSpec
        Objectives, target levels, error budget and split policy.
    method : str, default "pareto_testing"
        One of :func:`available_methods`.
    split_seed : int, default 0
        Seed of the optimization/testing split (ignored by the procedures
        that use the full calibration set).

    Attributes
    ----------
    outcome_ : TestOutcome
        Full procedure output.
    selected_ : tuple of int
        Final configuration choice (grid indices); empty on abstention.
    rejected_ : tuple of int
        All configurations certified at level alpha.
    """

    def __init__(
        self,
        spec: CalibrationSpec = None,
        method: str = "pareto_testing",
        split_seed: int = 0,
    ):
        self.spec = spec
        self.method = method
        self.split_seed = split_seed

    def fit(self, table: LossTable, y=None):
        if self.spec is None:
            raise ValueError("spec must be provided before fitting")
        if not isinstance(self.spec, CalibrationSpec):
            raise TypeError("spec must be a CalibrationSpec")
        if self.method not in METHODS:
            raise ValueError(
                f"unknown method {self.method!r}; "
                f"choose one of {available_methods()}"
            )
        if not isinstance(table, LossTable):
            raise TypeError("fit expects a LossTable")
        self.outcome_ = METHODS[self.method](table, self.spec, self.split_seed)
        self.rejected_ = self.outcome_.rejected
        self.selected_ = self.outcome_.selected
        return self

    def _check_fitted(self):
        if not hasattr(self, "outcome_"):
            raise NotFittedError("call fit before using this calibrator")

    @property
    def abstained_(self) -> bool:
        self._check_fitted()
        return self.outcome_.abstained

    def predict(self, X=None) -> np.ndarray:
        """The selected grid indices as an array (empty on abstention)."""
        self._check_fitted()
        return np.array(self.selected_, dtype=int)
