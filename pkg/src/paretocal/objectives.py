"""Per-example losses and empirical risks.

The record-level functions mirror the loss definitions used by the adaptive
pruning application (accuracy reduction, abstention, selective variants); the
table-level helpers turn LossTable columns into per-configuration empirical
risks, including the worst-class reduction which collapses the per-class
constraints into a single equivalent objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import LossTable, ObjectiveSpec

__all__ = [
    "ExampleRecord",
    "accuracy_reduction_loss",
    "empirical_risk",
    "worst_class_empirical_risk",
    "abstention_loss",
    "selective_loss",
    "empirical_risk_vector",
    "empirical_risks",
]


@dataclass(frozen=True)
class ExampleRecord:
    """Prediction outcome of one example under one configuration."""

    full_correct: bool
    pruned_correct: bool
    label: int = 0
    confidence: float = 1.0
    cost_ratio: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")
        if not 0.0 <= self.cost_ratio <= 1.0:
            raise ValueError("cost_ratio must lie in [0, 1]")


def accuracy_reduction_loss(rec: ExampleRecord) -> int:
    """Clipped accuracy difference: 1 iff the full model is correct while the
    configured model is not. The rare opposite event is clipped to 0 so the
    loss stays in [0, 1]."""
    return 1 if (rec.full_correct and not rec.pruned_correct) else 0


def empirical_risk(losses) -> float:
    arr = np.asarray(losses, dtype=float)
    if arr.size == 0:
        raise ValueError("empirical_risk of an empty sequence is undefined")
    return float(arr.mean())


def worst_class_empirical_risk(recs, alpha: float, class_count: int) -> float:
    """Worst per-class risk, in unconditional form.

    For each class y the contribution of an example is its clipped accuracy
    loss if labeled y, and alpha otherwise; classes absent from the sample
    therefore score exactly alpha, keeping the maximum well-defined without
    dividing by class frequencies.
    """
    recs = list(recs)
    if class_count < 1:
        raise ValueError("class_count must be at least 1")
    labels = np.array([r.label for r in recs], dtype=int)
    if labels.size and (labels.min() < 0 or labels.max() >= class_count):
        raise ValueError("label out of range")
    d = np.array([accuracy_reduction_loss(r) for r in recs], dtype=float)
    worst = 0.0
    for y in range(class_count):
        mask = labels == y
        per_class = np.where(mask, d, alpha)
        worst = max(worst, float(per_class.mean()))
    return worst


def abstention_loss(rec: ExampleRecord, lam: float) -> int:
    """1 iff the model abstains (confidence strictly below the threshold)."""
    return 1 if rec.confidence < lam else 0


def selective_loss(rec: ExampleRecord, lam: float, alpha: float, base: str) -> float:
    """Selective variant of a base loss: abstained examples contribute alpha."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if rec.confidence < lam:
        return alpha
    if base == "cost":
        return rec.cost_ratio
    if base == "accuracy":
        return float(accuracy_reduction_loss(rec))
    raise ValueError(f"unknown base loss {base!r}")


def _worst_class_vector(
    mat: np.ndarray, labels: np.ndarray, alpha: float, class_count: int
) -> np.ndarray:
    """Worst per-class risk for every configuration column of ``mat``."""
    n = mat.shape[0]
    worst = np.zeros(mat.shape[1])
    # a class absent from the sample contributes alpha for every example, so
    # the loop itself yields exactly alpha for it
    for y in range(class_count):
        mask = labels == y
        n_y = int(mask.sum())
        class_sum = mat[mask].sum(axis=0)
        risk_y = (class_sum + alpha * (n - n_y)) / n
        worst = np.maximum(worst, risk_y)
    return worst


def empirical_risk_vector(
    table: LossTable, objective: ObjectiveSpec, example_idx: np.ndarray | None = None
) -> np.ndarray:
    """Empirical risk of one objective for every configuration.

    ``example_idx`` restricts the computation to a data split; ``None`` uses
    the full table.
    """
    mat = table.matrix(objective.id)
    if example_idx is not None:
        mat = mat[example_idx]
    if mat.shape[0] == 0:
        raise ValueError("empty example split")
    if objective.aggregation == "mean":
        return mat.mean(axis=0)
    if table.labels is None or table.class_count is None:
        raise ValueError("worst_class aggregation needs a labeled LossTable")
    labels = table.labels if example_idx is None else table.labels[example_idx]
    return _worst_class_vector(mat, labels, objective.alpha, table.class_count)


def empirical_risks(
    table: LossTable, objectives, example_idx: np.ndarray | None = None
) -> dict[str, np.ndarray]:
    """Per-objective empirical risk vectors over a data split."""
    return {
        o.id: empirical_risk_vector(table, o, example_idx) for o in objectives
    }
