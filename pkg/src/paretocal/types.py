"""Shared domain types for the calibration toolkit.

All types are immutable after construction and can be shared freely across
parallel workers. Each type serializes to a plain-JSON dict via ``to_dict`` /
``from_dict`` and the round trip is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "ConfigPoint",
    "ConfigGrid",
    "ObjectiveSpec",
    "CalibrationSpec",
    "LossTable",
    "TestOutcome",
]


@dataclass(frozen=True)
class ConfigPoint:
    """A single n-dimensional threshold tuple, optionally tied to a grid slot."""

    thresholds: tuple[float, ...]
    grid_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        if len(self.thresholds) < 1:
            raise ValueError("ConfigPoint needs at least one threshold")
        if self.grid_index is not None and self.grid_index < 0:
            raise ValueError("grid_index must be non-negative")

    def to_dict(self) -> dict:
        return {"thresholds": list(self.thresholds), "grid_index": self.grid_index}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ConfigPoint":
        return cls(tuple(d["thresholds"]), d.get("grid_index"))


@dataclass(frozen=True)
class ConfigGrid:
    """A finite Cartesian grid of threshold tuples.

    Point enumeration is deterministic: ``grid_index`` encodes row-major order
    over ``dims`` (the last dimension varies fastest).
    """

    dims: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        dims = tuple(tuple(float(v) for v in axis) for axis in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("ConfigGrid needs at least one dimension")
        for axis in dims:
            if len(axis) < 1:
                raise ValueError("each grid dimension needs at least one value")
            if any(b <= a for a, b in zip(axis, axis[1:])):
                raise ValueError("grid dimension values must be strictly increasing")

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(axis) for axis in self.dims)

    def __len__(self) -> int:
        return int(np.prod(self.shape))

    def index_to_multi(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < len(self):
            raise IndexError(f"grid index {index} out of range")
        return tuple(int(i) for i in np.unravel_index(index, self.shape))

    def multi_to_index(self, multi: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(multi), self.shape))

    def point(self, index: int) -> ConfigPoint:
        multi = self.index_to_multi(index)
        return ConfigPoint(
            tuple(axis[i] for axis, i in zip(self.dims, multi)), grid_index=index
        )

    def points(self) -> list[ConfigPoint]:
        out = []
        for index, combo in enumerate(itertools.product(*self.dims)):
            out.append(ConfigPoint(combo, grid_index=index))
        return out

    def to_dict(self) -> dict:
        return {"dims": [list(axis) for axis in self.dims]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ConfigGrid":
        return cls(tuple(tuple(axis) for axis in d["dims"]))


_OBJECTIVE_KINDS = ("controlled", "free")
_AGGREGATIONS = ("mean", "worst_class")


@dataclass(frozen=True)
class ObjectiveSpec:
    """One objective: either risk-controlled at level ``alpha`` or free.

    ``aggregation`` selects how per-example losses collapse to an empirical
    risk: a plain mean, or the worst per-class mean (which folds the bound
    ``alpha`` into the off-class terms so the result stays in [0, 1]).
    """

    id: str
    kind: str
    alpha: float | None = None
    direction: str = "minimize"
    aggregation: str = "mean"

    def __post_init__(self):
        if self.kind not in _OBJECTIVE_KINDS:
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.direction != "minimize":
            raise ValueError("all objectives are losses to minimize")
        if self.aggregation not in _AGGREGATIONS:
            raise ValueError(f"unknown aggregation {self.aggregation!r}")
        if self.kind == "controlled":
            if self.alpha is None or not (0.0 < self.alpha <= 1.0):
                raise ValueError("controlled objectives need alpha in (0, 1]")
        elif self.alpha is not None:
            raise ValueError("free objectives must not carry an alpha")
        if self.aggregation == "worst_class" and self.kind != "controlled":
            raise ValueError("worst_class aggregation requires a controlled objective")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "alpha": self.alpha,
            "direction": self.direction,
            "aggregation": self.aggregation,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ObjectiveSpec":
        return cls(
            id=d["id"],
            kind=d["kind"],
            alpha=d.get("alpha"),
            direction=d.get("direction", "minimize"),
            aggregation=d.get("aggregation", "mean"),
        )


_PVALUE_KINDS = ("hoeffding", "hoeffding_bentkus")


@dataclass(frozen=True)
class CalibrationSpec:
    """Full description of one calibration problem.

    Controlled objectives must precede free objectives; downstream reports
    always reference objectives by id, never by position.
    """

    objectives: tuple[ObjectiveSpec, ...]
    delta: float
    split_fraction: float = 0.5
    front_budget: int = 1000
    pvalue_kind: str = "hoeffding_bentkus"

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(self.objectives))
        if not (0.0 < self.delta < 1.0):
            raise ValueError("delta must lie in (0, 1)")
        if not (0.0 < self.split_fraction < 1.0):
            raise ValueError("split_fraction must lie in (0, 1)")
        if self.front_budget < 1:
            raise ValueError("front_budget must be positive")
        if self.pvalue_kind not in _PVALUE_KINDS:
            raise ValueError(f"unknown pvalue_kind {self.pvalue_kind!r}")
        kinds = [o.kind for o in self.objectives]
        c = kinds.count("controlled")
        if c < 1 or len(kinds) - c < 1:
            raise ValueError("need at least one controlled and one free objective")
        if kinds != ["controlled"] * c + ["free"] * (len(kinds) - c):
            raise ValueError("controlled objectives must precede free objectives")
        ids = [o.id for o in self.objectives]
        if len(set(ids)) != len(ids):
            raise ValueError("objective ids must be unique")

    @property
    def controlled(self) -> tuple[ObjectiveSpec, ...]:
        return tuple(o for o in self.objectives if o.kind == "controlled")

    @property
    def free(self) -> tuple[ObjectiveSpec, ...]:
        return tuple(o for o in self.objectives if o.kind == "free")

    @property
    def c(self) -> int:
        return len(self.controlled)

    @property
    def k(self) -> int:
        return len(self.free)

    def objective(self, obj_id: str) -> ObjectiveSpec:
        for o in self.objectives:
            if o.id == obj_id:
                return o
        raise KeyError(obj_id)

    def to_dict(self) -> dict:
        return {
            "objectives": [o.to_dict() for o in self.objectives],
            "delta": self.delta,
            "split_fraction": self.split_fraction,
            "front_budget": self.front_budget,
            "pvalue_kind": self.pvalue_kind,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CalibrationSpec":
        return cls(
            objectives=tuple(ObjectiveSpec.from_dict(o) for o in d["objectives"]),
            delta=d["delta"],
            split_fraction=d.get("split_fraction", 0.5),
            front_budget=d.get("front_budget", 1000),
            pvalue_kind=d.get("pvalue_kind", "hoeffding_bentkus"),
        )


class LossTable:
    """Per-example, per-configuration loss values in [0, 1], one matrix per
    objective.

    Values outside [0, 1] are rejected at construction (never clipped): the
    concentration-bound p-values downstream are only valid for bounded losses.
    ``labels`` (class index per example) is required whenever some objective
    uses worst-class aggregation. ``grid`` ties configuration columns to a
    ConfigGrid, enabling grid-structured procedures.
    """

    def __init__(
        self,
        matrices: Mapping[str, np.ndarray],
        labels: np.ndarray | None = None,
        class_count: int | None = None,
        grid: ConfigGrid | None = None,
    ):
        if not matrices:
            raise ValueError("LossTable needs at least one objective matrix")
        mats: dict[str, np.ndarray] = {}
        shape = None
        for obj_id, mat in matrices.items():
            arr = np.asarray(mat, dtype=float)
            if arr.ndim != 2:
                raise ValueError(f"objective {obj_id!r}: matrix must be 2-D")
            if shape is None:
                shape = arr.shape
            elif arr.shape != shape:
                raise ValueError("all objective matrices must share one shape")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"objective {obj_id!r}: non-finite loss values")
            if arr.min() < 0.0 or arr.max() > 1.0:
                raise ValueError(f"objective {obj_id!r}: loss values outside [0, 1]")
            arr = arr.copy()
            arr.flags.writeable = False
            mats[obj_id] = arr
        self._matrices = mats
        self._shape = shape
        if labels is not None:
            labels = np.asarray(labels, dtype=int).copy()
            if labels.shape != (shape[0],):
                raise ValueError("labels must have one entry per example")
            if labels.min() < 0:
                raise ValueError("labels must be non-negative class indices")
            if class_count is None:
                class_count = int(labels.max()) + 1
            elif labels.max() >= class_count:
                raise ValueError("label out of range for class_count")
            labels.flags.writeable = False
        self.labels = labels
        self.class_count = class_count
        if grid is not None and len(grid) != shape[1]:
            raise ValueError("grid size must match configuration count")
        self.grid = grid

    @property
    def example_count(self) -> int:
        return self._shape[0]

    @property
    def config_count(self) -> int:
        return self._shape[1]

    @property
    def objective_ids(self) -> tuple[str, ...]:
        return tuple(self._matrices)

    def matrix(self, obj_id: str) -> np.ndarray:
        return self._matrices[obj_id]

    def subset(self, example_idx: np.ndarray) -> "LossTable":
        """A new table restricted to the given example rows."""
        return LossTable(
            {k: v[example_idx] for k, v in self._matrices.items()},
            labels=None if self.labels is None else self.labels[example_idx],
            class_count=self.class_count,
            grid=self.grid,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, LossTable):
            return NotImplemented
        if self.objective_ids != other.objective_ids:
            return False
        if any(
            not np.array_equal(self.matrix(k), other.matrix(k))
            for k in self.objective_ids
        ):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        if self.labels is not None and not np.array_equal(self.labels, other.labels):
            return False
        return self.class_count == other.class_count and self.grid == other.grid

    def to_dict(self) -> dict:
        return {
            "matrices": {k: v.tolist() for k, v in self._matrices.items()},
            "labels": None if self.labels is None else self.labels.tolist(),
            "class_count": self.class_count,
            "grid": None if self.grid is None else self.grid.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "LossTable":
        return cls(
            {k: np.asarray(v, dtype=float) for k, v in d["matrices"].items()},
            labels=None if d.get("labels") is None else np.asarray(d["labels"]),
            class_count=d.get("class_count"),
            grid=None if d.get("grid") is None else ConfigGrid.from_dict(d["grid"]),
        )


@dataclass(frozen=True)
class TestOutcome:
    """Result of one configuration-selection procedure.

    ``ordered_candidates`` lists (grid_index, p_opt, free-objective estimates)
    in the tested order; ``rejected`` is exactly the prefix strictly before
    ``stop_index``; ``selected`` is the non-dominated subset of the rejected
    set under testing-split free-objective estimates. An empty ``rejected``
    set is an abstention.
    """

    # not a test case, despite the class name pytest would otherwise collect
    __test__ = False

    ordered_candidates: tuple[tuple[int, float, tuple[float, ...]], ...]
    rejected: tuple[int, ...]
    selected: tuple[int, ...]
    stop_index: int
    testing_pvalues: dict[int, float] = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        cands = tuple(
            (int(g), float(p), tuple(float(v) for v in free))
            for g, p, free in self.ordered_candidates
        )
        object.__setattr__(self, "ordered_candidates", cands)
        object.__setattr__(self, "rejected", tuple(int(g) for g in self.rejected))
        object.__setattr__(self, "selected", tuple(int(g) for g in self.selected))
        prefix = tuple(g for g, _, _ in cands[: self.stop_index])
        if self.rejected != prefix:
            raise ValueError("rejected set must be the candidate prefix before stop_index")
        if not set(self.selected) <= set(self.rejected):
            raise ValueError("selected must be a subset of rejected")

    @property
    def abstained(self) -> bool:
        return len(self.rejected) == 0

    def to_dict(self) -> dict:
        return {
            "ordered_candidates": [
                [g, p, list(free)] for g, p, free in self.ordered_candidates
            ],
            "rejected": list(self.rejected),
            "selected": list(self.selected),
            "stop_index": self.stop_index,
            "testing_pvalues": {str(k): v for k, v in self.testing_pvalues.items()},
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "TestOutcome":
        return cls(
            ordered_candidates=tuple(
                (g, p, tuple(free)) for g, p, free in d["ordered_candidates"]
            ),
            rejected=tuple(d["rejected"]),
            selected=tuple(d["selected"]),
            stop_index=d["stop_index"],
            testing_pvalues={int(k): v for k, v in d["testing_pvalues"].items()},
            diagnostics=dict(d.get("diagnostics", {})),
        )
