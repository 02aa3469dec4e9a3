"""Synthetic multi-dimensional adaptive-pruning model.

Emulates a layered predictor with three pruning knobs, each governed by a
threshold on a score: per-token scores (tokens below the threshold are dropped
and stay dropped in deeper layers), per-layer entropy-like scores (the model
exits at the first layer whose score falls below the threshold), and fixed
per-head scores (heads below the threshold are removed for every input). The
relative compute cost of a configured forward pass is the exact ratio of
retained head-times-tokens-squared work to the full model's.

Correctness degradation is a deterministic function of per-example latents:
a correct prediction flips to incorrect iff the example's flip draw falls
below kappa * (1 - cost_ratio) * difficulty, so degradation is monotone in
saved compute and never turns an incorrect prediction correct.

Configurations are threshold triples ordered (token, layer, head).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .objectives import _worst_class_vector
from .types import ConfigGrid, ConfigPoint, LossTable, ObjectiveSpec

__all__ = [
    "SimModelSpec",
    "SimModel",
    "SimExample",
    "ExampleBatch",
    "token_counts",
    "exit_layer",
    "head_counts",
    "cost_ratio",
    "evaluate_config",
    "build_loss_table",
    "build_loss_table_points",
    "evaluate_point_risks",
    "oracle_risk",
    "oracle_risk_grid",
]


@dataclass(frozen=True)
class SimModelSpec:
    """Parameters of the synthetic pruning model."""

    layers: int = 12
    heads: int = 12
    token_len_range: tuple[int, int] = (16, 128)
    base_accuracy: float = 0.85
    kappa: float = 0.3
    class_count: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.layers < 1 or self.heads < 1:
            raise ValueError("need at least one layer and one head")
        lo, hi = self.token_len_range
        if not (1 <= lo <= hi):
            raise ValueError("invalid token length range")
        if not 0.0 < self.base_accuracy < 1.0:
            raise ValueError("base_accuracy must lie in (0, 1)")
        if self.kappa < 0.0:
            raise ValueError("kappa must be non-negative")
        if self.class_count < 2:
            raise ValueError("need at least two classes")

    def to_dict(self) -> dict:
        return {
            "layers": self.layers,
            "heads": self.heads,
            "token_len_range": list(self.token_len_range),
            "base_accuracy": self.base_accuracy,
            "kappa": self.kappa,
            "class_count": self.class_count,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimModelSpec":
        return cls(
            layers=d.get("layers", 12),
            heads=d.get("heads", 12),
            token_len_range=tuple(d.get("token_len_range", (16, 128))),
            base_accuracy=d.get("base_accuracy", 0.85),
            kappa=d.get("kappa", 0.3),
            class_count=d.get("class_count", 3),
            seed=d.get("seed", 0),
        )


@dataclass(frozen=True)
class SimExample:
    """One example's sampled latents (reference, non-vectorized path)."""

    token_scores: tuple[tuple[float, ...], ...]  # layer x token
    layer_scores: tuple[float, ...]
    full_correct: bool
    label: int
    difficulty: float
    flip_draw: float
    confidence_base: float

    def __post_init__(self):
        if not 0.0 <= self.difficulty <= 1.0:
            raise ValueError("difficulty must lie in [0, 1]")
        if not 0.0 <= self.flip_draw <= 1.0:
            raise ValueError("flip_draw must lie in [0, 1]")


class SimModel:
    """A sampled model instance: fixed head scores plus the generating spec."""

    def __init__(self, spec: SimModelSpec):
        self.spec = spec
        rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 0]))
        # per-layer head scores, normalized to sum to one
        self.head_scores = rng.dirichlet(
            np.ones(spec.heads), size=spec.layers
        )

    def sample(self, n: int, seed: int) -> "ExampleBatch":
        """Sample a batch of examples, deterministic given the seed."""
        spec = self.spec
        rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 1, seed]))
        lo, hi = spec.token_len_range
        lengths = rng.integers(lo, hi + 1, size=n)
        lmax = int(lengths.max())
        token_scores = rng.random((n, spec.layers, lmax))
        runmin = np.minimum.accumulate(token_scores, axis=1)
        pad = np.arange(lmax)[None, :] >= lengths[:, None]
        runmin[np.broadcast_to(pad[:, None, :], runmin.shape)] = -np.inf
        layer_scores = np.column_stack(
            [rng.beta(2.0, 1.0 + j, size=n) for j in range(1, spec.layers + 1)]
        )
        full_correct = rng.random(n) < spec.base_accuracy
        labels = rng.integers(0, spec.class_count, size=n)
        difficulty = rng.random(n)
        flip_draw = rng.random(n)
        confidence_base = rng.random(n)
        return ExampleBatch(
            model=self,
            lengths=lengths,
            runmin=runmin,
            layer_scores=layer_scores,
            full_correct=full_correct,
            labels=labels,
            difficulty=difficulty,
            flip_draw=flip_draw,
            confidence_base=confidence_base,
        )


@dataclass
class ExampleBatch:
    """Vectorized batch of sampled examples.

    ``runmin`` holds the running minimum over layers of the per-token scores,
    padded with -inf beyond each example's length, so retained-token counts
    are plain threshold comparisons.
    """

    model: SimModel
    lengths: np.ndarray
    runmin: np.ndarray  # (n, K, Lmax)
    layer_scores: np.ndarray  # (n, K)
    full_correct: np.ndarray
    labels: np.ndarray
    difficulty: np.ndarray
    flip_draw: np.ndarray
    confidence_base: np.ndarray

    def __len__(self) -> int:
        return self.lengths.size

    def subset(self, example_idx) -> "ExampleBatch":
        """A new batch restricted to the given example rows."""
        idx = np.asarray(example_idx)
        return ExampleBatch(
            model=self.model,
            lengths=self.lengths[idx],
            runmin=self.runmin[idx],
            layer_scores=self.layer_scores[idx],
            full_correct=self.full_correct[idx],
            labels=self.labels[idx],
            difficulty=self.difficulty[idx],
            flip_draw=self.flip_draw[idx],
            confidence_base=self.confidence_base[idx],
        )

    def example(self, i: int) -> SimExample:
        """Materialize one example for the reference functions."""
        k = self.model.spec.layers
        length = int(self.lengths[i])
        # recover raw per-layer scores is not possible from runmin; expose the
        # runmin rows directly, which the reference formulas accept because
        # the survival indicator only depends on the running minimum
        scores = tuple(
            tuple(float(v) for v in self.runmin[i, j, :length]) for j in range(k)
        )
        return SimExample(
            token_scores=scores,
            layer_scores=tuple(float(v) for v in self.layer_scores[i]),
            full_correct=bool(self.full_correct[i]),
            label=int(self.labels[i]),
            difficulty=float(self.difficulty[i]),
            flip_draw=float(self.flip_draw[i]),
            confidence_base=float(self.confidence_base[i]),
        )


# ---------------------------------------------------------------------------
# reference (single-example) pruning mechanics


def token_counts(example: SimExample, tau_tok: float) -> list[int]:
    """Retained tokens per layer: a token survives layer j iff its score
    exceeded the threshold at every layer up to j."""
    k = len(example.token_scores)
    length = len(example.token_scores[0])
    counts = []
    for j in range(k):
        c = 0
        for l in range(length):
            if all(example.token_scores[jj][l] > tau_tok for jj in range(j + 1)):
                c += 1
        counts.append(c)
    return counts


def exit_layer(example: SimExample, tau_layer: float) -> int:
    """First layer (1-based) whose score falls strictly below the threshold;
    the last layer if none does."""
    for j, s in enumerate(example.layer_scores, start=1):
        if s < tau_layer:
            return j
    return len(example.layer_scores)


def head_counts(model: SimModel, tau_head: float) -> list[int]:
    """Retained heads per layer; fixed across inputs."""
    return [int((row > tau_head).sum()) for row in model.head_scores]


def cost_ratio(example: SimExample, model: SimModel, config) -> float:
    """Relative compute cost of the configured model for one example."""
    tau_tok, tau_layer, tau_head = _config_thresholds(config)
    k = model.spec.layers
    w = model.spec.heads
    length = len(example.token_scores[0])
    l_j = token_counts(example, tau_tok)
    w_j = head_counts(model, tau_head)
    k_exit = exit_layer(example, tau_layer)
    numerator = sum(w_j[j] * l_j[j] ** 2 for j in range(k_exit))
    return numerator / (k * w * length**2)


def _config_thresholds(config) -> tuple[float, float, float]:
    thresholds = config.thresholds if isinstance(config, ConfigPoint) else tuple(config)
    if len(thresholds) != 3:
        raise ValueError("config must provide (token, layer, head) thresholds")
    return thresholds


def evaluate_config(example: SimExample, model: SimModel, config):
    """Evaluate one configuration on one example.

    Returns an :class:`~paretocal.objectives.ExampleRecord`. Pure in the
    example's latents: repeated calls agree bit for bit.
    """
    from .objectives import ExampleRecord

    rho = cost_ratio(example, model, config)
    kappa = model.spec.kappa
    flips = example.flip_draw < kappa * (1.0 - rho) * example.difficulty
    pruned_correct = example.full_correct and not flips
    confidence = example.confidence_base * (0.5 + 0.5 * rho)
    return ExampleRecord(
        full_correct=example.full_correct,
        pruned_correct=pruned_correct,
        label=example.label,
        confidence=confidence,
        cost_ratio=rho,
    )


# ---------------------------------------------------------------------------
# vectorized grid evaluation


def _grid_cost_matrix(batch: ExampleBatch, grid: ConfigGrid) -> np.ndarray:
    model = batch.model
    spec = model.spec
    tok_vals, layer_vals, head_vals = grid.dims
    n = len(batch)
    n_t, n_e, n_h = len(tok_vals), len(layer_vals), len(head_vals)
    k = spec.layers

    counts_sq = np.empty((n_t, n, k))
    for ti, tau in enumerate(tok_vals):
        counts = (batch.runmin > tau).sum(axis=2)
        counts_sq[ti] = counts.astype(float) ** 2

    w_counts = np.empty((n_h, k))
    for hi, tau in enumerate(head_vals):
        w_counts[hi] = (model.head_scores > tau).sum(axis=1)

    exit_idx = np.empty((n_e, n), dtype=int)
    for ei, tau in enumerate(layer_vals):
        below = batch.layer_scores < tau
        has = below.any(axis=1)
        first = below.argmax(axis=1)
        exit_idx[ei] = np.where(has, first + 1, k)

    denom = spec.layers * spec.heads * batch.lengths.astype(float) ** 2
    rows = np.arange(n)
    cost = np.empty((n, n_t * n_e * n_h))
    for ti in range(n_t):
        for hi in range(n_h):
            cum = np.cumsum(w_counts[hi][None, :] * counts_sq[ti], axis=1)
            for ei in range(n_e):
                cfg = (ti * n_e + ei) * n_h + hi
                cost[:, cfg] = cum[rows, exit_idx[ei] - 1] / denom
    return cost


def _flip_matrix(batch: ExampleBatch, cost: np.ndarray) -> np.ndarray:
    kappa = batch.model.spec.kappa
    threshold = kappa * (1.0 - cost) * batch.difficulty[:, None]
    flips = batch.flip_draw[:, None] < threshold
    return (batch.full_correct[:, None] & flips).astype(float)


def _confidence_matrix(batch: ExampleBatch, cost: np.ndarray) -> np.ndarray:
    return batch.confidence_base[:, None] * (0.5 + 0.5 * cost)


def _objective_matrix(
    objective: ObjectiveSpec,
    cost: np.ndarray,
    batch: ExampleBatch,
    lam: float | None,
) -> np.ndarray:
    """Loss matrix for one objective id, derived from the cost matrix."""
    oid = objective.id
    if oid == "cost":
        return cost
    if oid in ("accuracy", "worst_class_accuracy"):
        return _flip_matrix(batch, cost)
    if oid == "abstention":
        if lam is None:
            raise ValueError("abstention objective needs a selection threshold")
        return (_confidence_matrix(batch, cost) < lam).astype(float)
    if oid in ("selective_cost", "selective_accuracy"):
        if lam is None or objective.alpha is None:
            raise ValueError(
                "selective objectives need a selection threshold and an alpha"
            )
        base = cost if oid == "selective_cost" else _flip_matrix(batch, cost)
        abstain = _confidence_matrix(batch, cost) < lam
        return np.where(abstain, objective.alpha, base)
    raise KeyError(f"unknown simulator objective id {oid!r}")


def build_loss_table(
    batch: ExampleBatch, grid: ConfigGrid, objectives, lam: float | None = None
) -> LossTable:
    """Evaluate every grid configuration on a batch and assemble a LossTable.

    Recognized objective ids: ``cost``, ``accuracy``, ``worst_class_accuracy``
    (clipped accuracy-reduction losses with worst-class aggregation),
    ``abstention``, ``selective_cost`` and ``selective_accuracy``.
    """
    cost = _grid_cost_matrix(batch, grid)
    matrices = {
        o.id: _objective_matrix(o, cost, batch, lam) for o in objectives
    }
    return LossTable(
        matrices,
        labels=batch.labels,
        class_count=batch.model.spec.class_count,
        grid=grid,
    )


def build_loss_table_points(
    batch: ExampleBatch, points, objectives, lam: float | None = None
) -> LossTable:
    """Loss table over an arbitrary (non-grid) list of configurations.

    Column j corresponds to ``points[j]``; the table carries no grid, so only
    the grid-free procedures apply.
    """
    points = list(points)
    if not points:
        raise ValueError("need at least one configuration")
    cols = []
    for cfg in points:
        g = ConfigGrid(tuple((t,) for t in _config_thresholds(cfg)))
        cols.append(_grid_cost_matrix(batch, g)[:, 0])
    cost = np.column_stack(cols)
    matrices = {
        o.id: _objective_matrix(o, cost, batch, lam) for o in objectives
    }
    return LossTable(
        matrices,
        labels=batch.labels,
        class_count=batch.model.spec.class_count,
    )


def evaluate_point_risks(
    batch: ExampleBatch, config, objectives, lam: float | None = None
) -> np.ndarray:
    """Empirical risks of a single (possibly off-grid) configuration."""
    point = ConfigPoint(_config_thresholds(config))
    grid = ConfigGrid(tuple((t,) for t in point.thresholds))
    cost = _grid_cost_matrix(batch, grid)
    out = []
    for o in objectives:
        mat = _objective_matrix(o, cost, batch, lam)
        if o.aggregation == "worst_class":
            out.append(
                _worst_class_vector(
                    mat, batch.labels, o.alpha, batch.model.spec.class_count
                )[0]
            )
        else:
            out.append(mat.mean(axis=0)[0])
    return np.array(out)


# ---------------------------------------------------------------------------
# ground-truth risks


def oracle_risk(
    model: SimModel,
    config,
    objective: ObjectiveSpec,
    n_oracle: int = 200_000,
    seed: int = 0,
    lam: float | None = None,
) -> tuple[float, float]:
    """Monte Carlo estimate of a configuration's true risk, with its
    standard error, from a dedicated fresh sample stream."""
    point = ConfigPoint(_config_thresholds(config))
    grid = ConfigGrid(tuple((t,) for t in point.thresholds))
    risks = oracle_risk_grid(model, grid, [objective], n_oracle, seed, lam)
    mean, se = risks[objective.id]
    return float(mean[0]), float(se[0])


def oracle_risk_grid(
    model: SimModel,
    grid: ConfigGrid,
    objectives,
    n_oracle: int = 200_000,
    seed: int = 0,
    lam: float | None = None,
    chunk: int = 20_000,
) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Oracle risks for every grid configuration and objective.

    Returns per objective id a (mean, standard error) pair of vectors. The
    sample stream is keyed off a dedicated oracle namespace so it never
    collides with calibration batches.
    """
    n_classes = model.spec.class_count
    totals = {o.id: np.zeros(len(grid)) for o in objectives}
    sq_totals = {o.id: np.zeros(len(grid)) for o in objectives}
    class_sums = {
        o.id: np.zeros((n_classes, len(grid)))
        for o in objectives
        if o.aggregation == "worst_class"
    }
    class_counts = np.zeros(n_classes)
    done = 0
    part = 0
    while done < n_oracle:
        size = min(chunk, n_oracle - done)
        batch = model.sample(size, seed=hash(("oracle", seed, part)) & 0x7FFFFFFF)
        cost = _grid_cost_matrix(batch, grid)
        for o in objectives:
            mat = _objective_matrix(o, cost, batch, lam)
            if o.aggregation == "worst_class":
                for y in range(n_classes):
                    class_sums[o.id][y] += mat[batch.labels == y].sum(axis=0)
            totals[o.id] += mat.sum(axis=0)
            sq_totals[o.id] += (mat**2).sum(axis=0)
        for y in range(n_classes):
            class_counts[y] += int((batch.labels == y).sum())
        done += size
        part += 1
    out = {}
    for o in objectives:
        mean = totals[o.id] / n_oracle
        var = np.maximum(sq_totals[o.id] / n_oracle - mean**2, 0.0)
        se = np.sqrt(var / n_oracle)
        if o.aggregation == "worst_class":
            # exact full-sample worst-class statistic from accumulated
            # per-class loss sums
            per_class = (
                class_sums[o.id]
                + o.alpha * (n_oracle - class_counts)[:, None]
            ) / n_oracle
            mean = per_class.max(axis=0)
        out[o.id] = (mean, se)
    return out
