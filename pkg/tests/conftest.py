import numpy as np
import pytest

from paretocal import (
    CalibrationSpec,
    ConfigGrid,
    LossTable,
    ObjectiveSpec,
    SimModel,
    SimModelSpec,
    build_loss_table,
)

# the default synthetic benchmark: dense near zero where the accuracy/cost
# trade-off lives, sparse above
BENCH_AXIS = (0.0, 0.01, 0.02, 0.04, 0.07, 0.1, 0.15, 0.25)


@pytest.fixture(scope="session")
def bench_grid() -> ConfigGrid:
    return ConfigGrid((BENCH_AXIS, BENCH_AXIS, BENCH_AXIS))


@pytest.fixture(scope="session")
def bench_model() -> SimModel:
    return SimModel(SimModelSpec())


@pytest.fixture(scope="session")
def bi_objectives():
    return (
        ObjectiveSpec("accuracy", "controlled", 0.05),
        ObjectiveSpec("cost", "free"),
    )


@pytest.fixture(scope="session")
def bi_spec(bi_objectives) -> CalibrationSpec:
    return CalibrationSpec(objectives=bi_objectives, delta=0.1)


@pytest.fixture(scope="session")
def bench_table(bench_model, bench_grid, bi_objectives) -> LossTable:
    batch = bench_model.sample(2000, seed=42)
    return build_loss_table(batch, bench_grid, bi_objectives)


@pytest.fixture()
def rng():
    return np.random.default_rng(7)
