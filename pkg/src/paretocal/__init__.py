"""Distribution-free multi-objective risk calibration.

Select model configurations (threshold tuples) whose risks are certified
below user targets with family-wise error control, while optimizing the
remaining free objectives. The main entry points are
:func:`~paretocal.testing.pareto_testing`, the method registry
:data:`~paretocal.testing.METHODS`, and the estimator wrapper
:class:`~paretocal.calibrators.RiskControlCalibrator`.
"""

from .calibrators import RiskControlCalibrator, available_methods
from .harness import (
    MethodSummary,
    SimulatorSource,
    TableSource,
    TrialRecord,
    clopper_pearson,
    efficiency_summary,
    run_trials,
    summarize,
    violation_rate,
)
from .io import read_bundle, write_bundle
from .moo import EvalBudget, SearchResult, grid_front, scalarized_search
from .objectives import (
    ExampleRecord,
    abstention_loss,
    accuracy_reduction_loss,
    empirical_risk,
    empirical_risk_vector,
    empirical_risks,
    selective_loss,
    worst_class_empirical_risk,
)
from .pareto import ObjectivePoint, OrderedCandidate, order_by_pvalue, pareto_front, prune_front
from .pvalues import binomial_cdf, combine_max, hb_pvalue, hoeffding_pvalue
from .simulator import (
    ExampleBatch,
    SimExample,
    SimModel,
    SimModelSpec,
    build_loss_table,
    build_loss_table_points,
    cost_ratio,
    evaluate_point_risks,
    evaluate_config,
    exit_layer,
    head_counts,
    oracle_risk,
    oracle_risk_grid,
    token_counts,
)
from .testing import (
    METHODS,
    BudgetGraph,
    FSTResult,
    SimplexWeights,
    alpha_constrained,
    alpha_delta_constrained,
    bonferroni,
    bonferroni_select,
    build_3d_hamming_graph,
    constrained_path,
    fixed_sequence_test,
    low_risk_path,
    pareto_testing,
    sgt,
    sgt_3d,
    split_examples,
    split_fst_baseline,
    time_share,
)
from .types import (
    CalibrationSpec,
    ConfigGrid,
    ConfigPoint,
    LossTable,
    ObjectiveSpec,
    TestOutcome,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationSpec",
    "ConfigGrid",
    "ConfigPoint",
    "LossTable",
    "ObjectiveSpec",
    "TestOutcome",
    "ExampleRecord",
    "accuracy_reduction_loss",
    "empirical_risk",
    "worst_class_empirical_risk",
    "abstention_loss",
    "selective_loss",
    "empirical_risk_vector",
    "empirical_risks",
    "hoeffding_pvalue",
    "hb_pvalue",
    "binomial_cdf",
    "combine_max",
    "ObjectivePoint",
    "OrderedCandidate",
    "pareto_front",
    "prune_front",
    "order_by_pvalue",
    "EvalBudget",
    "SearchResult",
    "grid_front",
    "scalarized_search",
    "FSTResult",
    "BudgetGraph",
    "SimplexWeights",
    "METHODS",
    "fixed_sequence_test",
    "pareto_testing",
    "bonferroni",
    "bonferroni_select",
    "sgt",
    "sgt_3d",
    "build_3d_hamming_graph",
    "split_examples",
    "split_fst_baseline",
    "low_risk_path",
    "constrained_path",
    "alpha_constrained",
    "alpha_delta_constrained",
    "time_share",
    "SimModel",
    "SimModelSpec",
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
    "SimulatorSource",
    "TableSource",
    "TrialRecord",
    "MethodSummary",
    "run_trials",
    "summarize",
    "violation_rate",
    "efficiency_summary",
    "clopper_pearson",
    "read_bundle",
    "write_bundle",
    "RiskControlCalibrator",
    "available_methods",
    "__version__",
]
