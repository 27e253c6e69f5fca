"""Quantum neural network credit scorecards with classical model stacking.

The package covers the whole workflow: exact statevector simulation of
few-qubit parameterized circuits, two QNN ansatz architectures, analytic
parameter-shift gradients bridged to a BCE loss, from-scratch classical
scorecard models (logistic regression, information-gain tree, random forest,
gradient boosting), scorecard metrics (AUC, KS, recall, precision, ROC), and
a deterministic ten-partition cross-validation protocol with model stacking.
"""

from .ansatz import (
    ANSATZ_VARIANTS,
    AnsatzConfig,
    build_ansatz,
    build_encoding_layer,
    build_hardware_ansatz,
    build_simulation_ansatz,
    qnn_forward,
    qnn_forward_batch,
)
from .circuits import GateOp, ParameterizedCircuit
from .classical import (
    BoostedModel,
    ForestModel,
    LogisticModel,
    TreeNode,
    build_tree,
    entropy,
    information_gain,
    model_from_dict,
    sigmoid,
    train_boosted,
    train_forest,
    train_logistic,
)
from .data import (
    FEATURE_COLUMNS,
    Dataset,
    generate_synthetic_dataset,
    make_toy_separable,
    read_dataset_csv,
    write_dataset_csv,
)
from .estimators import (
    DecisionTreeScorecard,
    GradientBoostingScorecard,
    LogisticScorecard,
    QNNClassifier,
    RandomForestScorecard,
    StackingTransformer,
)
from .exceptions import DataFormatError, DegenerateDataError
from .gradients import (
    GradientResult,
    ShiftSet,
    bce_loss,
    clamp_probabilities,
    expectation_jacobian_batch,
    expectation_of,
    finite_difference_gradient,
    generate_parameter_shift_values,
    loss_vjp,
    parameter_shift_gradient,
)
from .metrics import (
    ConfusionMatrix,
    MetricsReport,
    auc,
    compute_report,
    confusion_at_threshold,
    ks,
    ks_with_threshold,
    precision,
    recall,
    roc_curve,
    trapezoid_area,
)
from .optim import AdamW
from .pipeline import (
    DEFAULT_BATCH_SIZES,
    BenchmarkResult,
    CrossValResult,
    PartitionPlan,
    PartitionResult,
    StackingConfig,
    TrainConfig,
    TrainResult,
    aggregate_reports,
    benchmark_csv,
    build_stacked_features,
    fit_base_models,
    partition_report_csv,
    run_benchmarks,
    run_cross_validation,
    run_partition,
    stack_probabilities,
    stratified_partitions,
    train_qnn,
    write_aggregate_json,
    write_benchmark_csv,
    write_partition_report,
    write_trace_json,
)
from .qsim import (
    MAX_QUBITS,
    ReadoutErrorModel,
    apply_gate,
    apply_readout_error,
    expectation_z,
    expectation_z_batch,
    init_state,
    run_circuit,
    run_circuit_batch,
    sample_measurements,
)
from .validation import (
    check_binary_labels,
    check_feature_matrix,
    check_scores_labels,
    check_training_data,
)

__version__ = "0.1.0"

__all__ = [
    "ANSATZ_VARIANTS",
    "AdamW",
    "AnsatzConfig",
    "BenchmarkResult",
    "BoostedModel",
    "ConfusionMatrix",
    "CrossValResult",
    "DEFAULT_BATCH_SIZES",
    "DataFormatError",
    "Dataset",
    "DecisionTreeScorecard",
    "DegenerateDataError",
    "FEATURE_COLUMNS",
    "ForestModel",
    "GateOp",
    "GradientBoostingScorecard",
    "GradientResult",
    "LogisticModel",
    "LogisticScorecard",
    "MAX_QUBITS",
    "MetricsReport",
    "ParameterizedCircuit",
    "PartitionPlan",
    "PartitionResult",
    "QNNClassifier",
    "RandomForestScorecard",
    "ReadoutErrorModel",
    "ShiftSet",
    "StackingConfig",
    "StackingTransformer",
    "TrainConfig",
    "TrainResult",
    "TreeNode",
    "aggregate_reports",
    "apply_gate",
    "apply_readout_error",
    "auc",
    "bce_loss",
    "benchmark_csv",
    "build_ansatz",
    "build_encoding_layer",
    "build_hardware_ansatz",
    "build_simulation_ansatz",
    "build_stacked_features",
    "build_tree",
    "check_binary_labels",
    "check_feature_matrix",
    "check_scores_labels",
    "check_training_data",
    "clamp_probabilities",
    "compute_report",
    "confusion_at_threshold",
    "entropy",
    "expectation_jacobian_batch",
    "expectation_of",
    "expectation_z",
    "expectation_z_batch",
    "finite_difference_gradient",
    "fit_base_models",
    "generate_parameter_shift_values",
    "generate_synthetic_dataset",
    "information_gain",
    "init_state",
    "ks",
    "ks_with_threshold",
    "loss_vjp",
    "make_toy_separable",
    "model_from_dict",
    "parameter_shift_gradient",
    "partition_report_csv",
    "precision",
    "qnn_forward",
    "qnn_forward_batch",
    "read_dataset_csv",
    "recall",
    "roc_curve",
    "run_benchmarks",
    "run_cross_validation",
    "run_partition",
    "sample_measurements",
    "sigmoid",
    "stack_probabilities",
    "stratified_partitions",
    "train_boosted",
    "train_forest",
    "train_logistic",
    "train_qnn",
    "trapezoid_area",
    "write_aggregate_json",
    "write_benchmark_csv",
    "write_dataset_csv",
    "write_partition_report",
    "write_trace_json",
]
