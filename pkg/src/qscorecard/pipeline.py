"""End-to-end experiment protocol: partitioning, stacking, QNN training, CV.

The protocol mirrors a ten-partition repeated random sub-sampling scheme on
the 279-sample portfolio: each partition independently re-shuffles the data
into a stratified 7:3 split (195 train with 29 defaults, 84 test with 12),
carries its own mini-batch size, trains the three classical base models on
the train side, stacks their predicted default probabilities into 3-d
feature vectors, and trains the QNN on those. Test metrics come from the
best-train-AUC epoch. Aggregation reports mean and sample standard deviation
over the ten partitions.

Everything is driven by one master seed. Per-partition seeds are derived
through ``numpy.random.SeedSequence`` with fixed tags, so results are
bit-identical no matter how many worker processes run the partitions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed

from .ansatz import AnsatzConfig, build_ansatz, qnn_forward_batch
from .circuits import ParameterizedCircuit
from .classical import build_tree, train_boosted, train_forest, train_logistic
from .data import Dataset, generate_synthetic_dataset  # noqa: F401  (re-export)
from .gradients import bce_loss, expectation_jacobian_batch, loss_vjp
from .metrics import REPORT_FIELDS, MetricsReport, auc, compute_report
from .optim import AdamW
from .validation import check_binary_labels, check_feature_matrix, check_training_data

DEFAULT_BATCH_SIZES = (64, 64, 32, 32, 32, 64, 128, 128, 32, 32)

BASE_MODEL_NAMES = ("logistic", "forest", "boosted")
BENCHMARK_MODELS = ("logistic", "tree", "forest", "boosted", "qnn")

# Seed-derivation tags; combined with the master seed and partition id they
# give every random decision its own independent stream.
_TAG_PARTITION = 1
_TAG_STACK = 2
_TAG_TRAIN = 3
_TAG_BENCH = 4
_TAG_FOLD = 5
_TAG_INIT = 6
_TAG_SHUFFLE = 7


def _rng(*key) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(tuple(int(k) for k in key)))


def _derived_seed(*key) -> int:
    seq = np.random.SeedSequence(tuple(int(k) for k in key))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class PartitionPlan:
    """One train/test split of the dataset plus its mini-batch size."""

    partition_id: int
    train_indices: np.ndarray
    test_indices: np.ndarray
    batch_size: int


def stratified_partitions(
    labels,
    n_partitions: int = 10,
    train_fraction: float = 0.7,
    batch_sizes=DEFAULT_BATCH_SIZES,
    seed: int = 0,
) -> list[PartitionPlan]:
    """Independent stratified splits, one per partition.

    The default class takes ceil(train_fraction * count) training samples and
    the non-default class floor(train_fraction * count), which reproduces the
    195/84 protocol exactly on a 279-sample, 41-default portfolio. Each
    partition shuffles both classes with its own derived seed.
    """
    y = labels.y if isinstance(labels, Dataset) else labels
    y = check_binary_labels(y, require_both_classes=True)
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if n_partitions < 1:
        raise ValueError(f"n_partitions must be >= 1, got {n_partitions}")
    batch_sizes = tuple(int(b) for b in batch_sizes)
    if len(batch_sizes) != n_partitions:
        raise ValueError(
            f"got {len(batch_sizes)} batch sizes for {n_partitions} partitions"
        )
    if any(b < 1 for b in batch_sizes):
        raise ValueError(f"batch sizes must be >= 1, got {batch_sizes}")

    pos = np.flatnonzero(y == 1)
    neg = np.flatnonzero(y == 0)
    # guard float dust so e.g. 0.7 * 20 rounds to 14, not 15
    n_train_pos = math.ceil(train_fraction * pos.size - 1e-9)
    n_train_neg = math.floor(train_fraction * neg.size + 1e-9)
    plans = []
    for pid in range(1, n_partitions + 1):
        rng = _rng(seed, _TAG_PARTITION, pid)
        pos_perm = rng.permutation(pos)
        neg_perm = rng.permutation(neg)
        train = np.sort(np.concatenate([pos_perm[:n_train_pos], neg_perm[:n_train_neg]]))
        test = np.sort(np.concatenate([pos_perm[n_train_pos:], neg_perm[n_train_neg:]]))
        plans.append(
            PartitionPlan(
                partition_id=pid,
                train_indices=train,
                test_indices=test,
                batch_size=batch_sizes[pid - 1],
            )
        )
    return plans


@dataclass(frozen=True)
class StackingConfig:
    """Hyperparameters of the three base scorecards and the stacking mode.

    With ``out_of_fold`` off (the default), base models train once on the
    full training partition and score both sides; this leaks the training
    labels into the training-side stacked features but keeps every model in
    a comparison fitted on identical rows. Out-of-fold stacking is available
    when leakage-free training features matter more.
    """

    logistic_lr: float = 0.5
    logistic_iters: int = 2000
    logistic_tol: float = 1e-6
    n_trees: int = 100
    forest_depth: int = 5
    forest_min_leaf: int = 5
    feature_fraction: float | None = None
    n_rounds: int = 100
    boost_depth: int = 3
    boost_lr: float = 0.1
    out_of_fold: bool = False
    n_folds: int = 5
    seed: int = 0


def fit_base_models(X, y, config: StackingConfig | None = None) -> dict:
    """Train the logistic, forest, and boosted base models on one partition."""
    config = config or StackingConfig()
    X, y = check_training_data(X, y)
    return {
        "logistic": train_logistic(
            X, y, lr=config.logistic_lr, max_iters=config.logistic_iters,
            tol=config.logistic_tol,
        ),
        "forest": train_forest(
            X, y, n_trees=config.n_trees, max_depth=config.forest_depth,
            min_leaf=config.forest_min_leaf, feature_fraction=config.feature_fraction,
            seed=_derived_seed(config.seed, _TAG_STACK, 1),
        ),
        "boosted": train_boosted(
            X, y, n_rounds=config.n_rounds, max_depth=config.boost_depth,
            learning_rate=config.boost_lr,
        ),
    }


def stack_probabilities(models: dict, X) -> np.ndarray:
    """Map samples to their (logistic, forest, boosted) default probabilities."""
    X = check_feature_matrix(X)
    return np.column_stack([models[name].predict_proba(X) for name in BASE_MODEL_NAMES])


def _stratified_folds(y, n_folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    folds = [[] for _ in range(n_folds)]
    for cls in (1, 0):
        idx = rng.permutation(np.flatnonzero(y == cls))
        for k, chunk in enumerate(np.array_split(idx, n_folds)):
            folds[k].append(chunk)
    return [np.sort(np.concatenate(parts)) for parts in folds]


def _out_of_fold_stack(X, y, config: StackingConfig) -> np.ndarray:
    stacked = np.empty((y.size, len(BASE_MODEL_NAMES)))
    folds = _stratified_folds(y, config.n_folds, _rng(config.seed, _TAG_FOLD))
    for k, fold in enumerate(folds):
        rest = np.setdiff1d(np.arange(y.size), fold)
        fold_config = replace(config, seed=_derived_seed(config.seed, _TAG_FOLD, k))
        models = fit_base_models(X[rest], y[rest], fold_config)
        stacked[fold] = stack_probabilities(models, X[fold])
    return stacked


def build_stacked_features(
    train_X, train_y, apply_X, config: StackingConfig | None = None
) -> np.ndarray:
    """Train base models on the train split and stack probabilities for ``apply_X``."""
    models = fit_base_models(train_X, train_y, config)
    return stack_probabilities(models, apply_X)


@dataclass
class TrainConfig:
    """QNN training hyperparameters; ``seed`` is the master seed of a run."""

    epochs: int = 50
    learning_rate: float = 0.05
    betas: tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    weight_decay: float = 0.01
    init_range: float = math.pi
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        self.betas = tuple(float(b) for b in self.betas)
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.init_range < 0:
            raise ValueError(f"init_range must be >= 0, got {self.init_range}")


@dataclass
class TrainResult:
    """Final and best-epoch parameters plus the full per-epoch trace."""

    final_params: np.ndarray
    best_params: np.ndarray
    best_epoch: int
    trace: list


def train_qnn(
    stacked_X,
    y,
    circuit: ParameterizedCircuit,
    config: TrainConfig | None = None,
    angle_scale: float = math.pi,
) -> TrainResult:
    """Mini-batch QNN training with BCE loss, parameter-shift gradients, AdamW.

    Each epoch shuffles the training set, walks it in batches, and records
    one trace entry: the sample-weighted mean batch loss, the full-train AUC
    and raw predictions at the end-of-epoch parameters, the parameter
    snapshot, and the sample-weighted mean batch gradient. Best parameters
    are the end-of-epoch snapshot with the highest train AUC, earliest epoch
    on ties.
    """
    config = config or TrainConfig()
    X, y = check_training_data(stacked_X, y)
    if X.shape[1] != circuit.num_encoding_slots:
        raise ValueError(
            f"{X.shape[1]} stacked features for {circuit.num_encoding_slots} "
            "encoding slots"
        )
    m = y.size
    init_rng = _rng(config.seed, _TAG_INIT)
    theta = init_rng.uniform(
        -config.init_range, config.init_range, size=circuit.num_trainable_slots
    )
    shuffle_rng = _rng(config.seed, _TAG_SHUFFLE)
    optimizer = AdamW(
        lr=config.learning_rate, betas=config.betas, eps=config.eps,
        weight_decay=config.weight_decay,
    )
    encoded = angle_scale * X
    trace: list[dict] = []
    best_auc = -1.0
    best_epoch = 0
    best_params = theta.copy()
    for epoch in range(1, config.epochs + 1):
        perm = shuffle_rng.permutation(m)
        loss_sum = 0.0
        grad_sum = np.zeros_like(theta)
        for start in range(0, m, config.batch_size):
            idx = perm[start : start + config.batch_size]
            probs = qnn_forward_batch(circuit, X[idx], theta, angle_scale)
            dz_dtheta = expectation_jacobian_batch(circuit, encoded[idx], theta)
            grad = loss_vjp(probs, y[idx], -0.5 * dz_dtheta)
            loss_sum += bce_loss(probs, y[idx]) * idx.size
            grad_sum += grad * idx.size
            theta = optimizer.step(theta, grad)
        train_probs = qnn_forward_batch(circuit, X, theta, angle_scale)
        train_auc = auc(train_probs, y)
        trace.append(
            {
                "epoch": epoch,
                "loss": loss_sum / m,
                "train_auc": float(train_auc),
                "params": [float(v) for v in theta],
                "grads": [float(v) for v in grad_sum / m],
                "train_probs": [float(p) for p in train_probs],
            }
        )
        if train_auc > best_auc:
            best_auc = train_auc
            best_epoch = epoch
            best_params = theta.copy()
    return TrainResult(
        final_params=theta,
        best_params=best_params,
        best_epoch=best_epoch,
        trace=trace,
    )


@dataclass
class PartitionResult:
    """Everything produced on one partition, kept for benchmarking and reports."""

    plan: PartitionPlan
    stacked_train: np.ndarray
    stacked_test: np.ndarray
    y_train: np.ndarray
    y_test: np.ndarray
    train_result: TrainResult
    test_probs: np.ndarray
    report: MetricsReport


@dataclass
class CrossValResult:
    partitions: list
    reports: list
    aggregate: dict


def run_partition(
    X,
    y,
    plan: PartitionPlan,
    ansatz_config: AnsatzConfig,
    train_config: TrainConfig,
    stacking_config: StackingConfig,
    threshold: float | None = None,
) -> PartitionResult:
    tr, te = plan.train_indices, plan.test_indices
    stack_config = replace(
        stacking_config,
        seed=_derived_seed(train_config.seed, _TAG_STACK, plan.partition_id),
    )
    models = fit_base_models(X[tr], y[tr], stack_config)
    if stack_config.out_of_fold:
        stacked_train = _out_of_fold_stack(X[tr], y[tr], stack_config)
    else:
        stacked_train = stack_probabilities(models, X[tr])
    stacked_test = stack_probabilities(models, X[te])
    partition_config = replace(
        train_config,
        seed=_derived_seed(train_config.seed, _TAG_TRAIN, plan.partition_id),
        batch_size=plan.batch_size,
    )
    circuit = build_ansatz(ansatz_config)
    train_result = train_qnn(
        stacked_train, y[tr], circuit, partition_config, ansatz_config.angle_scale
    )
    test_probs = qnn_forward_batch(
        circuit, stacked_test, train_result.best_params, ansatz_config.angle_scale
    )
    return PartitionResult(
        plan=plan,
        stacked_train=stacked_train,
        stacked_test=stacked_test,
        y_train=y[tr],
        y_test=y[te],
        train_result=train_result,
        test_probs=test_probs,
        report=compute_report(test_probs, y[te], threshold=threshold),
    )


def aggregate_reports(reports) -> dict:
    """Mean and sample standard deviation of each metric over partitions."""
    out = {}
    for name in ("auc", "ks", "recall", "precision"):
        values = np.array([getattr(r, name) for r in reports], dtype=np.float64)
        std = float(values.std(ddof=1)) if values.size > 1 else 0.0
        out[name] = {"mean": float(values.mean()), "std": std}
    return out


def run_cross_validation(
    dataset: Dataset,
    ansatz_config: AnsatzConfig | None = None,
    train_config: TrainConfig | None = None,
    stacking_config: StackingConfig | None = None,
    n_partitions: int = 10,
    batch_sizes=DEFAULT_BATCH_SIZES,
    jobs: int = 1,
    threshold: float | None = None,
) -> CrossValResult:
    """The full protocol: stack, train, and evaluate the QNN on every partition.

    Partitions are independent; ``jobs`` only controls how many run at once
    and never changes any result byte. ``threshold`` fixes the confusion
    threshold for recall and precision; the default is each partition's
    KS-maximizing cut.
    """
    ansatz_config = ansatz_config or AnsatzConfig()
    train_config = train_config or TrainConfig()
    stacking_config = stacking_config or StackingConfig()
    plans = stratified_partitions(
        dataset.y, n_partitions=n_partitions, batch_sizes=batch_sizes,
        seed=train_config.seed,
    )
    partitions = Parallel(n_jobs=jobs)(
        delayed(run_partition)(
            dataset.X, dataset.y, plan, ansatz_config, train_config,
            stacking_config, threshold,
        )
        for plan in plans
    )
    reports = [p.report for p in partitions]
    return CrossValResult(
        partitions=partitions,
        reports=reports,
        aggregate=aggregate_reports(reports),
    )


@dataclass
class BenchmarkResult:
    """Per-model metric reports over the same partitions, plus aggregates."""

    per_model_reports: dict
    aggregates: dict


def run_benchmarks(
    dataset: Dataset | None = None,
    ansatz_config: AnsatzConfig | None = None,
    train_config: TrainConfig | None = None,
    stacking_config: StackingConfig | None = None,
    n_partitions: int = 10,
    batch_sizes=DEFAULT_BATCH_SIZES,
    jobs: int = 1,
    crossval: CrossValResult | None = None,
    threshold: float | None = None,
) -> BenchmarkResult:
    """Classical scorecards and the QNN under the identical stacked protocol.

    Every benchmark model consumes the same 3-d stacked features and the same
    test indices as the QNN, partition by partition. Pass an existing
    ``crossval`` result to reuse its partitions and stacked features; without
    one, the cross-validation runs here first.
    """
    if crossval is None:
        if dataset is None:
            raise ValueError("either a dataset or a crossval result is required")
        crossval = run_cross_validation(
            dataset, ansatz_config, train_config, stacking_config,
            n_partitions=n_partitions, batch_sizes=batch_sizes, jobs=jobs,
            threshold=threshold,
        )
    train_config = train_config or TrainConfig()
    stacking_config = stacking_config or StackingConfig()
    per_model: dict[str, list[MetricsReport]] = {name: [] for name in BENCHMARK_MODELS}
    for part in crossval.partitions:
        seed = _derived_seed(
            train_config.seed, _TAG_BENCH, part.plan.partition_id
        )
        fitted = {
            "logistic": train_logistic(
                part.stacked_train, part.y_train,
                lr=stacking_config.logistic_lr,
                max_iters=stacking_config.logistic_iters,
                tol=stacking_config.logistic_tol,
            ),
            "tree": build_tree(part.stacked_train, part.y_train),
            "forest": train_forest(
                part.stacked_train, part.y_train,
                n_trees=stacking_config.n_trees,
                max_depth=stacking_config.forest_depth,
                min_leaf=stacking_config.forest_min_leaf,
                feature_fraction=stacking_config.feature_fraction,
                seed=seed,
            ),
            "boosted": train_boosted(
                part.stacked_train, part.y_train,
                n_rounds=stacking_config.n_rounds,
                max_depth=stacking_config.boost_depth,
                learning_rate=stacking_config.boost_lr,
            ),
        }
        for name, model in fitted.items():
            scores = (
                model.predict(part.stacked_test)
                if name == "tree"
                else model.predict_proba(part.stacked_test)
            )
            per_model[name].append(
                compute_report(scores, part.y_test, threshold=threshold)
            )
        per_model["qnn"].append(part.report)
    aggregates = {name: aggregate_reports(reps) for name, reps in per_model.items()}
    return BenchmarkResult(per_model_reports=per_model, aggregates=aggregates)


# ---------------------------------------------------------------------------
# Report serialization. All writers produce byte-stable output: sorted JSON
# keys, repr floats, unix newlines.


def write_trace_json(trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(trace, fh, indent=2, sort_keys=True)
        fh.write("\n")


def partition_report_csv(report: MetricsReport, partition_id: int) -> str:
    header = "partition," + ",".join(REPORT_FIELDS)
    return header + "\n" + ",".join(report.to_csv_row(partition_id)) + "\n"


def write_partition_report(report: MetricsReport, partition_id: int, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(partition_report_csv(report, partition_id))


def write_aggregate_json(aggregate: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(aggregate, fh, indent=2, sort_keys=True)
        fh.write("\n")


def benchmark_csv(result: BenchmarkResult) -> str:
    columns = ["model"]
    for metric in ("auc", "ks", "recall", "precision"):
        columns += [f"{metric}_mean", f"{metric}_std"]
    lines = [",".join(columns)]
    for name in BENCHMARK_MODELS:
        agg = result.aggregates[name]
        row = [name]
        for metric in ("auc", "ks", "recall", "precision"):
            row += [repr(agg[metric]["mean"]), repr(agg[metric]["std"])]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_benchmark_csv(result: BenchmarkResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(benchmark_csv(result))
