"""Command-line entry point: dataset generation, training, cross-validation.

Three subcommands:

* ``gen-data``: write the synthetic 279-row portfolio CSV.
* ``train``: run one partition end to end, writing the training trace JSON
  and that partition's metric report CSV.
* ``crossval``: run all partitions plus the classical benchmarks, writing
  ten per-partition reports, the aggregate JSON, and the benchmark CSV.

Options may come from a JSON config file (keys mirror the TrainConfig
fields, plus ansatz and protocol settings); command-line flags win over the
file. The default output directory is the QSCORECARD_OUT environment
variable, falling back to the current directory.

Exit codes: 0 success, 2 usage or filesystem errors, 3 unparseable input,
4 contract violations (bad option values, degenerate data), 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .ansatz import ANSATZ_VARIANTS, AnsatzConfig
from .data import generate_synthetic_dataset, read_dataset_csv, write_dataset_csv
from .exceptions import DataFormatError
from .pipeline import (
    DEFAULT_BATCH_SIZES,
    StackingConfig,
    TrainConfig,
    run_benchmarks,
    run_cross_validation,
    run_partition,
    stratified_partitions,
    write_aggregate_json,
    write_benchmark_csv,
    write_partition_report,
    write_trace_json,
)

OUTPUT_DIR_ENV = "QSCORECARD_OUT"

TRAIN_CONFIG_KEYS = (
    "epochs", "learning_rate", "betas", "eps", "weight_decay",
    "init_range", "batch_size", "seed",
)
EXTRA_CONFIG_KEYS = (
    "variant", "num_qubits", "angle_scale", "batch_sizes", "threshold",
    "out_of_fold",
)


def _default_out_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV) or "."


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DataFormatError("config file must hold a JSON object")
    unknown = sorted(set(raw) - set(TRAIN_CONFIG_KEYS) - set(EXTRA_CONFIG_KEYS))
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    return raw


def _resolve_settings(args) -> dict:
    """Merge the JSON config with command-line flags; flags win."""
    merged = _load_config_file(getattr(args, "config", None))
    for key in ("seed", "epochs", "learning_rate", "variant", "threshold"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value

    train_kwargs = {}
    for key in TRAIN_CONFIG_KEYS:
        if key not in merged:
            continue
        if key == "epochs" or key == "batch_size":
            train_kwargs[key] = int(merged[key])
        elif key == "seed":
            train_kwargs[key] = int(merged[key])
        elif key == "betas":
            train_kwargs[key] = tuple(float(b) for b in merged[key])
        else:
            train_kwargs[key] = float(merged[key])
    settings = {
        "train_config": TrainConfig(**train_kwargs),
        "ansatz_config": AnsatzConfig(
            variant=str(merged.get("variant", "simulation")),
            num_qubits=int(merged.get("num_qubits", 3)),
            angle_scale=float(merged.get("angle_scale", math.pi)),
        ),
        "stacking_config": StackingConfig(
            out_of_fold=bool(merged.get("out_of_fold", False))
        ),
        "batch_sizes": tuple(int(b) for b in merged.get("batch_sizes", DEFAULT_BATCH_SIZES)),
        "threshold": None if merged.get("threshold") is None else float(merged["threshold"]),
    }
    return settings


def _ensure_out_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def cmd_gen_data(args) -> int:
    dataset = generate_synthetic_dataset(seed=args.seed)
    write_dataset_csv(dataset, args.out)
    print(
        f"wrote {len(dataset)} samples ({dataset.num_defaults} defaults) to {args.out}"
    )
    return 0


def cmd_train(args) -> int:
    settings = _resolve_settings(args)
    dataset = read_dataset_csv(args.data)
    batch_sizes = settings["batch_sizes"]
    plans = stratified_partitions(
        dataset.y,
        n_partitions=len(batch_sizes),
        batch_sizes=batch_sizes,
        seed=settings["train_config"].seed,
    )
    if not 1 <= args.partition <= len(plans):
        raise ValueError(
            f"partition must be in [1, {len(plans)}], got {args.partition}"
        )
    plan = plans[args.partition - 1]
    result = run_partition(
        dataset.X,
        dataset.y,
        plan,
        settings["ansatz_config"],
        settings["train_config"],
        settings["stacking_config"],
        settings["threshold"],
    )
    out_dir = _ensure_out_dir(args.out)
    trace_path = os.path.join(out_dir, f"trace_partition_{plan.partition_id:02d}.json")
    report_path = os.path.join(out_dir, f"report_partition_{plan.partition_id:02d}.csv")
    write_trace_json(result.train_result.trace, trace_path)
    write_partition_report(result.report, plan.partition_id, report_path)
    print(
        f"partition {plan.partition_id}: best epoch {result.train_result.best_epoch}, "
        f"test AUC {result.report.auc:.4f}, KS {result.report.ks:.4f}"
    )
    print(f"wrote {trace_path}")
    print(f"wrote {report_path}")
    return 0


def cmd_crossval(args) -> int:
    settings = _resolve_settings(args)
    dataset = read_dataset_csv(args.data)
    batch_sizes = settings["batch_sizes"]
    crossval = run_cross_validation(
        dataset,
        ansatz_config=settings["ansatz_config"],
        train_config=settings["train_config"],
        stacking_config=settings["stacking_config"],
        n_partitions=len(batch_sizes),
        batch_sizes=batch_sizes,
        jobs=args.jobs,
        threshold=settings["threshold"],
    )
    benchmarks = run_benchmarks(
        train_config=settings["train_config"],
        stacking_config=settings["stacking_config"],
        crossval=crossval,
        threshold=settings["threshold"],
    )
    out_dir = _ensure_out_dir(args.out)
    for part in crossval.partitions:
        pid = part.plan.partition_id
        write_partition_report(
            part.report, pid, os.path.join(out_dir, f"report_partition_{pid:02d}.csv")
        )
    write_aggregate_json(crossval.aggregate, os.path.join(out_dir, "aggregate.json"))
    write_benchmark_csv(benchmarks, os.path.join(out_dir, "benchmark.csv"))
    for name in ("auc", "ks", "recall", "precision"):
        agg = crossval.aggregate[name]
        print(f"qnn {name}: {agg['mean']:.4f} +/- {agg['std']:.4f}")
    print(f"wrote {len(crossval.partitions) + 2} files to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qscorecard",
        description="Quantum neural network credit scorecards with model stacking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser(
        "gen-data",
        help="generate the synthetic portfolio CSV",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.add_argument("--seed", type=int, default=0, help="generator seed")
    gen.set_defaults(func=cmd_gen_data)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", required=True, help="dataset CSV path")
    common.add_argument("--config", default=None, help="JSON config file")
    common.add_argument(
        "--out",
        default=_default_out_dir(),
        help=f"output directory (or set ${OUTPUT_DIR_ENV})",
    )
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--epochs", type=int, default=None, help="training epochs")
    common.add_argument(
        "--learning-rate", dest="learning_rate", type=float, default=None,
        help="optimizer learning rate",
    )
    common.add_argument(
        "--variant", choices=ANSATZ_VARIANTS, default=None, help="ansatz variant"
    )
    common.add_argument(
        "--threshold", type=float, default=None,
        help="fixed confusion threshold (default: per-run KS maximizer)",
    )

    train = sub.add_parser(
        "train",
        parents=[common],
        help="train the QNN on a single partition",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    train.add_argument(
        "--partition", type=int, required=True, help="partition id, 1-based"
    )
    train.set_defaults(func=cmd_train)

    cross = sub.add_parser(
        "crossval",
        parents=[common],
        help="run all partitions and the classical benchmarks",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    cross.add_argument(
        "--jobs", type=int, default=1, help="partitions to run concurrently"
    )
    cross.set_defaults(func=cmd_crossval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
