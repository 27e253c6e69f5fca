import json
import subprocess
import sys

import pytest

from qscorecard.cli import main


@pytest.fixture(scope="module")
def portfolio_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "portfolio.csv"
    assert main(["gen-data", "--out", str(path), "--seed", "0"]) == 0
    return str(path)


@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "config.json"
    path.write_text(json.dumps({"epochs": 2, "batch_sizes": [32, 32]}))
    return str(path)


def test_gen_data_writes_portfolio(tmp_path):
    out = tmp_path / "portfolio.csv"
    assert main(["gen-data", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 280
    assert lines[0] == "f1,f2,f3,f4,f5,f6,f7,f8,label"
    labels = [line.rsplit(",", 1)[1] for line in lines[1:]]
    assert labels.count("1") == 41


def test_gen_data_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["gen-data", "--out", str(a), "--seed", "2"])
    main(["gen-data", "--out", str(b), "--seed", "2"])
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    main(["gen-data", "--out", str(c), "--seed", "3"])
    assert a.read_bytes() != c.read_bytes()


def test_missing_required_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["gen-data"])
    assert exc.value.code == 2


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["tune"])
    assert exc.value.code == 2


def test_help_exits_cleanly(capsys):
    for argv in (["--help"], ["train", "--help"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "--learning-rate" in out
    assert "default" in out


def test_train_writes_trace_and_report(tmp_path, portfolio_csv, small_config, capsys):
    out_dir = tmp_path / "run"
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            small_config,
            "--partition",
            "1",
            "--out",
            str(out_dir),
        ]
    )
    assert code == 0
    trace = json.loads((out_dir / "trace_partition_01.json").read_text())
    assert len(trace) == 2
    assert trace[0]["epoch"] == 1
    assert len(trace[0]["params"]) == 14
    report_lines = (out_dir / "report_partition_01.csv").read_text().splitlines()
    assert report_lines[0] == "partition,auc,ks,recall,precision,threshold"
    assert report_lines[1].startswith("1,")
    stdout = capsys.readouterr().out
    assert "partition 1" in stdout
    assert "test AUC" in stdout


def test_train_flags_override_config(tmp_path, portfolio_csv, small_config):
    out_dir = tmp_path / "run"
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            small_config,
            "--partition",
            "1",
            "--epochs",
            "1",
            "--out",
            str(out_dir),
        ]
    )
    assert code == 0
    trace = json.loads((out_dir / "trace_partition_01.json").read_text())
    assert len(trace) == 1


def test_train_hardware_variant(tmp_path, portfolio_csv, small_config):
    out_dir = tmp_path / "run"
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            small_config,
            "--partition",
            "2",
            "--variant",
            "hardware",
            "--out",
            str(out_dir),
        ]
    )
    assert code == 0
    trace = json.loads((out_dir / "trace_partition_02.json").read_text())
    assert len(trace[0]["params"]) == 6


def test_train_partition_out_of_range(tmp_path, portfolio_csv, small_config, capsys):
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            small_config,
            "--partition",
            "3",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 4
    assert "partition must be in [1, 2]" in capsys.readouterr().err


def test_train_rejects_malformed_csv(tmp_path, small_config, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("f1,f2,f3,f4,f5,f6,f7,f8,label\n1,2,3\n")
    code = main(
        [
            "train",
            "--data",
            str(bad),
            "--config",
            small_config,
            "--partition",
            "1",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 3
    assert "line 2" in capsys.readouterr().err


def test_train_missing_data_file_is_os_error(tmp_path, small_config, capsys):
    code = main(
        [
            "train",
            "--data",
            str(tmp_path / "nope.csv"),
            "--config",
            small_config,
            "--partition",
            "1",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path, portfolio_csv, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"epochs": 2, "optimizer": "sgd"}))
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            str(cfg),
            "--partition",
            "1",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 4
    assert "optimizer" in capsys.readouterr().err


def test_invalid_json_config_rejected(tmp_path, portfolio_csv, capsys):
    cfg = tmp_path / "broken.json"
    cfg.write_text("{not json")
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            str(cfg),
            "--partition",
            "1",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 3
    assert "JSON" in capsys.readouterr().err


def test_non_object_json_config_rejected(tmp_path, portfolio_csv):
    cfg = tmp_path / "list.json"
    cfg.write_text("[1, 2, 3]")
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            str(cfg),
            "--partition",
            "1",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 3


def test_unwritable_out_dir_is_os_error(tmp_path, portfolio_csv, small_config, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            small_config,
            "--partition",
            "1",
            "--out",
            str(blocker / "sub"),
        ]
    )
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_out_dir_env_var_is_default(tmp_path, portfolio_csv, small_config, monkeypatch):
    target = tmp_path / "from_env"
    monkeypatch.setenv("QSCORECARD_OUT", str(target))
    code = main(
        [
            "train",
            "--data",
            portfolio_csv,
            "--config",
            small_config,
            "--partition",
            "1",
        ]
    )
    assert code == 0
    assert (target / "trace_partition_01.json").exists()


def crossval_run(out_dir, portfolio_csv, small_config, jobs="1", extra=()):
    return main(
        [
            "crossval",
            "--data",
            portfolio_csv,
            "--config",
            small_config,
            "--out",
            str(out_dir),
            "--jobs",
            jobs,
            *extra,
        ]
    )


def test_crossval_writes_all_reports(tmp_path, portfolio_csv, small_config, capsys):
    out_dir = tmp_path / "cv"
    assert crossval_run(out_dir, portfolio_csv, small_config) == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == [
        "aggregate.json",
        "benchmark.csv",
        "report_partition_01.csv",
        "report_partition_02.csv",
    ]
    aggregate = json.loads((out_dir / "aggregate.json").read_text())
    assert set(aggregate) == {"auc", "ks", "recall", "precision"}
    bench_lines = (out_dir / "benchmark.csv").read_text().splitlines()
    assert bench_lines[0].startswith("model,auc_mean")
    assert [line.split(",")[0] for line in bench_lines[1:]] == [
        "logistic",
        "tree",
        "forest",
        "boosted",
        "qnn",
    ]
    stdout = capsys.readouterr().out
    assert "qnn auc:" in stdout
    assert "wrote 4 files" in stdout


def test_crossval_byte_identical_across_jobs(tmp_path, portfolio_csv, small_config):
    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    assert crossval_run(dir_a, portfolio_csv, small_config, jobs="1") == 0
    assert crossval_run(dir_b, portfolio_csv, small_config, jobs="2") == 0
    for name in (
        "aggregate.json",
        "benchmark.csv",
        "report_partition_01.csv",
        "report_partition_02.csv",
    ):
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes(), name


def test_crossval_fixed_threshold_flag(tmp_path, portfolio_csv, small_config):
    out_dir = tmp_path / "cv"
    code = crossval_run(
        out_dir, portfolio_csv, small_config, extra=("--threshold", "0.5")
    )
    assert code == 0
    row = (out_dir / "report_partition_01.csv").read_text().splitlines()[1]
    assert row.split(",")[-1] == "0.5"


def test_module_entry_point_help():
    proc = subprocess.run(
        [sys.executable, "-m", "qscorecard.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "gen-data" in proc.stdout
