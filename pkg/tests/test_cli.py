import json
from pathlib import Path

import pytest

from creditxai.cli import main
from creditxai.reports import read_report


def write_config(corpus: Path, **overrides) -> Path:
    config = {
        "config_version": 1,
        "data_csv": "loans.csv",
        "macro_csvs": ["GDP.csv", "UnemploymentRate.csv", "HPI.csv"],
        "schema_file": "schema.json",
        "out_dir": "out",
        "seed": 7,
        "perturb": {"sample_count": 600},
        "scorecard": {
            "global_sample": 8,
            "local_instances": 20,
            "consistency_instances": 3,
            "consistency_repeats": 2,
        },
        "train": {"max_epochs": 25},
    }
    config.update(overrides)
    path = corpus / "config.json"
    path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    ws = tmp_path_factory.mktemp("cli")
    corpus = ws / "corpus"
    assert main(["gen-data", "--out", str(corpus), "--rows", "400", "--seed", "7"]) == 0
    cfg = write_config(corpus)
    assert main(["prepare", "--config", str(cfg)]) == 0
    assert main(["train", "--config", str(cfg)]) == 0
    return corpus


class TestGenData:
    def test_files_written(self, workspace):
        for name in ("loans.csv", "GDP.csv", "UnemploymentRate.csv", "HPI.csv", "schema.json"):
            assert (workspace / name).exists()

    def test_row_count(self, workspace):
        lines = (workspace / "loans.csv").read_text().strip().splitlines()
        assert len(lines) == 401  # header + rows


class TestPrepare:
    def test_outputs(self, workspace):
        prepared = workspace / "out" / "prepared"
        for name in ("train.csv", "test.csv", "meta.json"):
            assert (prepared / name).exists()

    def test_rerun_byte_identical(self, workspace, tmp_path):
        cfg = workspace / "config.json"
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["prepare", "--config", str(cfg), "--out", str(out_a)]) == 0
        assert main(["prepare", "--config", str(cfg), "--out", str(out_b)]) == 0
        for name in ("train.csv", "test.csv", "meta.json"):
            assert (out_a / "prepared" / name).read_bytes() == (
                out_b / "prepared" / name
            ).read_bytes()

    def test_missing_schema_is_usage_error(self, workspace, tmp_path, capsys):
        cfg = json.loads((workspace / "config.json").read_text())
        cfg["schema_file"] = "does-not-exist.json"
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(cfg))
        assert main(["prepare", "--config", str(bad)]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_config_is_usage_error(self, tmp_path, capsys):
        assert main(["prepare", "--config", str(tmp_path / "none.json")]) == 2
        assert capsys.readouterr().err.startswith("error:")


class TestTrain:
    def test_model_files_and_reports(self, workspace):
        out = workspace / "out"
        for kind in ("logistic", "forest", "mlp"):
            assert (out / "models" / f"{kind}.model.json").exists()
            assert (out / "reports" / f"eval_{kind}.json").exists()
        assert (out / "reports" / "comparison.txt").exists()
        reports = read_report(out / "reports" / "comparison.json")
        aucs = [r.auc for r in reports]
        assert aucs == sorted(aucs, reverse=True)

    def test_single_model_selection(self, workspace, tmp_path):
        cfg = workspace / "config.json"
        out = tmp_path / "single"
        assert main(["prepare", "--config", str(cfg), "--out", str(out)]) == 0
        assert main(
            ["train", "--config", str(cfg), "--out", str(out), "--model", "logistic"]
        ) == 0
        assert (out / "models" / "logistic.model.json").exists()
        assert not (out / "models" / "forest.model.json").exists()

    def test_partial_failure_keeps_other_models(self, tmp_path, capsys):
        corpus = tmp_path / "tiny"
        assert main(["gen-data", "--out", str(corpus), "--rows", "60", "--seed", "3"]) == 0
        cfg = write_config(corpus, models=["logistic", "mlp"])
        assert main(["prepare", "--config", str(cfg)]) == 0
        code = main(["train", "--config", str(cfg)])
        err = capsys.readouterr().err
        assert code == 1
        assert "error: mlp" in err  # too few rows for a validation split
        assert (corpus / "out" / "models" / "logistic.model.json").exists()
        assert not (corpus / "out" / "models" / "mlp.model.json").exists()


class TestEvaluateExplainScorecard:
    def test_evaluate(self, workspace):
        assert main(["evaluate", "--config", str(workspace / "config.json")]) == 0

    def test_explain_writes_reports(self, workspace):
        cfg = workspace / "config.json"
        assert main(["explain", "--config", str(cfg), "--row", "1", "--model", "mlp"]) == 0
        outdir = workspace / "out" / "explanations"
        explanation = read_report(outdir / "row1_lime_mlp.json")
        assert explanation.method == "lime"
        notice = read_report(outdir / "row1_notice_mlp.json")
        assert notice.decision in ("approve", "deny")
        assert (outdir / "row1_notice_mlp.txt").read_text().startswith("ADVERSE ACTION")

    def test_explain_row_out_of_range(self, workspace, capsys):
        cfg = workspace / "config.json"
        assert main(["explain", "--config", str(cfg), "--row", "100000"]) == 1
        assert "out of range" in capsys.readouterr().err

    def test_scorecard_outputs(self, workspace):
        cfg = workspace / "config.json"
        assert main(["scorecard", "--config", str(cfg)]) == 0
        outdir = workspace / "out" / "scorecard"
        for kind in ("logistic", "forest", "mlp"):
            card = read_report(outdir / f"scorecard_{kind}.json")
            assert set(card.scores) == {"inherent", "global", "local", "consistency", "complexity"}
        svg = (outdir / "radar.svg").read_text()
        assert svg.count('class="model-polygon"') == 3


class TestLocking:
    def test_locked_directory_fails(self, workspace, capsys):
        cfg = workspace / "config.json"
        lock = workspace / "out" / ".lock"
        lock.write_text("held")
        try:
            assert main(["evaluate", "--config", str(cfg)]) == 1
            assert "locked" in capsys.readouterr().err
        finally:
            lock.unlink()

    def test_lock_released_after_run(self, workspace):
        assert not (workspace / "out" / ".lock").exists()


class TestUsage:
    def test_unknown_model_kind(self, workspace, capsys):
        cfg = json.loads((workspace / "config.json").read_text())
        cfg["models"] = ["boosting"]
        bad = workspace / "bad_models.json"
        bad.write_text(json.dumps(cfg))
        assert main(["prepare", "--config", str(bad)]) == 2
        assert "unknown model kind" in capsys.readouterr().err

    def test_argparse_usage_exits_two(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["train"])  # --config required
        assert excinfo.value.code == 2
