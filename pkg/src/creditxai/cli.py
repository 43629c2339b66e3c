"""Command-line pipeline: prepare, train, evaluate, explain, scorecard, gen-data.

Exit codes: 0 success, 1 runtime failure, 2 usage error. Failures print one
``error: ...`` line to stderr. A lock file guards each output directory so
two commands cannot write it concurrently.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ingest
from .explain import Explainer, PerturbConfig, sample_background
from .metrics import comparison_table, evaluate_model
from .models import MODEL_KINDS, TRAINERS, TrainConfig, load_model, predict_proba, save_model
from .radar import radar_chart_svg
from .reports import build_adverse_action, emit_report, notice_text
from .scorecard import DEFAULT_WEIGHTS, build_scorecard
from .synth import SynthConfig, write_corpus

CONFIG_VERSION = 1


class UsageError(Exception):
    """Bad invocation or unusable configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    data_csv: Path
    macro_csvs: list[Path]
    schema_file: Path
    out_dir: Path
    seed: int = 42
    split_ratio: float = 0.8
    collinear_threshold: float = 0.85
    models: list[str] = field(default_factory=lambda: list(MODEL_KINDS))
    explainer: str = "lime"
    threshold: float = 0.5
    background_size: int = 100
    perturb: dict = field(default_factory=dict)
    scorecard_weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    scorecard_global_sample: int = 64
    scorecard_local_instances: int = 20
    scorecard_consistency_instances: int = 8
    scorecard_consistency_repeats: int = 3
    train: dict = field(default_factory=dict)


def load_run_config(path: str | Path, args=None) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise UsageError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid config JSON ({exc})") from None
    if raw.get("config_version") != CONFIG_VERSION:
        raise UsageError(f"{path}: unsupported config_version {raw.get('config_version')!r}")
    base = path.parent

    def respath(p):
        p = Path(p)
        return p if p.is_absolute() else base / p

    try:
        cfg = RunConfig(
            data_csv=respath(raw["data_csv"]),
            macro_csvs=[respath(p) for p in raw.get("macro_csvs", [])],
            schema_file=respath(raw["schema_file"]),
            out_dir=respath(raw.get("out_dir", "out")),
        )
    except KeyError as exc:
        raise UsageError(f"{path}: missing config key {exc}") from None
    cfg.seed = int(raw.get("seed", cfg.seed))
    cfg.split_ratio = float(raw.get("split_ratio", cfg.split_ratio))
    cfg.collinear_threshold = float(raw.get("collinear_threshold", cfg.collinear_threshold))
    cfg.models = list(raw.get("models", cfg.models))
    cfg.explainer = raw.get("explainer", cfg.explainer)
    cfg.threshold = float(raw.get("threshold", cfg.threshold))
    cfg.background_size = int(raw.get("background_size", cfg.background_size))
    cfg.perturb = dict(raw.get("perturb", {}))
    sc = raw.get("scorecard", {})
    cfg.scorecard_weights = dict(sc.get("weights", cfg.scorecard_weights))
    cfg.scorecard_global_sample = int(sc.get("global_sample", cfg.scorecard_global_sample))
    cfg.scorecard_local_instances = int(sc.get("local_instances", cfg.scorecard_local_instances))
    cfg.scorecard_consistency_instances = int(
        sc.get("consistency_instances", cfg.scorecard_consistency_instances)
    )
    cfg.scorecard_consistency_repeats = int(
        sc.get("consistency_repeats", cfg.scorecard_consistency_repeats)
    )
    cfg.train = dict(raw.get("train", {}))

    if args is not None:
        if getattr(args, "seed", None) is not None:
            cfg.seed = args.seed
        if getattr(args, "out", None) is not None:
            cfg.out_dir = Path(args.out)
        if getattr(args, "threshold", None) is not None:
            cfg.threshold = args.threshold
        if getattr(args, "model", None):
            cfg.models = list(args.model)
    for kind in cfg.models:
        if kind not in MODEL_KINDS:
            raise UsageError(f"unknown model kind {kind!r} (choose from {', '.join(MODEL_KINDS)})")
    if cfg.explainer not in ("lime", "kernel-shap", "exact-shapley"):
        raise UsageError(f"unknown explainer {cfg.explainer!r}")
    if not cfg.schema_file.exists():
        raise UsageError(f"schema file not found: {cfg.schema_file}")
    if not cfg.data_csv.exists():
        raise UsageError(f"data file not found: {cfg.data_csv}")
    for p in cfg.macro_csvs:
        if not p.exists():
            raise UsageError(f"macro file not found: {p}")
    return cfg


@contextmanager
def output_lock(out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    lock = out_dir / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise RuntimeError(
            f"output directory {out_dir} is locked by another command "
            f"(remove {lock} if stale)"
        ) from None
    try:
        os.write(fd, f"{os.getpid()}\n".encode())
        os.close(fd)
        yield
    finally:
        lock.unlink(missing_ok=True)


def _train_config(cfg: RunConfig) -> TrainConfig:
    allowed = {f for f in TrainConfig.__dataclass_fields__}
    unknown = set(cfg.train) - allowed
    if unknown:
        raise UsageError(f"unknown train config key(s): {sorted(unknown)}")
    return TrainConfig(seed=cfg.seed, **cfg.train)


def _perturb_config(cfg: RunConfig) -> PerturbConfig:
    allowed = {"sample_count", "kernel_width", "ridge_lambda", "top_k"}
    unknown = set(cfg.perturb) - allowed
    if unknown:
        raise UsageError(f"unknown perturb config key(s): {sorted(unknown)}")
    return PerturbConfig(seed=cfg.seed, **cfg.perturb)


def _load_prepared(cfg: RunConfig):
    try:
        return ingest.read_prepared(cfg.out_dir / "prepared")
    except FileNotFoundError:
        raise RuntimeError(
            f"no prepared matrices under {cfg.out_dir / 'prepared'}; run `prepare` first"
        ) from None


def _model_path(cfg: RunConfig, kind: str) -> Path:
    return cfg.out_dir / "models" / f"{kind}.model.json"


def _load_trained(cfg: RunConfig, kind: str):
    path = _model_path(cfg, kind)
    if not path.exists():
        raise RuntimeError(f"model file not found: {path}; run `train` first")
    return load_model(path)


def _explainer(cfg: RunConfig, train_matrix) -> Explainer:
    background = sample_background(train_matrix, size=cfg.background_size, seed=cfg.seed)
    return Explainer(method=cfg.explainer, background=background, config=_perturb_config(cfg))


def cmd_prepare(args) -> int:
    cfg = load_run_config(args.config, args)
    schema = ingest.load_schema(cfg.schema_file)
    table = ingest.load_csv(cfg.data_csv, schema)
    macro = [ingest.load_macro_csv(p) for p in cfg.macro_csvs]
    with output_lock(cfg.out_dir):
        prepared = ingest.prepare_dataset(
            table, macro, schema,
            ratio=cfg.split_ratio, seed=cfg.seed,
            collinear_threshold=cfg.collinear_threshold,
        )
        ingest.write_prepared(prepared.split, prepared.meta, cfg.out_dir / "prepared")
    meta = prepared.meta
    print(f"rows: {meta['rows_raw']} raw -> {meta['rows_kept']} kept "
          f"({meta['rows_dropped_macro']} macro drops, "
          f"{sum(meta['rows_dropped_status'].values())} status drops)")
    print(f"columns: {len(prepared.split.train.column_names)} "
          f"({len(meta['columns_dropped_zero_variance'])} zero-variance dropped, "
          f"{len(meta['columns_dropped_collinear'])} pruned)")
    print(f"split: {meta['split']['train_rows']} train / {meta['split']['test_rows']} test, "
          f"default rate {meta['default_rate']:.3f}")
    print(f"wrote {cfg.out_dir / 'prepared'}")
    return 0


def cmd_train(args) -> int:
    cfg = load_run_config(args.config, args)
    pair, _ = _load_prepared(cfg)
    train_cfg = _train_config(cfg)
    with output_lock(cfg.out_dir):
        (cfg.out_dir / "models").mkdir(parents=True, exist_ok=True)
        (cfg.out_dir / "reports").mkdir(parents=True, exist_ok=True)
        reports = []
        failures = []
        for kind in cfg.models:
            try:
                model = TRAINERS[kind](pair.train, train_cfg)
                save_model(model, _model_path(cfg, kind))
                report = evaluate_model(model, pair.test, cfg.threshold)
                emit_report(report, cfg.out_dir / "reports" / f"eval_{kind}.json")
                reports.append(report)
                print(f"trained {kind}: {model.parameter_count} parameters, "
                      f"test AUC {report.auc:.4f}")
            except Exception as exc:  # keep going; a failed model must not stop the rest
                failures.append((kind, str(exc)))
                print(f"error: {kind}: {exc}", file=sys.stderr)
        if reports:
            table = comparison_table(reports)
            (cfg.out_dir / "reports" / "comparison.txt").write_text(table, encoding="utf-8")
            emit_report(sorted(reports, key=lambda r: (-r.auc, r.model_kind)),
                        cfg.out_dir / "reports" / "comparison.json")
            print(table, end="")
    if failures:
        raise RuntimeError(
            "training failed for " + ", ".join(kind for kind, _ in failures)
        )
    return 0


def cmd_evaluate(args) -> int:
    cfg = load_run_config(args.config, args)
    pair, _ = _load_prepared(cfg)
    kinds = cfg.models
    reports = []
    with output_lock(cfg.out_dir):
        (cfg.out_dir / "reports").mkdir(parents=True, exist_ok=True)
        for kind in kinds:
            model = _load_trained(cfg, kind)
            report = evaluate_model(model, pair.test, cfg.threshold)
            emit_report(report, cfg.out_dir / "reports" / f"eval_{kind}.json")
            reports.append(report)
        table = comparison_table(reports)
        (cfg.out_dir / "reports" / "comparison.txt").write_text(table, encoding="utf-8")
        emit_report(sorted(reports, key=lambda r: (-r.auc, r.model_kind)),
                    cfg.out_dir / "reports" / "comparison.json")
    print(table, end="")
    return 0


def cmd_explain(args) -> int:
    cfg = load_run_config(args.config, args)
    pair, _ = _load_prepared(cfg)
    kind = args.model[0] if args.model else cfg.models[0]
    model = _load_trained(cfg, kind)
    row = args.row
    if not 0 <= row < pair.test.n_rows:
        raise RuntimeError(f"row index {row} out of range (test split has {pair.test.n_rows} rows)")
    explainer = _explainer(cfg, pair.train)
    ids = pair.test.row_ids or tuple(str(i) for i in range(pair.test.n_rows))
    explanation = explainer.explain(
        model, pair.test.values[row], instance_ref=f"test row {row} (id {ids[row]})"
    )
    notice = build_adverse_action(explanation, pair.test, row, cfg.threshold, kind)
    with output_lock(cfg.out_dir):
        outdir = cfg.out_dir / "explanations"
        outdir.mkdir(parents=True, exist_ok=True)
        emit_report(explanation, outdir / f"row{row}_{cfg.explainer}_{kind}.json")
        emit_report(notice, outdir / f"row{row}_notice_{kind}.json")
        (outdir / f"row{row}_notice_{kind}.txt").write_text(
            notice_text(notice), encoding="utf-8"
        )
    print(f"instance {ids[row]} ({kind}): p(default) = {explanation.prediction:.4f} "
          f"-> {notice.decision.upper()}")
    for name, weight in explanation.attributions[: explanation.top_k]:
        print(f"  {name}: {weight:+.4f}")
    print(f"wrote {cfg.out_dir / 'explanations'}")
    return 0


def cmd_scorecard(args) -> int:
    cfg = load_run_config(args.config, args)
    pair, _ = _load_prepared(cfg)
    explainer = _explainer(cfg, pair.train)
    train_sample = pair.train.values[: cfg.scorecard_global_sample]
    local_instances = pair.test.values[: cfg.scorecard_local_instances]
    consistency_instances = pair.test.values[: cfg.scorecard_consistency_instances]
    cards = []
    with output_lock(cfg.out_dir):
        outdir = cfg.out_dir / "scorecard"
        outdir.mkdir(parents=True, exist_ok=True)
        for kind in cfg.models:
            model = _load_trained(cfg, kind)
            card = build_scorecard(
                model, train_sample, local_instances, explainer,
                repeats=cfg.scorecard_consistency_repeats,
                weights=cfg.scorecard_weights,
                consistency_instances=consistency_instances,
            )
            emit_report(card, outdir / f"scorecard_{kind}.json")
            cards.append(card)
            dims = ", ".join(f"{d}={card.scores[d].score:.2f}" for d in card.scores)
            print(f"{kind}: composite {card.composite_score:.3f} ({dims})")
        (outdir / "radar.svg").write_text(radar_chart_svg(cards), encoding="utf-8")
    print(f"wrote {cfg.out_dir / 'scorecard'}")
    return 0


def cmd_gen_data(args) -> int:
    synth_cfg = SynthConfig(
        n_rows=args.rows,
        default_rate=args.default_rate,
        signal=args.signal,
        seed=args.seed if args.seed is not None else 42,
    )
    out = Path(args.out)
    with output_lock(out):
        corpus = write_corpus(synth_cfg, out)
    print(f"wrote {out}/loans.csv ({synth_cfg.n_rows} rows, "
          f"default rate {corpus['truth']['default_rate']:.3f}), "
          f"macro CSVs, schema.json, config.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="creditxai",
        description="Explainable credit-default pipeline: preprocessing, three "
        "models, attribution, scorecards.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="run config JSON")
        p.add_argument("--seed", type=int, default=None, help="override root seed")
        p.add_argument("--out", default=None, help="override output directory")

    p = sub.add_parser("prepare", help="ingest the raw CSVs into train/test matrices")
    common(p)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="train the configured models and compare them")
    common(p)
    p.add_argument("--model", action="append", choices=MODEL_KINDS, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="re-evaluate saved models on the test split")
    common(p)
    p.add_argument("--model", action="append", choices=MODEL_KINDS, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("explain", help="explain one test instance and write the notice")
    common(p)
    p.add_argument("--row", type=int, default=0, help="test-split row index")
    p.add_argument("--model", action="append", choices=MODEL_KINDS, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("scorecard", help="five-dimension explainability scorecards + radar SVG")
    common(p)
    p.add_argument("--model", action="append", choices=MODEL_KINDS, default=None)
    p.set_defaults(func=cmd_scorecard)

    p = sub.add_parser("gen-data", help="generate the bundled synthetic corpus")
    p.add_argument("--out", required=True, help="corpus output directory")
    p.add_argument("--rows", type=int, default=5000)
    p.add_argument("--default-rate", type=float, default=0.25)
    p.add_argument("--signal", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_gen_data)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
