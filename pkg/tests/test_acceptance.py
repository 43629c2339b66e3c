"""Acceptance suite: one test per criterion, each records a PASS/FAIL line.

Criteria that pin a tolerance assert it exactly as stated; runtime budgets
use wall-clock time on this machine.
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import record_acceptance

from creditxai import ingest
from creditxai.cli import main
from creditxai.explain import (
    Background,
    Explainer,
    PerturbConfig,
    exact_shapley,
    kernel_shap_explain,
    lime_explain,
)
from creditxai.metrics import roc_auc
from creditxai.models import (
    TrainConfig,
    init_params,
    loss_and_grads,
    predict_proba,
    train_forest,
    train_logistic,
    train_mlp,
)
from creditxai.scorecard import (
    DEFAULT_WEIGHTS,
    DIMENSIONS,
    DimensionScore,
    composite,
    score_consistency,
    score_inherent,
)


@pytest.fixture(scope="session")
def full_run(corpus_dir):
    """Timed prepare+train+evaluate over the bundled 5000-row corpus."""
    t0 = time.monotonic()
    schema = ingest.load_schema(corpus_dir / "schema.json")
    table = ingest.load_csv(corpus_dir / "loans.csv", schema)
    macro = [
        ingest.load_macro_csv(corpus_dir / f"{name}.csv")
        for name in ("GDP", "UnemploymentRate", "HPI")
    ]
    prep = ingest.prepare_dataset(table, macro, schema, ratio=0.8, seed=42)
    pair = prep.split
    cfg = TrainConfig(seed=42)
    models = {
        "logistic": train_logistic(pair.train, cfg),
        "forest": train_forest(pair.train, cfg),
        "mlp": train_mlp(pair.train, cfg),
    }
    aucs = {
        kind: roc_auc(pair.test.target, predict_proba(model, pair.test))
        for kind, model in models.items()
    }
    elapsed = time.monotonic() - t0
    return {"models": models, "aucs": aucs, "elapsed": elapsed, "split": pair}


class LinearProb:
    kind = "linear-test"

    def __init__(self, w, b=0.5, names=None):
        self.w = np.asarray(w, dtype=float)
        self.b = b
        self.feature_names = tuple(names or [f"f{i}" for i in range(len(self.w))])

    def predict_proba(self, X):
        return np.clip(np.asarray(X, dtype=float) @ self.w + self.b, 0.0, 1.0)


def test_criterion_1_kernel_shap_matches_exact_oracle(models8, split8, background8):
    _, test8 = split8
    rng = np.random.default_rng(101)
    rows = rng.choice(test8.n_rows, size=20, replace=False)
    t0 = time.monotonic()
    worst = 0.0
    for model in models8.values():
        for r in rows:
            x = test8.values[r]
            ks = kernel_shap_explain(model, x, background8, PerturbConfig(seed=1))
            ex = exact_shapley(model, x, background8)
            ks_d, ex_d = ks.as_dict(), ex.as_dict()
            worst = max(worst, max(abs(ks_d[n] - ex_d[n]) for n in ks_d))
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-6 and elapsed <= 60.0
    record_acceptance(
        1, "kernel SHAP (full enumeration) vs exact Shapley oracle", ok,
        f"max |phi diff| {worst:.2e} over 20 instances x 3 models, {elapsed:.1f}s",
    )
    assert worst <= 1e-6
    assert elapsed <= 60.0


def test_criterion_2_additivity(models8, split8, background8):
    _, test8 = split8
    rng = np.random.default_rng(202)
    rows = rng.choice(test8.n_rows, size=100, replace=False)
    worst = 0.0
    for model in models8.values():
        for r in rows:
            e = exact_shapley(model, test8.values[r], background8)
            worst = max(worst, e.additivity_residual)
    ok = worst <= 1e-6
    record_acceptance(
        2, "exact Shapley additivity (base + sum(phi) = prediction)", ok,
        f"max residual {worst:.2e} over 100 instances x 3 model kinds",
    )
    assert ok


def test_criterion_3_dummy_and_symmetry_axioms():
    rng = np.random.default_rng(303)
    names = ("a", "b", "dummy", "c")

    class PartlyBlind:
        feature_names = names
        kind = "constructed"

        def predict_proba(self, X):
            X = np.asarray(X)
            z = 0.6 * X[:, 0] - 0.4 * X[:, 1] * X[:, 3] + 0.2 * np.tanh(X[:, 3])
            return 1.0 / (1.0 + np.exp(-z))

    bg = Background(rng.standard_normal((15, 4)) * 0.5, names)
    dummy_worst = 0.0
    for _ in range(10):
        e = exact_shapley(PartlyBlind(), rng.standard_normal(4), bg)
        dummy_worst = max(dummy_worst, abs(e.weight("dummy")))

    class Symmetric:
        feature_names = ("p", "q", "r")
        kind = "constructed"

        def predict_proba(self, X):
            X = np.asarray(X)
            return 1.0 / (1.0 + np.exp(-(X[:, 0] + X[:, 1] - 0.3 * X[:, 2])))

    rows = rng.standard_normal((12, 3))
    rows[:, 1] = rows[:, 0]
    bg_sym = Background(rows, ("p", "q", "r"))
    sym_worst = 0.0
    for _ in range(10):
        x = rng.standard_normal(3)
        x[1] = x[0]
        e = exact_shapley(Symmetric(), x, bg_sym)
        sym_worst = max(sym_worst, abs(e.weight("p") - e.weight("q")))

    ok = dummy_worst <= 1e-6 and sym_worst <= 1e-9
    record_acceptance(
        3, "dummy and symmetry axioms (exact oracle)", ok,
        f"max dummy |phi| {dummy_worst:.2e}, max symmetric gap {sym_worst:.2e}",
    )
    assert dummy_worst <= 1e-6
    assert sym_worst <= 1e-9


def test_criterion_4_lime_fidelity_on_linear_model():
    m = 6
    model = LinearProb([0.1, 0.0, 0.0, 0.0, 0.0, 0.0])
    rng = np.random.default_rng(404)
    bg = Background(rng.standard_normal((30, m)) * 0.3, model.feature_names)
    cfg = PerturbConfig(ridge_lambda=0.0, seed=404)
    fidelities, slope_errs = [], []
    for _ in range(20):
        x = rng.normal(0.0, 0.25, m)
        e = lime_explain(model, x, bg, cfg)
        fidelities.append(e.fidelity)
        slope_errs.append(abs(e.weight("f0") - 0.1) / 0.1)
    mean_r2 = float(np.mean(fidelities))
    worst_slope = max(slope_errs)
    ok = mean_r2 >= 0.999 and worst_slope <= 0.05
    record_acceptance(
        4, "LIME fidelity and slope recovery on a linear model", ok,
        f"mean weighted R^2 {mean_r2:.6f}, worst slope error {worst_slope:.2%} over 20 instances",
    )
    assert mean_r2 >= 0.999
    assert worst_slope <= 0.05


def test_criterion_5_auc_equals_concordance_oracle():
    def concordance(y, s):
        pos, neg = s[y == 1], s[y == 0]
        total = 0.0
        for a in pos:
            total += np.sum(a > neg) + 0.5 * np.sum(a == neg)
        return total / (len(pos) * len(neg))

    rng = np.random.default_rng(505)
    worst = 0.0
    for trial in range(50):
        y = rng.integers(0, 2, 200)
        if y.sum() in (0, 200):
            y[0] = 1 - y[0]
        s = rng.random(200)
        if trial % 2 == 0:
            s = np.round(s, 1)  # tie-heavy
        worst = max(worst, abs(roc_auc(y, s) - concordance(y, s)))
    ok = worst <= 1e-12
    record_acceptance(
        5, "trapezoidal AUC equals pairwise concordance", ok,
        f"max |difference| {worst:.2e} over 50 sets of n=200 incl. tie-heavy",
    )
    assert ok


def _max_relative_gradient_error(weights, biases, X, y, eps=1e-5):
    _, gw, gb = loss_and_grads(weights, biases, X, y)
    worst = 0.0
    for params, grads in ((weights, gw), (biases, gb)):
        for P, G in zip(params, grads):
            flat, gflat = P.ravel(), G.ravel()
            for i in range(flat.size):
                orig = flat[i]
                flat[i] = orig + eps
                up, _, _ = loss_and_grads(weights, biases, X, y)
                flat[i] = orig - eps
                down, _, _ = loss_and_grads(weights, biases, X, y)
                flat[i] = orig
                numeric = (up - down) / (2 * eps)
                worst = max(
                    worst, abs(numeric - gflat[i]) / max(abs(numeric), abs(gflat[i]), 1e-8)
                )
    return worst


def test_criterion_6_mlp_gradient_check(split8):
    train8, _ = split8
    m = train8.n_columns
    rng = np.random.default_rng(606)
    batch_rows = rng.choice(train8.n_rows, size=5, replace=False)
    X, y = train8.values[batch_rows], train8.target[batch_rows].astype(float)

    weights, biases = init_params(m, seed=606)
    err_init = _max_relative_gradient_error([W.copy() for W in weights],
                                            [b.copy() for b in biases], X, y)

    trained = train_mlp(
        train8.select_rows(np.arange(600)),
        TrainConfig(seed=606, max_epochs=10, patience=10),
    )
    err_trained = _max_relative_gradient_error(
        [W.copy() for W in trained.weights], [b.copy() for b in trained.biases], X, y
    )
    ok = err_init <= 1e-4 and err_trained <= 1e-4
    record_acceptance(
        6, "MLP backprop vs central finite differences", ok,
        f"max relative error {err_init:.2e} at init, {err_trained:.2e} after 10 epochs",
    )
    assert err_init <= 1e-4
    assert err_trained <= 1e-4


def test_criterion_7_performance_hierarchy(full_run):
    aucs, elapsed = full_run["aucs"], full_run["elapsed"]
    hierarchy_ok = (
        aucs["mlp"] >= aucs["forest"] - 0.01 and aucs["forest"] >= aucs["logistic"] + 0.02
    )
    ok = hierarchy_ok and elapsed <= 180.0
    record_acceptance(
        7, "directional AUC hierarchy on the bundled corpus", ok,
        f"logistic {aucs['logistic']:.4f}, forest {aucs['forest']:.4f}, "
        f"mlp {aucs['mlp']:.4f}; prepare+train {elapsed:.0f}s",
    )
    assert aucs["forest"] >= aucs["logistic"] + 0.02
    assert aucs["mlp"] >= aucs["forest"] - 0.01
    assert elapsed <= 180.0


def _tree_bytes(root: Path) -> dict:
    return {
        p.relative_to(root).as_posix(): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


def test_criterion_8_cli_determinism(tmp_path):
    corpus = tmp_path / "corpus"
    assert main(["gen-data", "--out", str(corpus), "--rows", "600", "--seed", "11"]) == 0
    config = {
        "config_version": 1,
        "data_csv": "loans.csv",
        "macro_csvs": ["GDP.csv", "UnemploymentRate.csv", "HPI.csv"],
        "schema_file": "schema.json",
        "out_dir": "out",
        "seed": 11,
        "perturb": {"sample_count": 800},
        "scorecard": {
            "global_sample": 8,
            "local_instances": 20,
            "consistency_instances": 3,
            "consistency_repeats": 2,
        },
        "train": {"max_epochs": 25},
    }
    cfg_path = corpus / "config.json"
    cfg_path.write_text(json.dumps(config, indent=2), encoding="utf-8")

    trees = []
    for run in ("run_a", "run_b"):
        out = tmp_path / run
        for cmd in (
            ["prepare", "--config", str(cfg_path), "--out", str(out)],
            ["train", "--config", str(cfg_path), "--out", str(out)],
            ["explain", "--config", str(cfg_path), "--out", str(out),
             "--row", "0", "--model", "mlp"],
            ["scorecard", "--config", str(cfg_path), "--out", str(out)],
        ):
            assert main(cmd) == 0, f"command failed: {cmd[0]}"
        trees.append(_tree_bytes(out))
    same_names = set(trees[0]) == set(trees[1])
    diffs = [k for k in trees[0] if same_names and trees[0][k] != trees[1][k]]
    ok = same_names and not diffs
    record_acceptance(
        8, "byte-identical output trees across two full CLI runs", ok,
        f"{len(trees[0])} files compared" + ("" if ok else f", differing: {diffs[:3]}"),
    )
    assert same_names
    assert diffs == []


def test_criterion_9_scorecard_sanity():
    inherent = {kind: score_inherent(kind).score for kind in ("logistic", "forest", "mlp")}
    ordering_ok = inherent["logistic"] > inherent["forest"] > inherent["mlp"]

    model = LinearProb([0.1, 0.05, -0.03])
    rng = np.random.default_rng(909)
    bg = Background(rng.standard_normal((10, 3)) * 0.3, model.feature_names)
    explainer = Explainer("exact-shapley", bg, PerturbConfig(seed=909))
    consistency = score_consistency(
        model, rng.standard_normal((5, 3)) * 0.3, explainer, repeats=3
    ).score

    scores = {
        d: DimensionScore(dimension=d, score=v, evidence="", stats={})
        for d, v in zip(DIMENSIONS, [5.0, 5.0, 0.0, 5.0, 5.0])
    }
    hand_value = composite(scores, DEFAULT_WEIGHTS)

    ok = ordering_ok and consistency == 5.0 and hand_value == 3.5
    record_acceptance(
        9, "scorecard sanity (rubric order, deterministic consistency, composite)", ok,
        f"inherent {inherent}, consistency(exact) {consistency}, composite {hand_value}",
    )
    assert ordering_ok
    assert consistency == 5.0
    assert hand_value == 3.5


def test_criterion_10_lime_latency(full_run):
    pair = full_run["split"]
    forest = full_run["models"]["forest"]
    background = Background(
        pair.train.values[:100],
        pair.train.column_names,
        categorical_groups={},
    )
    cfg = PerturbConfig(sample_count=5000, seed=10)
    t0 = time.monotonic()
    e = lime_explain(forest, pair.test.values[0], background, cfg)
    elapsed = time.monotonic() - t0
    ok = elapsed <= 10.0 and len(e.attributions) == pair.test.n_columns
    record_acceptance(
        10, "single-instance LIME latency on the 100-tree forest", ok,
        f"{elapsed:.2f}s for 5000 perturbations at m={pair.test.n_columns}",
    )
    assert elapsed <= 10.0
