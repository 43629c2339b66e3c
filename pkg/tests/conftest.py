"""Shared fixtures: the bundled corpus, prepared splits, and small trained models.

Also collects acceptance-criterion outcomes so the run ends with one
PASS/FAIL line per criterion.
"""

from __future__ import annotations

import numpy as np
import pytest

from creditxai import ingest
from creditxai.explain import Background
from creditxai.models import TrainConfig, train_forest, train_logistic, train_mlp
from creditxai.synth import SynthConfig, write_corpus

ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


def record_acceptance(number: int, name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((number, name, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {number:2d} {status}  {name}: {detail}")


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """The bundled synthetic corpus: 5000 rows, seed 42."""
    out = tmp_path_factory.mktemp("corpus")
    write_corpus(SynthConfig(n_rows=5000, seed=42), out)
    return out


@pytest.fixture(scope="session")
def prepared(corpus_dir):
    schema = ingest.load_schema(corpus_dir / "schema.json")
    table = ingest.load_csv(corpus_dir / "loans.csv", schema)
    macro = [
        ingest.load_macro_csv(corpus_dir / f"{name}.csv")
        for name in ("GDP", "UnemploymentRate", "HPI")
    ]
    return ingest.prepare_dataset(table, macro, schema, ratio=0.8, seed=42)


EIGHT_FEATURES = (
    "DebtToIncomeRatio",
    "BankcardUtilization",
    "CreditScoreRangeLower",
    "BorrowerRate",
    "StatedMonthlyIncome",
    "UnemploymentRate",
    "CurrentDelinquencies",
    "MonthsSinceFirstRecordedCreditLine",
)


@pytest.fixture(scope="session")
def split8(prepared):
    """8-feature restriction of the corpus for exact-Shapley-scale checks."""
    train = prepared.split.train.select_columns(EIGHT_FEATURES).select_rows(np.arange(1500))
    test = prepared.split.test.select_columns(EIGHT_FEATURES).select_rows(np.arange(400))
    return train, test


@pytest.fixture(scope="session")
def models8(split8):
    train, _ = split8
    cfg = TrainConfig(seed=42)
    return {
        "logistic": train_logistic(train, cfg),
        "forest": train_forest(train, cfg),
        "mlp": train_mlp(train, cfg),
    }


@pytest.fixture(scope="session")
def background8(split8):
    train, _ = split8
    rng = np.random.default_rng(7)
    idx = rng.choice(train.n_rows, size=20, replace=False)
    return Background(train.values[idx], train.column_names)
