import numpy as np

from creditxai.ingest import load_csv, load_macro_csv, load_schema, map_status
from creditxai.synth import SynthConfig, generate_corpus, write_corpus


def test_deterministic_under_seed():
    a = generate_corpus(SynthConfig(n_rows=200, seed=9))
    b = generate_corpus(SynthConfig(n_rows=200, seed=9))
    assert a["rows"] == b["rows"]
    c = generate_corpus(SynthConfig(n_rows=200, seed=10))
    assert a["rows"] != c["rows"]


def test_default_rate_near_target():
    corpus = generate_corpus(SynthConfig(n_rows=4000, seed=1, default_rate=0.25))
    assert abs(corpus["truth"]["default_rate"] - 0.25) <= 0.03


def test_statuses_all_handled():
    corpus = generate_corpus(SynthConfig(n_rows=1000, seed=2))
    status_idx = corpus["header"].index("LoanStatus")
    for row in corpus["rows"]:
        status = row[status_idx]
        assert map_status(status) in (0, 1) or status == "Cancelled"


def test_written_corpus_loads(tmp_path):
    write_corpus(SynthConfig(n_rows=150, seed=3), tmp_path)
    schema = load_schema(tmp_path / "schema.json")
    table = load_csv(tmp_path / "loans.csv", schema)
    assert table.n_rows == 150
    assert schema.note  # reconstruction marker present
    for name in ("GDP", "UnemploymentRate", "HPI"):
        series = load_macro_csv(tmp_path / f"{name}.csv")
        assert len(series.months) == 120  # 2005-01 .. 2014-12


def test_gdp_forward_filled_quarterly(tmp_path):
    write_corpus(SynthConfig(n_rows=50, seed=4), tmp_path)
    gdp = load_macro_csv(tmp_path / "GDP.csv")
    values = np.array(gdp.values)
    # within each calendar quarter the monthly values repeat the release
    by_quarter = values[: 12 * 9].reshape(-1, 3)
    assert (by_quarter == by_quarter[:, :1]).all()


def test_missingness_present():
    corpus = generate_corpus(SynthConfig(n_rows=2000, seed=5))
    dti_idx = corpus["header"].index("DebtToIncomeRatio")
    emp_idx = corpus["header"].index("EmploymentStatus")
    dti_missing = sum(1 for r in corpus["rows"] if r[dti_idx] == "")
    emp_missing = sum(1 for r in corpus["rows"] if r[emp_idx] == "")
    assert dti_missing > 0
    assert emp_missing > 0
