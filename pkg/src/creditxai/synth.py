"""Synthetic loan corpus with the bundled schema.

The real marketplace CSV cannot be redistributed, so this generator emits a
stand-in with the same shape: borrower and loan attributes, credit metrics
including an internal score, date columns, a status column, and monthly
macro series files. Default probability mixes a linear risk index with
non-linear interactions (scaled by ``signal``) so model families separate
the way the real data separates them: trees and nets beat a linear fit.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .rng import STREAM_SYNTH, spawn_rng

FIRST_LOAN_MONTH = 2006 * 12 + 0  # 2006-01
N_LOAN_MONTHS = 96  # through 2013-12
SERIES_START = 2005 * 12 + 0
SERIES_END = 2014 * 12 + 11

EMPLOYMENT_LEVELS = ("Employed", "Self-employed", "Retired", "Not employed", "Other")
EMPLOYMENT_PROBS = (0.72, 0.10, 0.05, 0.06, 0.07)  # a further 2% become missing
LISTING_LEVELS = ("Debt Consolidation", "Home Improvement", "Business", "Auto", "Other")
LISTING_PROBS = (0.55, 0.12, 0.08, 0.10, 0.15)
OCCUPATION_LEVELS = (
    "Professional", "Computer Programmer", "Teacher", "Administrative",
    "Sales", "Skilled Labor", "Clerical", "Other",
)
OCCUPATION_PROBS = (0.18, 0.09, 0.08, 0.14, 0.12, 0.13, 0.10, 0.16)
TERM_LEVELS = ("12", "36", "60")
TERM_PROBS = (0.15, 0.60, 0.25)

STATUS_DEFAULT = ("Chargedoff", "Defaulted", "Past Due (>120 days)", "Past Due (61-90 days)")
STATUS_DEFAULT_PROBS = (0.55, 0.30, 0.08, 0.07)
STATUS_OK = ("Current", "Completed")
STATUS_OK_PROBS = (0.5, 0.5)
CANCELLED_FRACTION = 0.006

DTI_MISSING_FRACTION = 0.04
EMPLOYMENT_MISSING_FRACTION = 0.02


@dataclass(frozen=True)
class SynthConfig:
    n_rows: int = 5000
    default_rate: float = 0.25
    signal: float = 1.0
    seed: int = 42


def _month_str(index: int) -> str:
    return f"{index // 12:04d}-{index % 12 + 1:02d}"


def _date_str(index: int, day: int) -> str:
    return f"{_month_str(index)}-{day:02d}"


def _interp_series(anchors: list[tuple[int, float]], wiggle: float, rng) -> np.ndarray:
    months = np.arange(SERIES_START, SERIES_END + 1)
    xs = np.array([a[0] for a in anchors], dtype=np.float64)
    ys = np.array([a[1] for a in anchors], dtype=np.float64)
    base = np.interp(months, xs, ys)
    return base + wiggle * np.sin(np.arange(len(months)) * 0.7) + rng.normal(0, wiggle / 2, len(months))


def macro_series(seed: int) -> dict[str, np.ndarray]:
    """Monthly GDP / unemployment / HPI paths with a 2008-2009 downturn."""
    rng = spawn_rng(seed, STREAM_SYNTH, 1)
    y = lambda year, month: year * 12 + (month - 1)
    unemployment = _interp_series(
        [(y(2005, 1), 5.2), (y(2006, 10), 4.4), (y(2008, 4), 5.0), (y(2009, 10), 10.0),
         (y(2011, 6), 9.0), (y(2013, 12), 6.7), (y(2014, 12), 5.6)],
        wiggle=0.08, rng=rng,
    )
    gdp_quarterly = _interp_series(
        [(y(2005, 1), 14100.0), (y(2008, 6), 15000.0), (y(2009, 6), 14400.0),
         (y(2014, 12), 16800.0)],
        wiggle=18.0, rng=rng,
    )
    # quarterly releases forward-filled to months
    months = np.arange(SERIES_START, SERIES_END + 1)
    quarter_start = (months // 3) * 3
    gdp = gdp_quarterly[quarter_start - SERIES_START]
    hpi = _interp_series(
        [(y(2005, 1), 160.0), (y(2006, 7), 185.0), (y(2011, 3), 135.0), (y(2014, 12), 165.0)],
        wiggle=0.5, rng=rng,
    )
    return {"GDP": gdp, "UnemploymentRate": unemployment, "HPI": hpi}


def _calibrate_offset(raw: np.ndarray, rate: float) -> float:
    lo, hi = -30.0, 30.0
    for _ in range(80):
        mid = (lo + hi) / 2.0
        if float((1.0 / (1.0 + np.exp(-(raw + mid)))).mean()) > rate:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


def generate_corpus(cfg: SynthConfig) -> dict:
    """Loan rows (as text cells), macro series, schema dict, and truth stats."""
    n = cfg.n_rows
    rng = spawn_rng(cfg.seed, STREAM_SYNTH, 0)
    macro = macro_series(cfg.seed)
    months_axis = np.arange(SERIES_START, SERIES_END + 1)

    orig_month = FIRST_LOAN_MONTH + rng.integers(0, N_LOAN_MONTHS, size=n)
    orig_day = rng.integers(1, 29, size=n)
    unemp_at_orig = macro["UnemploymentRate"][orig_month - SERIES_START]

    q = rng.standard_normal(n)  # latent creditworthiness
    log_income = rng.normal(8.1, 0.55, n) + 0.12 * q
    income = np.round(np.exp(log_income), 2)
    dti = np.clip(rng.beta(2.0, 5.0, n) * 0.9 + 0.03 - 0.04 * q, 0.01, 1.2)
    amount = np.clip(np.round(np.exp(rng.normal(9.2, 0.7, n))), 1000, 35000)
    term = rng.choice(np.array([12, 36, 60]), size=n, p=TERM_PROBS)
    score_lower = np.clip(np.round((680 + 62 * q + rng.normal(0, 24, n)) / 20) * 20, 500, 880)
    prosper = np.clip(np.round(6 + 2.2 * q + rng.normal(0, 1.2, n)), 1, 11)
    util = np.clip(0.55 - 0.22 * q + rng.normal(0, 0.18, n), 0.0, 1.3)
    delinq = rng.poisson(np.exp(-0.9 * q - 0.25))
    inquiries = rng.poisson(np.exp(0.15 - 0.35 * q))
    open_lines = rng.poisson(8.0, n) + 1
    total_lines = open_lines + rng.poisson(14.0, n)
    revolving = np.round(np.exp(rng.normal(8.6, 1.0, n)), 2)
    available_credit = np.round(np.exp(rng.normal(8.9, 1.1, n) + 0.25 * q), 2)
    trades_clean = np.clip(np.round(0.92 + 0.05 * q + rng.normal(0, 0.06, n), 3), 0.0, 1.0)
    history_months = np.maximum(6, np.round(150 + 28 * q + rng.normal(0, 60, n))).astype(int)
    pulled_lag = rng.integers(0, 3, size=n)

    rate = np.clip(
        0.08 + 0.10 / (1.0 + np.exp(1.2 * q)) + 0.02 * (term == 60) + rng.normal(0, 0.018, n),
        0.04, 0.36,
    )
    monthly_rate = rate / 12.0
    payment = amount * monthly_rate / (1.0 - (1.0 + monthly_rate) ** (-term.astype(float)))
    payment = np.round(payment + rng.normal(0, 12.0, n), 2)

    employment = rng.choice(np.array(EMPLOYMENT_LEVELS), size=n, p=EMPLOYMENT_PROBS)
    employment_missing = rng.random(n) < EMPLOYMENT_MISSING_FRACTION
    homeowner = rng.random(n) < (0.5 + 0.15 * np.tanh(q))
    verifiable = rng.random(n) < 0.92
    listing = rng.choice(np.array(LISTING_LEVELS), size=n, p=LISTING_PROBS)
    occupation = rng.choice(np.array(OCCUPATION_LEVELS), size=n, p=OCCUPATION_PROBS)
    dti_missing = rng.random(n) < DTI_MISSING_FRACTION

    # risk index built from OBSERVED columns so every model sees the same
    # information: a linear core the baseline captures ...
    dti_c = (dti - 0.30) / 0.15
    util_c = (util - 0.55) / 0.20
    rate_c = (rate - 0.15) / 0.06
    income_c = (log_income - 8.1) / 0.55
    unemp_c = (unemp_at_orig - 6.5) / 1.6
    hist_c = (history_months - 150.0) / 60.0
    score_c = (score_lower - 680.0) / 62.0
    unemployed = (employment == "Not employed") & ~employment_missing
    occupation_effect = np.select(
        [occupation == "Professional", occupation == "Computer Programmer",
         occupation == "Skilled Labor", occupation == "Sales"],
        [-0.10, -0.08, 0.06, 0.08], default=0.0,
    )
    listing_effect = np.select(
        [listing == "Business", listing == "Debt Consolidation", listing == "Auto"],
        [0.15, 0.06, -0.05], default=0.0,
    )
    linear = (
        0.35 * dti_c
        - 0.35 * score_c
        + 0.30 * rate_c
        - 0.15 * income_c
        + 0.30 * unemp_c
        - 0.10 * hist_c
        + 0.25 * np.minimum(delinq, 3)
        + 0.12 * np.minimum(inquiries, 4)
        - 0.08 * (prosper - 6.0) / 2.2
        + 0.06 * (open_lines - 9.0) / 3.0
        - 0.08 * (trades_clean - 0.92) / 0.06
        + 0.35 * unemployed
        + 0.10 * (term == 60)
        - 0.10 * homeowner
        - 0.08 * verifiable
        + occupation_effect
        + listing_effect
    )
    # ... dominated by a smooth interaction of two oblique risk directions
    # plus a non-monotone income wave: products of centered quantities leave
    # marginal trends flat (invisible to a linear fit), and the rotated
    # geometry is expensive for axis-aligned splits
    o1 = 0.70 * dti_c + 0.70 * util_c - 0.40 * income_c
    o2 = -0.75 * score_c + 0.50 * rate_c + 0.45 * unemp_c
    nonlinear = (
        2.60 * np.tanh(0.8 * o1) * np.tanh(0.8 * o2)
        + 1.80 * np.sin(1.3 * income_c)
    )
    raw = 1.6 * (linear + cfg.signal * nonlinear)
    logit = raw + _calibrate_offset(raw, cfg.default_rate)
    p_default = 1.0 / (1.0 + np.exp(-logit))
    defaulted = rng.random(n) < p_default

    status = np.where(
        defaulted,
        rng.choice(np.array(STATUS_DEFAULT), size=n, p=STATUS_DEFAULT_PROBS),
        rng.choice(np.array(STATUS_OK), size=n, p=STATUS_OK_PROBS),
    )
    cancelled = rng.random(n) < CANCELLED_FRACTION
    status = np.where(cancelled, "Cancelled", status)

    header = [
        "ListingNumber", "LoanStatus", "LoanOriginationDate", "FirstRecordedCreditLine",
        "DateCreditPulled", "StatedMonthlyIncome", "DebtToIncomeRatio", "LoanOriginalAmount",
        "MonthlyLoanPayment", "BorrowerRate", "CreditScoreRangeLower", "CreditScoreRangeUpper",
        "ProsperScore", "BankcardUtilization", "OpenCreditLines", "CurrentDelinquencies",
        "InquiriesLast6Months", "TotalCreditLinespast7years", "RevolvingCreditBalance",
        "AvailableBankcardCredit", "TradesNeverDelinquentPercentage", "EmploymentStatus",
        "IsBorrowerHomeowner", "IncomeVerifiable", "ListingCategory", "Occupation", "Term",
    ]
    rows = []
    for i in range(n):
        rows.append([
            f"P{i + 1:06d}",
            str(status[i]),
            _date_str(int(orig_month[i]), int(orig_day[i])),
            _date_str(int(orig_month[i]) - int(history_months[i]), 1),
            _date_str(int(orig_month[i]) - int(pulled_lag[i]), 15),
            repr(float(income[i])),
            "" if dti_missing[i] else repr(round(float(dti[i]), 4)),
            repr(float(amount[i])),
            repr(float(payment[i])),
            repr(round(float(rate[i]), 5)),
            repr(float(score_lower[i])),
            repr(float(score_lower[i] + 19.0)),
            repr(float(prosper[i])),
            repr(round(float(util[i]), 4)),
            str(int(open_lines[i])),
            str(int(delinq[i])),
            str(int(inquiries[i])),
            str(int(total_lines[i])),
            repr(float(revolving[i])),
            repr(float(available_credit[i])),
            repr(float(trades_clean[i])),
            "" if employment_missing[i] else str(employment[i]),
            "True" if homeowner[i] else "False",
            "True" if verifiable[i] else "False",
            str(listing[i]),
            str(occupation[i]),
            str(term[i]),
        ])

    schema = {
        "schema_version": 1,
        "note": (
            "Reconstructed column list for the synthetic corpus; the source "
            "marketplace dataset's exact final feature list is not public, so "
            "this schema is this project's reconstruction of its categories."
        ),
        "status_column": "LoanStatus",
        "origination_date_column": "LoanOriginationDate",
        "columns": {
            "ListingNumber": "id",
            "LoanStatus": "target-source",
            "LoanOriginationDate": "date",
            "FirstRecordedCreditLine": "date",
            "DateCreditPulled": "date",
            "StatedMonthlyIncome": "continuous",
            "DebtToIncomeRatio": "continuous",
            "LoanOriginalAmount": "continuous",
            "MonthlyLoanPayment": "continuous",
            "BorrowerRate": "continuous",
            "CreditScoreRangeLower": "continuous",
            "CreditScoreRangeUpper": "continuous",
            "ProsperScore": "continuous",
            "BankcardUtilization": "continuous",
            "OpenCreditLines": "continuous",
            "CurrentDelinquencies": "continuous",
            "InquiriesLast6Months": "continuous",
            "TotalCreditLinespast7years": "continuous",
            "RevolvingCreditBalance": "continuous",
            "AvailableBankcardCredit": "continuous",
            "TradesNeverDelinquentPercentage": "continuous",
            "EmploymentStatus": "categorical",
            "IsBorrowerHomeowner": "categorical",
            "IncomeVerifiable": "categorical",
            "ListingCategory": "categorical",
            "Occupation": "categorical",
            "Term": "categorical",
        },
    }
    return {
        "header": header,
        "rows": rows,
        "macro": macro,
        "schema": schema,
        "truth": {
            "default_rate": float(defaulted.mean()),
            "bayes_p": p_default,
        },
    }


def write_corpus(cfg: SynthConfig, outdir: str | Path) -> dict:
    """Write loans.csv, the macro CSVs, schema.json, and a ready run config."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus = generate_corpus(cfg)
    with open(outdir / "loans.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(corpus["header"])
        writer.writerows(corpus["rows"])
    months = np.arange(SERIES_START, SERIES_END + 1)
    for name, values in corpus["macro"].items():
        with open(outdir / f"{name}.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["month", "value"])
            for m, v in zip(months, values):
                writer.writerow([_month_str(int(m)), repr(round(float(v), 4))])
    with open(outdir / "schema.json", "w", encoding="utf-8") as fh:
        json.dump(corpus["schema"], fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")
    run_config = {
        "config_version": 1,
        "data_csv": "loans.csv",
        "macro_csvs": ["GDP.csv", "UnemploymentRate.csv", "HPI.csv"],
        "schema_file": "schema.json",
        "out_dir": "out",
        "seed": cfg.seed,
    }
    with open(outdir / "config.json", "w", encoding="utf-8") as fh:
        json.dump(run_config, fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")
    return corpus
