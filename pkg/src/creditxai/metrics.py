"""Classification evaluation: confusion counts, per-class P/R/F1, ROC AUC.

The AUC is the trapezoidal area over the unique-score threshold sweep,
accumulated in integer count units and divided once at the end, so it equals
the pairwise concordance probability (Mann-Whitney, ties at half credit) to
machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models.base import ProbClassifier, predict_proba as predict_matrix


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class PrecisionRecallF1:
    precision: float
    recall: float
    f1: float
    degenerate: bool  # some denominator was zero and the convention 0 applied


@dataclass(frozen=True)
class EvalReport:
    model_kind: str
    n: int
    threshold: float
    confusion: ConfusionCounts
    per_class: dict[int, PrecisionRecallF1]
    auc: float


def confusion(y_true, scores, threshold: float) -> ConfusionCounts:
    """Counts at the operating point; a score exactly at threshold predicts 1."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    if y_true.shape != scores.shape:
        raise ValueError(f"length mismatch: {y_true.shape} labels vs {scores.shape} scores")
    if scores.size and (scores.min() < 0.0 or scores.max() > 1.0):
        raise ValueError("scores must lie in [0, 1]")
    pred = scores >= threshold
    pos = y_true == 1
    return ConfusionCounts(
        tp=int(np.sum(pred & pos)),
        fp=int(np.sum(pred & ~pos)),
        tn=int(np.sum(~pred & ~pos)),
        fn=int(np.sum(~pred & pos)),
    )


def precision_recall_f1(counts: ConfusionCounts, positive_class: int = 1) -> PrecisionRecallF1:
    """P, R, F1 for the chosen positive class; zero denominators yield 0, flagged."""
    if positive_class == 1:
        tp, fp, fn = counts.tp, counts.fp, counts.fn
    else:
        tp, fp, fn = counts.tn, counts.fn, counts.fp
    degenerate = False
    if tp + fp == 0:
        precision, degenerate = 0.0, True
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        recall, degenerate = 0.0, True
    else:
        recall = tp / (tp + fn)
    if precision + recall == 0.0:
        f1, degenerate = 0.0, True
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return PrecisionRecallF1(precision, recall, f1, degenerate)


def roc_auc(y_true, scores) -> float:
    """Trapezoidal AUC over the unique-score sweep; ties get half concordance."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    if y_true.shape != scores.shape:
        raise ValueError("length mismatch between labels and scores")
    n_pos = int(np.sum(y_true == 1))
    n_neg = int(np.sum(y_true == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_auc needs both classes present")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_pos = (y_true[order] == 1).astype(np.int64)
    # last index of each tie group in descending order
    boundaries = np.flatnonzero(
        np.concatenate([sorted_scores[1:] != sorted_scores[:-1], [True]])
    )
    tp = np.concatenate([[0], np.cumsum(sorted_pos)[boundaries]])
    fp = np.concatenate([[0], (boundaries + 1) - np.cumsum(sorted_pos)[boundaries]])
    # trapezoid area in count units: sum (dFP) * (TP_i + TP_{i-1}) / 2
    area2 = float(np.sum((fp[1:] - fp[:-1]) * (tp[1:] + tp[:-1])))
    return area2 / (2.0 * n_pos * n_neg)


def evaluate_scores(y_true, scores, threshold: float, model_kind: str) -> EvalReport:
    counts = confusion(y_true, scores, threshold)
    return EvalReport(
        model_kind=model_kind,
        n=counts.n,
        threshold=threshold,
        confusion=counts,
        per_class={
            0: precision_recall_f1(counts, 0),
            1: precision_recall_f1(counts, 1),
        },
        auc=roc_auc(y_true, scores),
    )


def evaluate_model(model: ProbClassifier, matrix, threshold: float = 0.5) -> EvalReport:
    scores = predict_matrix(model, matrix)
    return evaluate_scores(matrix.target, scores, threshold, model.kind)


def compare(reports: list[EvalReport]) -> list[EvalReport]:
    """Reports sorted by AUC descending; equal AUCs fall back to kind name."""
    if not reports:
        raise ValueError("compare needs at least one report")
    return sorted(reports, key=lambda r: (-r.auc, r.model_kind))


def comparison_table(reports: list[EvalReport]) -> str:
    """Aligned text table of the cross-model comparison."""
    ordered = compare(reports)
    header = [
        "model", "n", "auc",
        "prec(default)", "rec(default)", "f1(default)",
        "prec(nondef)", "rec(nondef)", "f1(nondef)",
    ]
    rows = [header]
    for r in ordered:
        c1, c0 = r.per_class[1], r.per_class[0]
        rows.append([
            r.model_kind, str(r.n), f"{r.auc:.4f}",
            f"{c1.precision:.4f}", f"{c1.recall:.4f}", f"{c1.f1:.4f}",
            f"{c0.precision:.4f}", f"{c0.recall:.4f}", f"{c0.f1:.4f}",
        ])
    widths = [max(len(row[j]) for row in rows) for j in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
