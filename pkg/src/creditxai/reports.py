"""Structured report files and adverse-action notices.

Every report is a JSON document with a type tag and schema version so the
reader can reject anything it does not understand:

    {"format": "creditxai-report", "schema_version": 1,
     "report": "<type>", "payload": {...}}

Types: eval, comparison, explanation, scorecard, adverse-action. Field
names inside payloads are a stable contract for downstream consumers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .explain.base import Explanation
from .ingest.transform import FeatureMatrix, destandardize_value
from .metrics import ConfusionCounts, EvalReport, PrecisionRecallF1
from .scorecard import DimensionScore, ScoreCard

REPORT_FORMAT = "creditxai-report"
REPORT_VERSION = 1
MAX_ADVERSE_REASONS = 4


@dataclass(frozen=True)
class Reason:
    feature: str  # encoded feature name
    display: str  # plain-language description with the raw-unit value
    weight: float  # attribution pushing toward default
    value: float  # de-standardized instance value


@dataclass(frozen=True)
class AdverseActionNotice:
    instance_id: str
    decision: str  # approve | deny
    probability: float
    threshold: float
    model_kind: str
    reasons: tuple[Reason, ...]


def describe_feature(matrix: FeatureMatrix, name: str, standardized_value: float) -> tuple[str, float]:
    """Plain-language label and raw-unit value for one feature of one row."""
    source = matrix.provenance.get(name, name)
    if "=" in name and name.split("=", 1)[0] == source:
        level = name.split("=", 1)[1]
        held = standardized_value >= 0.5
        verb = "is" if held else "is not"
        return f"{source} {verb} {level}", float(standardized_value)
    raw = destandardize_value(matrix, name, standardized_value)
    return f"{name} of {raw:.4g}", float(raw)


def build_adverse_action(
    explanation: Explanation,
    matrix: FeatureMatrix,
    row_index: int,
    threshold: float,
    model_kind: str,
) -> AdverseActionNotice:
    """Notice for one scored instance.

    Denials list up to four principal reasons: the attributions pushing
    toward default (positive weights), strongest first, described in raw
    units. Approvals carry no reasons.
    """
    ids = matrix.row_ids or tuple(str(i) for i in range(matrix.n_rows))
    probability = explanation.prediction
    decision = "deny" if probability >= threshold else "approve"
    reasons: list[Reason] = []
    if decision == "deny":
        positive = [(n, w) for n, w in explanation.attributions if w > 0]
        positive.sort(key=lambda p: (-p[1], p[0]))
        row = matrix.values[row_index]
        for name, weight in positive[:MAX_ADVERSE_REASONS]:
            z = float(row[matrix.column_index(name)])
            display, raw = describe_feature(matrix, name, z)
            reasons.append(Reason(feature=name, display=display, weight=weight, value=raw))
    return AdverseActionNotice(
        instance_id=ids[row_index],
        decision=decision,
        probability=float(probability),
        threshold=float(threshold),
        model_kind=model_kind,
        reasons=tuple(reasons),
    )


def notice_text(notice: AdverseActionNotice) -> str:
    lines = [
        "ADVERSE ACTION NOTICE",
        f"Application: {notice.instance_id}",
        f"Model: {notice.model_kind}",
        (
            f"Decision: {notice.decision.upper()} "
            f"(predicted default probability {notice.probability:.4f} "
            f"at threshold {notice.threshold:.2f})"
        ),
        "",
    ]
    if notice.decision == "deny":
        lines.append("Principal reasons for this decision, strongest first:")
        for i, reason in enumerate(notice.reasons, start=1):
            lines.append(
                f"  {i}. {reason.display} (weight toward default {reason.weight:+.4f})"
            )
    else:
        lines.append("No adverse reasons are reported for approved applications.")
    return "\n".join(lines) + "\n"


# --- payload encoders / decoders ------------------------------------------


def _encode_eval(report: EvalReport) -> dict:
    c = report.confusion
    return {
        "model_kind": report.model_kind,
        "n": report.n,
        "threshold": report.threshold,
        "confusion": {"tp": c.tp, "fp": c.fp, "tn": c.tn, "fn": c.fn},
        "per_class": {
            str(cls): {
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
                "degenerate": m.degenerate,
            }
            for cls, m in sorted(report.per_class.items())
        },
        "auc": report.auc,
    }


def _decode_eval(payload: dict) -> EvalReport:
    c = payload["confusion"]
    return EvalReport(
        model_kind=payload["model_kind"],
        n=int(payload["n"]),
        threshold=float(payload["threshold"]),
        confusion=ConfusionCounts(tp=c["tp"], fp=c["fp"], tn=c["tn"], fn=c["fn"]),
        per_class={
            int(cls): PrecisionRecallF1(
                precision=m["precision"],
                recall=m["recall"],
                f1=m["f1"],
                degenerate=m["degenerate"],
            )
            for cls, m in payload["per_class"].items()
        },
        auc=float(payload["auc"]),
    )


def _encode_explanation(e: Explanation) -> dict:
    return {
        "method": e.method,
        "seed": e.seed,
        "base_value": e.base_value,
        "prediction": e.prediction,
        "fidelity": e.fidelity,
        "fidelity_degenerate": e.fidelity_degenerate,
        "top_k": e.top_k,
        "instance_ref": e.instance_ref,
        "attributions": [[name, weight] for name, weight in e.attributions],
    }


def _decode_explanation(payload: dict) -> Explanation:
    return Explanation(
        method=payload["method"],
        base_value=float(payload["base_value"]),
        attributions=tuple((n, float(w)) for n, w in payload["attributions"]),
        prediction=float(payload["prediction"]),
        fidelity=None if payload["fidelity"] is None else float(payload["fidelity"]),
        fidelity_degenerate=bool(payload["fidelity_degenerate"]),
        seed=payload["seed"],
        instance_ref=payload["instance_ref"],
        top_k=int(payload["top_k"]),
    )


def _encode_scorecard(card: ScoreCard) -> dict:
    return {
        "model_kind": card.model_kind,
        "weights": {d: card.weights[d] for d in sorted(card.weights)},
        "composite": card.composite_score,
        "scores": {
            d: {"score": s.score, "evidence": s.evidence, "stats": s.stats}
            for d, s in sorted(card.scores.items())
        },
    }


def _decode_scorecard(payload: dict) -> ScoreCard:
    return ScoreCard(
        model_kind=payload["model_kind"],
        scores={
            d: DimensionScore(
                dimension=d, score=s["score"], evidence=s["evidence"], stats=s["stats"]
            )
            for d, s in payload["scores"].items()
        },
        weights=dict(payload["weights"]),
        composite_score=float(payload["composite"]),
    )


def _encode_notice(n: AdverseActionNotice) -> dict:
    return {
        "instance_id": n.instance_id,
        "decision": n.decision,
        "probability": n.probability,
        "threshold": n.threshold,
        "model_kind": n.model_kind,
        "reasons": [
            {"feature": r.feature, "display": r.display, "weight": r.weight, "value": r.value}
            for r in n.reasons
        ],
    }


def _decode_notice(payload: dict) -> AdverseActionNotice:
    return AdverseActionNotice(
        instance_id=payload["instance_id"],
        decision=payload["decision"],
        probability=float(payload["probability"]),
        threshold=float(payload["threshold"]),
        model_kind=payload["model_kind"],
        reasons=tuple(
            Reason(
                feature=r["feature"],
                display=r["display"],
                weight=float(r["weight"]),
                value=float(r["value"]),
            )
            for r in payload["reasons"]
        ),
    )


def _report_type(obj) -> str:
    if isinstance(obj, EvalReport):
        return "eval"
    if isinstance(obj, Explanation):
        return "explanation"
    if isinstance(obj, ScoreCard):
        return "scorecard"
    if isinstance(obj, AdverseActionNotice):
        return "adverse-action"
    if isinstance(obj, list) and obj and all(isinstance(r, EvalReport) for r in obj):
        return "comparison"
    raise TypeError(f"cannot emit a report for {type(obj).__name__}")


def emit_report(obj, path: str | Path) -> None:
    """Write a versioned, round-trippable report file."""
    kind = _report_type(obj)
    if kind == "eval":
        payload = _encode_eval(obj)
    elif kind == "explanation":
        payload = _encode_explanation(obj)
    elif kind == "scorecard":
        payload = _encode_scorecard(obj)
    elif kind == "adverse-action":
        payload = _encode_notice(obj)
    else:
        payload = {"reports": [_encode_eval(r) for r in obj]}
    doc = {
        "format": REPORT_FORMAT,
        "schema_version": REPORT_VERSION,
        "report": kind,
        "payload": payload,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")


def read_report(path: str | Path):
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not a report file ({exc})") from None
    if not isinstance(doc, dict) or doc.get("format") != REPORT_FORMAT:
        raise ValueError(f"{path}: not a {REPORT_FORMAT} file")
    if doc.get("schema_version") != REPORT_VERSION:
        raise ValueError(
            f"{path}: unsupported schema_version {doc.get('schema_version')!r} "
            f"(expected {REPORT_VERSION})"
        )
    kind = doc.get("report")
    payload = doc["payload"]
    if kind == "eval":
        return _decode_eval(payload)
    if kind == "explanation":
        return _decode_explanation(payload)
    if kind == "scorecard":
        return _decode_scorecard(payload)
    if kind == "adverse-action":
        return _decode_notice(payload)
    if kind == "comparison":
        return [_decode_eval(r) for r in payload["reports"]]
    raise ValueError(f"{path}: unknown report type {kind!r}")
