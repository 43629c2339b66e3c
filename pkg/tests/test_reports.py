import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from creditxai.explain import Explanation
from creditxai.explain.base import rank_attributions
from creditxai.ingest.transform import FeatureMatrix
from creditxai.metrics import evaluate_scores
from creditxai.radar import radar_chart_svg
from creditxai.reports import (
    AdverseActionNotice,
    Reason,
    build_adverse_action,
    emit_report,
    notice_text,
    read_report,
)
from creditxai.scorecard import DEFAULT_WEIGHTS, DIMENSIONS, DimensionScore, ScoreCard


def sample_eval_report():
    rng = np.random.default_rng(0)
    y = rng.integers(0, 2, 40)
    y[:2] = [0, 1]
    return evaluate_scores(y, rng.random(40), 0.5, "forest")


def sample_explanation(weights=None, names=None):
    names = names or ("Incomeé", "Debt", "Rate")
    weights = weights if weights is not None else (0.2, -0.15, 0.1)
    return Explanation(
        method="lime",
        base_value=0.3,
        attributions=rank_attributions(names, weights),
        prediction=0.62,
        fidelity=0.87,
        seed=42,
        instance_ref="test row 3",
        top_k=2,
    )


def sample_card(values=(5, 4, 3, 2, 1), kind="forest"):
    scores = {
        d: DimensionScore(dimension=d, score=float(v), evidence=f"ev {d}", stats={"v": v})
        for d, v in zip(DIMENSIONS, values)
    }
    comp = sum(DEFAULT_WEIGHTS[d] * scores[d].score for d in DIMENSIONS)
    return ScoreCard(model_kind=kind, scores=scores, weights=dict(DEFAULT_WEIGHTS),
                     composite_score=comp)


class TestReportRoundTrips:
    def test_eval(self, tmp_path):
        report = sample_eval_report()
        emit_report(report, tmp_path / "r.json")
        assert read_report(tmp_path / "r.json") == report

    def test_explanation_with_unicode(self, tmp_path):
        e = sample_explanation()
        emit_report(e, tmp_path / "e.json")
        back = read_report(tmp_path / "e.json")
        assert back == e
        raw = (tmp_path / "e.json").read_text(encoding="utf-8")
        assert "Incomeé" in raw  # not escaped

    def test_explanation_without_fidelity(self, tmp_path):
        e = Explanation(
            method="exact-shapley", base_value=0.1,
            attributions=(("a", 0.5),), prediction=0.6, fidelity=None, seed=None,
        )
        emit_report(e, tmp_path / "e.json")
        assert read_report(tmp_path / "e.json") == e

    def test_scorecard(self, tmp_path):
        card = sample_card()
        emit_report(card, tmp_path / "c.json")
        assert read_report(tmp_path / "c.json") == card

    def test_comparison(self, tmp_path):
        reports = [sample_eval_report()]
        emit_report(reports, tmp_path / "cmp.json")
        assert read_report(tmp_path / "cmp.json") == reports

    def test_notice(self, tmp_path):
        notice = AdverseActionNotice(
            instance_id="P000123", decision="deny", probability=0.7, threshold=0.5,
            model_kind="mlp",
            reasons=(Reason(feature="Debt", display="Debt of 0.4", weight=0.2, value=0.4),),
        )
        emit_report(notice, tmp_path / "n.json")
        assert read_report(tmp_path / "n.json") == notice

    def test_version_mismatch_rejected(self, tmp_path):
        emit_report(sample_eval_report(), tmp_path / "r.json")
        doc = json.loads((tmp_path / "r.json").read_text())
        doc["schema_version"] = 2
        (tmp_path / "r.json").write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="schema_version"):
            read_report(tmp_path / "r.json")

    def test_garbage_rejected(self, tmp_path):
        (tmp_path / "x.json").write_text("{not json")
        with pytest.raises(ValueError, match="not a report file"):
            read_report(tmp_path / "x.json")

    def test_unsupported_object(self, tmp_path):
        with pytest.raises(TypeError):
            emit_report({"loose": "dict"}, tmp_path / "bad.json")


def small_matrix():
    values = np.array([[1.5, -0.5, 1.0], [0.2, 0.8, 0.0]])
    return FeatureMatrix(
        values=values,
        column_names=("Debt", "Income", "Grade=B"),
        target=np.array([1, 0]),
        continuous_columns=("Debt", "Income"),
        standardization={"Debt": (0.3, 0.2), "Income": (2000.0, 500.0)},
        provenance={"Debt": "Debt", "Income": "Income", "Grade=B": "Grade"},
        row_ids=("L1", "L2"),
    )


class TestAdverseAction:
    def explanation(self, weights, prediction=0.8):
        return Explanation(
            method="lime", base_value=0.2,
            attributions=rank_attributions(("Debt", "Income", "Grade=B"), weights),
            prediction=prediction, fidelity=0.9, seed=0,
        )

    def test_denied_reasons_positive_sorted(self):
        e = self.explanation([0.20, -0.15, 0.10])
        notice = build_adverse_action(e, small_matrix(), 0, threshold=0.5, model_kind="mlp")
        assert notice.decision == "deny"
        assert [r.feature for r in notice.reasons] == ["Debt", "Grade=B"]
        assert notice.reasons[0].weight == pytest.approx(0.20)

    def test_destandardized_value_displayed(self):
        e = self.explanation([0.20, -0.15, 0.10])
        notice = build_adverse_action(e, small_matrix(), 0, threshold=0.5, model_kind="mlp")
        # z = 1.5 on Debt with mean 0.3 std 0.2 -> raw 0.6
        assert notice.reasons[0].value == pytest.approx(0.6)
        assert "0.6" in notice.reasons[0].display

    def test_indicator_displayed_as_level(self):
        e = self.explanation([0.20, -0.15, 0.10])
        notice = build_adverse_action(e, small_matrix(), 0, threshold=0.5, model_kind="mlp")
        assert notice.reasons[1].display == "Grade is B"

    def test_approved_has_no_reasons(self):
        e = self.explanation([0.20, -0.15, 0.10], prediction=0.2)
        notice = build_adverse_action(e, small_matrix(), 1, threshold=0.5, model_kind="mlp")
        assert notice.decision == "approve"
        assert notice.reasons == ()

    def test_reason_cap_at_four(self):
        names = tuple(f"F{i}" for i in range(6))
        matrix = FeatureMatrix(
            values=np.ones((1, 6)),
            column_names=names,
            target=np.array([1]),
            continuous_columns=names,
        )
        e = Explanation(
            method="lime", base_value=0.1,
            attributions=rank_attributions(names, [0.3, 0.25, 0.2, 0.15, 0.1, 0.05]),
            prediction=0.9, fidelity=0.9, seed=0,
        )
        notice = build_adverse_action(e, matrix, 0, threshold=0.5, model_kind="forest")
        assert len(notice.reasons) == 4
        weights = [r.weight for r in notice.reasons]
        assert weights == sorted(weights, reverse=True)

    def test_threshold_boundary_denies(self):
        e = self.explanation([0.1, 0.0, 0.0], prediction=0.5)
        notice = build_adverse_action(e, small_matrix(), 0, threshold=0.5, model_kind="mlp")
        assert notice.decision == "deny"

    def test_notice_text_layout(self):
        e = self.explanation([0.20, -0.15, 0.10])
        notice = build_adverse_action(e, small_matrix(), 0, threshold=0.5, model_kind="mlp")
        text = notice_text(notice)
        assert text.startswith("ADVERSE ACTION NOTICE")
        assert "Application: L1" in text
        assert "DENY" in text
        assert "1. Debt" in text
        approved = build_adverse_action(
            self.explanation([0.2, -0.15, 0.1], prediction=0.1),
            small_matrix(), 1, threshold=0.5, model_kind="mlp",
        )
        assert "No adverse reasons" in notice_text(approved)


class TestRadarChart:
    def test_valid_svg_with_five_axes(self):
        svg = radar_chart_svg([sample_card()])
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")
        ns = {"s": "http://www.w3.org/2000/svg"}
        axes = root.findall(".//s:line[@class='axis']", ns)
        assert len(axes) == 5

    def test_one_polygon_per_model(self):
        cards = [sample_card(kind="logistic"), sample_card(kind="forest"),
                 sample_card(kind="mlp")]
        svg = radar_chart_svg(cards)
        root = ET.fromstring(svg)
        ns = {"s": "http://www.w3.org/2000/svg"}
        polys = root.findall(".//s:polygon[@class='model-polygon']", ns)
        assert len(polys) == 3
        legend = root.findall(".//s:text[@class='legend-label']", ns)
        assert len(legend) == 3

    def test_max_scores_reach_outer_ring(self):
        svg = radar_chart_svg([sample_card(values=(5, 5, 5, 5, 5))])
        root = ET.fromstring(svg)
        ns = {"s": "http://www.w3.org/2000/svg"}
        rings = root.findall(".//s:polygon[@class='ring']", ns)
        model = root.findall(".//s:polygon[@class='model-polygon']", ns)[0]
        assert model.get("points") == rings[-1].get("points")

    def test_zero_scores_collapse_to_center(self):
        svg = radar_chart_svg([sample_card(values=(0, 0, 0, 0, 0))])
        root = ET.fromstring(svg)
        ns = {"s": "http://www.w3.org/2000/svg"}
        points = root.findall(".//s:polygon[@class='model-polygon']", ns)[0].get("points")
        assert points.split() == ["280.00,280.00"] * 5

    def test_deterministic_bytes(self):
        cards = [sample_card(kind="mlp")]
        assert radar_chart_svg(cards) == radar_chart_svg(cards)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            radar_chart_svg([])
