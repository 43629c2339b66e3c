"""Five-dimension explainability scorecard with stakeholder weighting.

The dimensions (inherent interpretability, global explanations, local
explanations, consistency, complexity) each map a measured statistic onto a
0-5 scale. Every mapping here (rubric tables, the rank-stability and
Jaccard/Spearman blends, the parameter-count brackets) is this package's
operationalization and is deliberately isolated in this module so an
alternative rubric can replace it wholesale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .explain.importance import Explainer, global_importance
from .rng import STREAM_CONSISTENCY, derive_seed

DIMENSIONS = ("inherent", "global", "local", "consistency", "complexity")

DIMENSION_TITLES = {
    "inherent": "Inherent Interpretability",
    "global": "Global Explanations",
    "local": "Local Explanations",
    "consistency": "Consistency",
    "complexity": "Complexity",
}

# Local explanations carry the most weight for credit decisions; the rest
# share the remainder evenly.
DEFAULT_WEIGHTS = {
    "inherent": 0.175,
    "global": 0.175,
    "local": 0.30,
    "consistency": 0.175,
    "complexity": 0.175,
}

INHERENT_RUBRIC = {"logistic": 5.0, "forest": 3.0, "mlp": 1.0}

COMPLEXITY_BRACKETS = ((100, 5.0), (1_000, 4.0), (10_000, 3.0), (100_000, 2.0))

TOP_SET_SIZE = 5  # feature-set size for the consistency Jaccard overlap
ADDITIVITY_RESIDUAL_SCALE = 0.05


@dataclass(frozen=True)
class DimensionScore:
    dimension: str
    score: float
    evidence: str
    stats: dict

    def __post_init__(self):
        if not 0.0 <= self.score <= 5.0:
            raise ValueError(f"score must be in [0, 5], got {self.score}")


@dataclass(frozen=True)
class ScoreCard:
    model_kind: str
    scores: dict[str, DimensionScore]
    weights: dict[str, float]
    composite_score: float


def spearman(a, b) -> float:
    """Spearman rank correlation with average ranks for ties.

    Bitwise-equal vectors short-circuit to exactly 1.0 so deterministic
    explainers score a clean maximum; an all-tied vector correlates 0 with
    anything unequal.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("rank vectors must have equal length")
    if np.array_equal(a, b):
        return 1.0
    ra, rb = rankdata(a), rankdata(b)
    da, db = ra - ra.mean(), rb - rb.mean()
    denom = np.sqrt((da @ da) * (db @ db))
    if denom == 0.0:
        return 0.0
    return float((da @ db) / denom)


def score_inherent(model_kind: str) -> DimensionScore:
    """Rubric lookup: is the mathematical structure itself readable."""
    if model_kind not in INHERENT_RUBRIC:
        raise ValueError(f"unknown model kind {model_kind!r}")
    score = INHERENT_RUBRIC[model_kind]
    return DimensionScore(
        dimension="inherent",
        score=score,
        evidence=f"rubric score for a {model_kind} model",
        stats={"rubric": dict(INHERENT_RUBRIC)},
    )


def score_global(model, train_sample, explainer: Explainer) -> DimensionScore:
    """Rank stability of global importance across two disjoint half-samples."""
    sample = np.asarray(train_sample, dtype=np.float64)
    if sample.shape[0] < 2:
        raise ValueError("sample too small to halve; need at least 2 rows")
    half = sample.shape[0] // 2
    first = global_importance(model, sample[:half], explainer)
    second = global_importance(model, sample[half:], explainer)
    names = sorted(n for n, _ in first)
    a = [dict(first)[n] for n in names]
    b = [dict(second)[n] for n in names]
    rho = spearman(a, b)
    return DimensionScore(
        dimension="global",
        score=5.0 * max(0.0, rho),
        evidence=(
            f"importance rank stability across {half}/{sample.shape[0] - half} row halves: "
            f"spearman rho = {rho:.4f}"
        ),
        stats={"spearman_rho": rho, "half_sizes": [half, sample.shape[0] - half]},
    )


def score_local(model, instances, explainer: Explainer) -> DimensionScore:
    """Faithfulness of per-instance explanations.

    LIME: mean weighted R^2 of the surrogate. Shapley methods: mean
    additivity residual, scaled so a residual of 0.05 or worse scores 0.
    """
    instances = np.asarray(instances, dtype=np.float64)
    if instances.shape[0] < 20:
        raise ValueError(f"need at least 20 instances, got {instances.shape[0]}")
    explanations = []
    failures = 0
    for i in range(instances.shape[0]):
        try:
            explanations.append(explainer.explain(model, instances[i]))
        except ValueError:
            failures += 1
    if failures > 0.1 * instances.shape[0]:
        raise ValueError(
            f"explainer failed on {failures}/{instances.shape[0]} instances (over 10%)"
        )
    degenerate = any(e.fidelity_degenerate for e in explanations)
    if explainer.method == "lime":
        mean_r2 = float(np.mean([e.fidelity for e in explanations]))
        score = 5.0 * min(max(mean_r2, 0.0), 1.0)
        evidence = f"mean surrogate weighted R^2 = {mean_r2:.4f} over {len(explanations)} instances"
        stats = {"mean_weighted_r2": mean_r2}
    else:
        residual = float(np.mean([e.additivity_residual for e in explanations]))
        score = 5.0 * (1.0 - min(max(residual / ADDITIVITY_RESIDUAL_SCALE, 0.0), 1.0))
        evidence = f"mean additivity residual = {residual:.2e} over {len(explanations)} instances"
        stats = {"mean_additivity_residual": residual}
    stats.update({"instances": len(explanations), "failures": failures, "degenerate": degenerate})
    return DimensionScore(dimension="local", score=score, evidence=evidence, stats=stats)


def score_consistency(model, instances, explainer: Explainer, repeats: int = 3) -> DimensionScore:
    """Repeatability under reseeding: top-set overlap plus rank agreement.

    Each instance is explained ``repeats`` times with distinct derived
    seeds; the score blends the mean pairwise Jaccard overlap of top-5
    feature sets with the mean pairwise Spearman correlation of the
    absolute-attribution rankings, half and half. Negative correlations are
    clamped to 0 per pair (an anti-correlated repeat is no better than an
    unrelated one) before averaging.
    """
    if repeats < 2:
        raise ValueError("repeats must be >= 2")
    instances = np.asarray(instances, dtype=np.float64)
    names = sorted(explainer.background.column_names)
    jaccards, rhos = [], []
    for i in range(instances.shape[0]):
        runs = []
        for r in range(repeats):
            seed = derive_seed(explainer.config.seed, STREAM_CONSISTENCY, i, r)
            runs.append(explainer.explain(model, instances[i], seed=seed))
        for a in range(repeats):
            for b in range(a + 1, repeats):
                top_a = set(runs[a].top_features(TOP_SET_SIZE))
                top_b = set(runs[b].top_features(TOP_SET_SIZE))
                jaccards.append(len(top_a & top_b) / len(top_a | top_b))
                va = [abs(runs[a].as_dict()[n]) for n in names]
                vb = [abs(runs[b].as_dict()[n]) for n in names]
                rhos.append(max(0.0, spearman(va, vb)))
    jaccard = float(np.mean(jaccards))
    rho_bar = float(np.mean(rhos))
    score = 5.0 * (0.5 * jaccard + 0.5 * rho_bar)
    return DimensionScore(
        dimension="consistency",
        score=score,
        evidence=(
            f"over {instances.shape[0]} instances x {repeats} reseeded repeats: "
            f"top-{TOP_SET_SIZE} Jaccard = {jaccard:.4f}, rank rho = {rho_bar:.4f}"
        ),
        stats={"jaccard": jaccard, "spearman_rho": rho_bar, "repeats": repeats},
    )


def score_complexity(parameter_count: int) -> DimensionScore:
    """Parameter-count brackets: fewer parameters are easier to communicate."""
    if parameter_count < 0:
        raise ValueError("parameter count must be >= 0")
    score = 1.0
    for limit, bracket_score in COMPLEXITY_BRACKETS:
        if parameter_count <= limit:
            score = bracket_score
            break
    return DimensionScore(
        dimension="complexity",
        score=score,
        evidence=f"{parameter_count} trained parameters",
        stats={"parameter_count": parameter_count},
    )


def composite(scores: dict[str, DimensionScore], weights: dict[str, float] | None = None) -> float:
    """Weighted mean of the five dimension scores."""
    weights = DEFAULT_WEIGHTS if weights is None else weights
    if set(weights) != set(DIMENSIONS):
        raise ValueError(f"weights must cover exactly the dimensions {DIMENSIONS}")
    if any(w < 0 for w in weights.values()):
        raise ValueError("weights must be non-negative")
    total = sum(weights.values())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1 (got {total!r})")
    if set(scores) != set(DIMENSIONS):
        raise ValueError("scores must cover exactly the five dimensions")
    return float(sum(weights[d] * scores[d].score for d in DIMENSIONS))


def build_scorecard(
    model,
    train_sample,
    local_instances,
    explainer: Explainer,
    repeats: int = 3,
    weights: dict[str, float] | None = None,
    consistency_instances=None,
) -> ScoreCard:
    """Assemble all five dimensions for one model."""
    weights = dict(DEFAULT_WEIGHTS if weights is None else weights)
    if consistency_instances is None:
        consistency_instances = local_instances
    scores = {
        "inherent": score_inherent(model.kind),
        "global": score_global(model, train_sample, explainer),
        "local": score_local(model, local_instances, explainer),
        "consistency": score_consistency(model, consistency_instances, explainer, repeats),
        "complexity": score_complexity(model.parameter_count),
    }
    return ScoreCard(
        model_kind=model.kind,
        scores=scores,
        weights=weights,
        composite_score=composite(scores, weights),
    )
