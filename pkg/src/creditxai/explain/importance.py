"""Explainer dispatch and sample-level feature importance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import STREAM_IMPORTANCE, derive_seed
from .base import Background, Explanation, PerturbConfig
from .lime import lime_explain
from .shap import exact_shapley, kernel_shap_explain

EXPLAINER_METHODS = ("lime", "kernel-shap", "exact-shapley")


@dataclass(frozen=True)
class Explainer:
    """A method bound to its background and perturbation settings."""

    method: str
    background: Background
    config: PerturbConfig

    def __post_init__(self):
        if self.method not in EXPLAINER_METHODS:
            raise ValueError(f"unknown explainer method {self.method!r}")

    def explain(self, model, instance, seed: int | None = None, instance_ref: str = "") -> Explanation:
        cfg = self.config if seed is None else self.config.with_seed(seed)
        if self.method == "lime":
            return lime_explain(model, instance, self.background, cfg, instance_ref)
        if self.method == "kernel-shap":
            return kernel_shap_explain(model, instance, self.background, cfg, instance_ref)
        return exact_shapley(model, instance, self.background, instance_ref)


def global_importance(model, sample, explainer: Explainer) -> list[tuple[str, float]]:
    """Mean absolute attribution per feature over the sample, descending.

    Per-row seeds are derived from the explainer's seed and the row index,
    so the ranking is reproducible and independent of evaluation order.
    """
    sample = np.asarray(sample, dtype=np.float64)
    if sample.ndim != 2 or sample.shape[0] == 0:
        raise ValueError("sample must be a non-empty 2-d array of rows")
    totals: dict[str, float] = {name: 0.0 for name in explainer.background.column_names}
    for i in range(sample.shape[0]):
        seed = derive_seed(explainer.config.seed, STREAM_IMPORTANCE, i)
        explanation = explainer.explain(model, sample[i], seed=seed)
        for name, w in explanation.attributions:
            totals[name] += abs(w)
    n = sample.shape[0]
    ranked = [(name, total / n) for name, total in totals.items()]
    ranked.sort(key=lambda p: (-p[1], p[0]))
    return ranked
