"""Model-agnostic per-instance attribution: LIME, kernel SHAP, exact Shapley."""

from .base import (
    EXACT_SHAPLEY_LIMIT,
    FULL_ENUMERATION_LIMIT,
    KERNEL_SHAP_MAX_DEFAULT_COALITIONS,
    LIME_DEFAULT_SAMPLES,
    Background,
    Explanation,
    PerturbConfig,
    categorical_groups_from,
    rank_attributions,
    sample_background,
    weighted_r2,
)
from .importance import EXPLAINER_METHODS, Explainer, global_importance
from .lime import lime_explain
from .ridge import weighted_ridge
from .shap import coalition_values, exact_shapley, kernel_shap_explain, shap_kernel_weight

__all__ = [
    "EXACT_SHAPLEY_LIMIT",
    "EXPLAINER_METHODS",
    "FULL_ENUMERATION_LIMIT",
    "KERNEL_SHAP_MAX_DEFAULT_COALITIONS",
    "LIME_DEFAULT_SAMPLES",
    "Background",
    "Explainer",
    "Explanation",
    "PerturbConfig",
    "categorical_groups_from",
    "coalition_values",
    "exact_shapley",
    "global_importance",
    "kernel_shap_explain",
    "lime_explain",
    "rank_attributions",
    "sample_background",
    "shap_kernel_weight",
    "weighted_r2",
    "weighted_ridge",
]
