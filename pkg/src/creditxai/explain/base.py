"""Shared attribution types: explanations, background sample, perturbation config."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..ingest.transform import FeatureMatrix
from ..rng import STREAM_BACKGROUND, spawn_rng

LIME_DEFAULT_SAMPLES = 5000
KERNEL_SHAP_MAX_DEFAULT_COALITIONS = 2048
FULL_ENUMERATION_LIMIT = 12  # kernel SHAP enumerates every coalition up to here
EXACT_SHAPLEY_LIMIT = 15


@dataclass(frozen=True)
class Explanation:
    """Additive per-instance attribution.

    ``attributions`` covers every model feature, ordered by descending
    absolute weight (name as tie-break) so the first ``top_k`` entries are
    the reported headline. ``fidelity`` is the surrogate's weighted R^2 and
    is None for the Shapley methods, whose quality signal is the additivity
    residual instead.
    """

    method: str
    base_value: float
    attributions: tuple[tuple[str, float], ...]
    prediction: float
    fidelity: float | None = None
    fidelity_degenerate: bool = False
    seed: int | None = None
    instance_ref: str = ""
    top_k: int = 10

    def weight(self, feature: str) -> float:
        for name, w in self.attributions:
            if name == feature:
                return w
        raise KeyError(feature)

    def as_dict(self) -> dict[str, float]:
        return dict(self.attributions)

    @property
    def additivity_residual(self) -> float:
        total = self.base_value + sum(w for _, w in self.attributions)
        return abs(total - self.prediction)

    def top_features(self, k: int | None = None) -> tuple[str, ...]:
        k = self.top_k if k is None else k
        return tuple(name for name, _ in self.attributions[:k])


def rank_attributions(names, weights) -> tuple[tuple[str, float], ...]:
    pairs = [(str(n), float(w)) for n, w in zip(names, weights)]
    pairs.sort(key=lambda p: (-abs(p[1]), p[0]))
    return tuple(pairs)


@dataclass(frozen=True)
class Background:
    """Reference rows defining "feature absent" for masking and resampling."""

    rows: np.ndarray
    column_names: tuple[str, ...]
    categorical_groups: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rows", np.asarray(self.rows, dtype=np.float64))
        if self.rows.ndim != 2 or self.rows.shape[0] < 1:
            raise ValueError("background needs at least one row")
        if self.rows.shape[1] != len(self.column_names):
            raise ValueError("background width does not match column names")

    @property
    def size(self) -> int:
        return self.rows.shape[0]


def categorical_groups_from(matrix: FeatureMatrix) -> dict[str, tuple[int, ...]]:
    """Indicator-column groups (source column -> column indices) from provenance."""
    groups: dict[str, list[int]] = {}
    for j, name in enumerate(matrix.column_names):
        source = matrix.provenance.get(name, name)
        if "=" in name and name.split("=", 1)[0] == source:
            groups.setdefault(source, []).append(j)
    return {src: tuple(cols) for src, cols in groups.items()}


def sample_background(matrix: FeatureMatrix, size: int = 100, seed: int = 0) -> Background:
    """Draw up to ``size`` training rows (without replacement) as the reference set."""
    rng = spawn_rng(seed, STREAM_BACKGROUND)
    n = matrix.n_rows
    take = min(size, n)
    idx = np.sort(rng.choice(n, size=take, replace=False))
    return Background(
        rows=matrix.values[idx],
        column_names=matrix.column_names,
        categorical_groups=categorical_groups_from(matrix),
    )


@dataclass(frozen=True)
class PerturbConfig:
    """Sampling knobs shared by the explainers.

    ``sample_count=None`` means the method default: 5000 perturbations for
    LIME, min(2^m, 2048) coalitions for kernel SHAP. ``kernel_width=None``
    means LIME's 0.75 * sqrt(m).
    """

    sample_count: int | None = None
    kernel_width: float | None = None
    ridge_lambda: float = 1.0
    top_k: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.sample_count is not None and self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if self.kernel_width is not None and self.kernel_width <= 0:
            raise ValueError("kernel_width must be positive")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be >= 0")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")

    def with_seed(self, seed: int) -> "PerturbConfig":
        return replace(self, seed=seed)


def weighted_r2(y, y_hat, weights) -> tuple[float, bool]:
    """Coefficient of determination under sample weights.

    Zero-variance targets make R^2 undefined; the convention here is 1.0
    with the degenerate flag set (a constant surrogate matches a constant
    model perfectly).
    """
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    total = w.sum()
    if total <= 0:
        raise ValueError("weights must not all be zero")
    if y.size and np.all(y == y.flat[0]):
        return 1.0, True
    y_bar = float(w @ y) / total
    ss_tot = float(w @ (y - y_bar) ** 2)
    if ss_tot == 0.0:
        return 1.0, True
    ss_res = float(w @ (y - y_hat) ** 2)
    return 1.0 - ss_res / ss_tot, False
