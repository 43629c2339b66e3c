"""Local surrogate explanation: Gaussian perturbations, locality kernel, ridge fit.

Perturbation happens in the standardized feature space, so a unit-variance
Gaussian is a natural neighborhood for continuous features. One-hot groups
are flipped atomically by resampling the whole group from background rows,
which keeps every perturbed row a valid encoding.
"""

from __future__ import annotations

import math

import numpy as np

from ..rng import STREAM_LIME, spawn_rng
from .base import (
    LIME_DEFAULT_SAMPLES,
    Background,
    Explanation,
    PerturbConfig,
    rank_attributions,
    weighted_r2,
)
from .ridge import weighted_ridge


def lime_explain(
    model,
    instance,
    background: Background,
    cfg: PerturbConfig | None = None,
    instance_ref: str = "",
) -> Explanation:
    cfg = cfg or PerturbConfig()
    instance = np.asarray(instance, dtype=np.float64)
    m = instance.shape[0]
    if instance.ndim != 1 or m != len(background.column_names):
        raise ValueError("instance width does not match background columns")
    if not np.isfinite(instance).all():
        raise ValueError("instance contains non-finite values")
    n_samples = cfg.sample_count if cfg.sample_count is not None else LIME_DEFAULT_SAMPLES
    if n_samples < m + 2:
        raise ValueError(f"sample_count must be >= m + 2 = {m + 2}, got {n_samples}")
    width = cfg.kernel_width if cfg.kernel_width is not None else 0.75 * math.sqrt(m)

    grouped = sorted(j for cols in background.categorical_groups.values() for j in cols)
    continuous = [j for j in range(m) if j not in grouped]

    rng = spawn_rng(cfg.seed, STREAM_LIME)
    Z = np.tile(instance, (n_samples, 1))
    if continuous:
        Z[:, continuous] += rng.standard_normal((n_samples, len(continuous)))
    for source in sorted(background.categorical_groups):
        cols = list(background.categorical_groups[source])
        pick = rng.integers(0, background.size, size=n_samples)
        Z[:, cols] = background.rows[pick][:, cols]

    if n_samples > 0 and np.all(Z == Z[0]):
        raise ValueError("degenerate perturbation design: all perturbations identical")

    d2 = ((Z - instance) ** 2).sum(axis=1)
    kernel = np.exp(-d2 / (width * width))
    y = np.asarray(model.predict_proba(Z), dtype=np.float64)

    design = np.column_stack([np.ones(n_samples), Z])
    beta = weighted_ridge(design, y, kernel, cfg.ridge_lambda)
    fidelity, degenerate = weighted_r2(y, design @ beta, kernel)

    prediction = float(np.asarray(model.predict_proba(instance[None, :]))[0])
    return Explanation(
        method="lime",
        base_value=float(beta[0]),
        attributions=rank_attributions(background.column_names, beta[1:]),
        prediction=prediction,
        fidelity=float(fidelity),
        fidelity_degenerate=degenerate,
        seed=cfg.seed,
        instance_ref=instance_ref,
        top_k=cfg.top_k,
    )
