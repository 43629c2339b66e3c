"""Shapley attribution: exact coalition enumeration and the kernel approximation.

The masked value function v(S) evaluates the model with features outside S
replaced by background-row values, averaged over the whole background
sample. Kernel SHAP solves the specially weighted least squares over
coalitions with the efficiency constraint enforced by variable elimination,
so attributions plus base value reconstruct the prediction exactly; with
full enumeration it reproduces the exact Shapley values.
"""

from __future__ import annotations

import math

import numpy as np

from ..rng import STREAM_SHAP, spawn_rng
from .base import (
    EXACT_SHAPLEY_LIMIT,
    FULL_ENUMERATION_LIMIT,
    KERNEL_SHAP_MAX_DEFAULT_COALITIONS,
    Background,
    Explanation,
    PerturbConfig,
    rank_attributions,
)

_CHUNK_ROWS = 131072


def shap_kernel_weight(m: int, s: int) -> float:
    """Coalition weight (m-1) / (C(m,s) * s * (m-s)) for 0 < s < m."""
    if not 0 < s < m:
        raise ValueError(
            f"kernel weight undefined for coalition size {s} of {m}; "
            "empty and full coalitions are hard constraints"
        )
    return (m - 1) / (math.comb(m, s) * s * (m - s))


def coalition_values(predict, instance, background: Background, masks: np.ndarray) -> np.ndarray:
    """v(S) for each row of ``masks``: background-averaged masked predictions.

    Rows are batched so a full enumeration stays within a bounded memory
    footprint regardless of coalition count.
    """
    instance = np.asarray(instance, dtype=np.float64)
    masks = np.asarray(masks, dtype=bool)
    k = background.size
    per_chunk = max(1, _CHUNK_ROWS // k)
    values = np.empty(masks.shape[0])
    for start in range(0, masks.shape[0], per_chunk):
        sub = masks[start : start + per_chunk]
        present = np.repeat(sub, k, axis=0)
        X = np.where(present, instance[None, :], np.tile(background.rows, (sub.shape[0], 1)))
        p = np.asarray(predict(X), dtype=np.float64)
        values[start : start + per_chunk] = p.reshape(sub.shape[0], k).mean(axis=1)
    return values


def _all_masks(m: int) -> np.ndarray:
    ints = np.arange(2**m, dtype=np.int64)
    return (ints[:, None] >> np.arange(m)) & 1 > 0


def exact_shapley(
    model, instance, background: Background, instance_ref: str = ""
) -> Explanation:
    """Exact Shapley values by full 2^m coalition enumeration."""
    instance = np.asarray(instance, dtype=np.float64)
    m = instance.shape[0]
    if m > EXACT_SHAPLEY_LIMIT:
        raise ValueError(
            f"exact Shapley enumeration is limited to m <= {EXACT_SHAPLEY_LIMIT} "
            f"features (got {m}); use kernel_shap_explain instead"
        )
    if m != len(background.column_names):
        raise ValueError("instance width does not match background columns")
    masks = _all_masks(m)
    v = coalition_values(model.predict_proba, instance, background, masks)
    sizes = masks.sum(axis=1)
    # marginal weight |S|! (m - |S| - 1)! / m! by coalition size
    fact = [math.factorial(i) for i in range(m + 1)]
    w_by_size = np.array(
        [fact[s] * fact[m - s - 1] / fact[m] for s in range(m)] + [0.0]
    )
    ints = np.arange(2**m, dtype=np.int64)
    phi = np.empty(m)
    for i in range(m):
        without = ints[(ints >> i) & 1 == 0]
        gain = v[without | (1 << i)] - v[without]
        phi[i] = float(w_by_size[sizes[without]] @ gain)
    return Explanation(
        method="exact-shapley",
        base_value=float(v[0]),
        attributions=rank_attributions(background.column_names, phi),
        prediction=float(v[-1]),
        fidelity=None,
        seed=None,
        instance_ref=instance_ref,
    )


def _sample_coalitions(m: int, count: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Draw coalitions by kernel-weighted size then uniform membership.

    Duplicates are merged with multiplicity as the regression weight (the
    kernel weight is already folded into the sampling frequency).
    """
    sizes = np.arange(1, m)
    p = (m - 1) / (sizes * (m - sizes))
    p = p / p.sum()
    drawn = rng.choice(sizes, size=count, p=p)
    seen: dict[tuple[int, ...], int] = {}
    for s in drawn:
        members = tuple(sorted(rng.choice(m, size=int(s), replace=False).tolist()))
        seen[members] = seen.get(members, 0) + 1
    masks = np.zeros((len(seen), m), dtype=bool)
    weights = np.empty(len(seen))
    for row, (members, mult) in enumerate(seen.items()):
        masks[row, list(members)] = True
        weights[row] = mult
    return masks, weights


def kernel_shap_explain(
    model,
    instance,
    background: Background,
    cfg: PerturbConfig | None = None,
    instance_ref: str = "",
) -> Explanation:
    cfg = cfg or PerturbConfig()
    instance = np.asarray(instance, dtype=np.float64)
    m = instance.shape[0]
    if m != len(background.column_names):
        raise ValueError("instance width does not match background columns")
    base = float(np.asarray(model.predict_proba(background.rows), dtype=np.float64).mean())
    f_x = float(np.asarray(model.predict_proba(instance[None, :]))[0])

    if m == 1:
        phi = np.array([f_x - base])
    else:
        budget = (
            cfg.sample_count
            if cfg.sample_count is not None
            else min(2**m, KERNEL_SHAP_MAX_DEFAULT_COALITIONS)
        )
        full = 2**m - 2  # proper non-empty coalitions
        if m <= FULL_ENUMERATION_LIMIT and budget >= full:
            masks = _all_masks(m)
            proper = (masks.sum(axis=1) > 0) & (masks.sum(axis=1) < m)
            masks = masks[proper]
            weights = np.array([shap_kernel_weight(m, int(s)) for s in masks.sum(axis=1)])
        else:
            if budget < m + 2:
                raise ValueError(f"sample_count must be >= m + 2 = {m + 2}, got {budget}")
            rng = spawn_rng(cfg.seed, STREAM_SHAP)
            masks, weights = _sample_coalitions(m, budget, rng)
            if masks.shape[0] < m:
                raise ValueError(
                    "too few distinct coalitions sampled to identify attributions; "
                    "increase sample_count"
                )
        v = coalition_values(model.predict_proba, instance, background, masks)
        # eliminate phi_m via the efficiency constraint sum(phi) = f_x - base
        z_last = masks[:, m - 1].astype(np.float64)
        y = v - base - z_last * (f_x - base)
        A = masks[:, : m - 1].astype(np.float64) - z_last[:, None]
        Aw = A * weights[:, None]
        try:
            head = np.linalg.solve(A.T @ Aw, Aw.T @ y)
        except np.linalg.LinAlgError:
            raise ValueError(
                "kernel SHAP normal equations are singular; increase sample_count"
            ) from None
        phi = np.append(head, (f_x - base) - head.sum())

    return Explanation(
        method="kernel-shap",
        base_value=base,
        attributions=rank_attributions(background.column_names, phi),
        prediction=f_x,
        fidelity=None,
        seed=cfg.seed,
        instance_ref=instance_ref,
        top_k=cfg.top_k,
    )
