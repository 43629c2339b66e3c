"""Weighted ridge regression by normal equations (LIME's surrogate fit)."""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_solve


def weighted_ridge(design, targets, sample_weights, lam: float) -> np.ndarray:
    """Minimize sum_i w_i (y_i - beta . x_i)^2 + lam * ||beta_1..m||^2.

    ``design`` is s x (m+1) with the intercept column first; the intercept
    is not penalized. Solved with a Cholesky factorization of the normal
    equations, which also certifies positive definiteness.
    """
    X = np.asarray(design, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    w = np.asarray(sample_weights, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("design must be 2-d")
    s, p = X.shape
    if y.shape != (s,) or w.shape != (s,):
        raise ValueError("targets and sample_weights must match the design row count")
    if s < p + 1:
        raise ValueError(f"need at least {p + 1} samples for a {p}-column design, got {s}")
    if (w < 0).any():
        raise ValueError("sample weights must be non-negative")
    if not (w > 0).any():
        raise ValueError("sample weights must not all be zero")
    if lam < 0:
        raise ValueError("lam must be >= 0")

    Xw = X * w[:, None]
    A = X.T @ Xw
    A[np.arange(1, p), np.arange(1, p)] += lam  # intercept (column 0) unpenalized
    b = Xw.T @ y
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        raise ValueError(
            "weighted ridge normal equations are singular; "
            "use lam > 0 or drop collinear columns"
        ) from None
    return cho_solve((L, True), b)
