"""L2-regularized logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..ingest.transform import FeatureMatrix
from .base import ProbClassifier, TrainConfig, bce_from_logits, sigmoid

GRADIENT_TOL = 1e-8


@dataclass(frozen=True)
class LogisticModel(ProbClassifier):
    weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    bias: float = 0.0
    feature_names: tuple[str, ...] = ()
    learning_rate: float = 0.1
    l2: float = 1e-4
    epochs_run: int = 0
    kind: str = "logistic"

    @property
    def parameter_count(self) -> int:
        return len(self.weights) + 1

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = self._check_width(X)
        return sigmoid(X @ self.weights + self.bias)


def train_logistic(train: FeatureMatrix, cfg: TrainConfig) -> LogisticModel:
    """Minimize BCE + l2*||w||^2 (bias unpenalized); deterministic, no randomness.

    Stops early once the gradient infinity-norm falls under a fixed
    tolerance, otherwise runs the configured epoch budget.
    """
    X, y = train.values, train.target.astype(np.float64)
    if len(np.unique(train.target)) < 2:
        raise ValueError("logistic training needs both classes present")
    n, m = X.shape
    w = np.zeros(m)
    b = 0.0
    lr, l2 = cfg.logistic_lr, cfg.logistic_l2
    epochs_run = 0
    for epoch in range(1, cfg.logistic_max_epochs + 1):
        z = X @ w + b
        loss = bce_from_logits(z, y) + l2 * float(w @ w)
        if not np.isfinite(loss):
            raise ValueError(f"logistic training diverged: non-finite loss at epoch {epoch}")
        resid = sigmoid(z) - y
        grad_w = X.T @ resid / n + 2.0 * l2 * w
        grad_b = float(resid.mean())
        w = w - lr * grad_w
        b = b - lr * grad_b
        epochs_run = epoch
        if max(np.abs(grad_w).max(initial=0.0), abs(grad_b)) < GRADIENT_TOL:
            break
    return LogisticModel(
        weights=w,
        bias=b,
        feature_names=tuple(train.column_names),
        learning_rate=lr,
        l2=l2,
        epochs_run=epochs_run,
    )
