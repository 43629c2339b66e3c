"""Shared probability-prediction contract and training configuration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ingest.transform import FeatureMatrix


@dataclass(frozen=True)
class TrainConfig:
    """One knob set for all three trainers; unused fields are ignored per kind."""

    seed: int = 42
    # mlp
    batch_size: int = 256
    max_epochs: int = 100
    validation_fraction: float = 0.1
    patience: int = 5
    min_delta: float = 0.0
    adam_lr: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    # logistic (full-batch gradient descent)
    logistic_lr: float = 0.1
    logistic_l2: float = 1e-4
    logistic_max_epochs: int = 500
    # forest
    n_trees: int = 100
    max_depth: int = 16
    min_leaf: int = 5

    def __post_init__(self):
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ValueError("validation_fraction must be in (0, 1)")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError("batch_size and max_epochs must be positive")


class ProbClassifier:
    """Base for trained models: deterministic probabilities in [0, 1].

    Subclasses set ``kind`` and ``feature_names`` and implement
    ``predict_proba`` over a plain (n, m) array aligned with those names.
    """

    kind: str = ""
    feature_names: tuple[str, ...] = ()

    @property
    def trained(self) -> bool:
        return True

    @property
    def parameter_count(self) -> int:
        raise NotImplementedError

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_width(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise ValueError(
                f"{self.kind}: expected {len(self.feature_names)} feature column(s), "
                f"got shape {X.shape}"
            )
        return X


def predict_proba(model: ProbClassifier, rows: FeatureMatrix) -> np.ndarray:
    """Predict on a FeatureMatrix, enforcing the fit-time column contract."""
    if rows.column_names != tuple(model.feature_names):
        missing = [n for n in model.feature_names if n not in rows.column_names]
        extra = [n for n in rows.column_names if n not in model.feature_names]
        detail = []
        if missing:
            detail.append(f"missing: {missing}")
        if extra:
            detail.append(f"unexpected: {extra}")
        if not detail:
            detail.append("column order differs from fit-time order")
        raise ValueError(f"{model.kind}: feature columns do not match fit ({'; '.join(detail)})")
    return model.predict_proba(rows.values)


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def bce_from_logits(z: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy computed from logits (smooth and stable)."""
    # log(1 + e^z) - y*z, rewritten to avoid overflow for |z| large
    loss = np.maximum(z, 0.0) - y * z + np.log1p(np.exp(-np.abs(z)))
    return float(loss.mean())
