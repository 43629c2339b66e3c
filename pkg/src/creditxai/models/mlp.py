"""Feedforward net (64-32-16 relu, sigmoid head) trained with Adam.

Inverted dropout (0.3 after the first hidden layer, 0.2 after the second)
regularizes training; inference never applies dropout. Early stopping
monitors validation BCE with a fixed patience and the returned model carries
the best-validation checkpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..ingest.transform import FeatureMatrix
from ..rng import STREAM_MLP_DROPOUT, STREAM_MLP_INIT, STREAM_MLP_SHUFFLE, spawn_rng
from .base import ProbClassifier, TrainConfig, bce_from_logits, sigmoid

HIDDEN_SIZES = (64, 32, 16)
DROPOUT_RATES = (0.3, 0.2)  # after hidden layers 1 and 2


@dataclass(frozen=True)
class MlpModel(ProbClassifier):
    weights: tuple[np.ndarray, ...] = ()
    biases: tuple[np.ndarray, ...] = ()
    feature_names: tuple[str, ...] = ()
    dropout_rates: tuple[float, float] = DROPOUT_RATES
    epochs_run: int = 0
    best_epoch: int = 0
    validation_losses: tuple[float, ...] = ()
    kind: str = "mlp"

    @property
    def parameter_count(self) -> int:
        return int(sum(W.size for W in self.weights) + sum(b.size for b in self.biases))

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = self._check_width(X)
        z = forward_logits(self.weights, self.biases, X)
        return sigmoid(z)[:, 0]


def init_params(m: int, seed: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """He-scaled Gaussian init for relu layers, smaller scale for the head."""
    rng = spawn_rng(seed, STREAM_MLP_INIT)
    sizes = (m, *HIDDEN_SIZES, 1)
    weights, biases = [], []
    for i, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:])):
        scale = np.sqrt(2.0 / fan_in) if i < len(HIDDEN_SIZES) else np.sqrt(1.0 / fan_in)
        weights.append(rng.normal(0.0, scale, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def forward_logits(weights, biases, X: np.ndarray, masks=None) -> np.ndarray:
    """Forward pass to output logits; ``masks`` are inverted-dropout multipliers."""
    a = X
    for i in range(len(HIDDEN_SIZES)):
        a = np.maximum(a @ weights[i] + biases[i], 0.0)
        if masks is not None and i < len(masks) and masks[i] is not None:
            a = a * masks[i]
    return a @ weights[-1] + biases[-1]


def loss_and_grads(weights, biases, X, y, masks=None):
    """Mean BCE loss and its exact gradients for one batch.

    ``masks`` (inverted dropout multipliers for hidden layers 1 and 2) are
    optional; without them the pass is deterministic and smooth, which is
    what the finite-difference check exercises.
    """
    B = X.shape[0]
    y = y.reshape(B, 1).astype(np.float64)
    zs, acts = [], [X]
    a = X
    for i in range(len(HIDDEN_SIZES)):
        z = a @ weights[i] + biases[i]
        a = np.maximum(z, 0.0)
        if masks is not None and i < len(masks) and masks[i] is not None:
            a = a * masks[i]
        zs.append(z)
        acts.append(a)
    z_out = a @ weights[-1] + biases[-1]
    loss = bce_from_logits(z_out, y)

    grad_w = [np.empty_like(W) for W in weights]
    grad_b = [np.empty_like(b) for b in biases]
    delta = (sigmoid(z_out) - y) / B
    grad_w[-1] = acts[-1].T @ delta
    grad_b[-1] = delta.sum(axis=0)
    upstream = delta @ weights[-1].T
    for i in reversed(range(len(HIDDEN_SIZES))):
        if masks is not None and i < len(masks) and masks[i] is not None:
            upstream = upstream * masks[i]
        delta = upstream * (zs[i] > 0.0)
        grad_w[i] = acts[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            upstream = delta @ weights[i].T
    return loss, grad_w, grad_b


@dataclass
class _AdamState:
    cfg: TrainConfig
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)
    t: int = 0

    def init(self, params):
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, params, grads):
        cfg = self.cfg
        self.t += 1
        b1, b2 = cfg.adam_beta1, cfg.adam_beta2
        for i, (p, g) in enumerate(zip(params, grads)):
            self.m[i] = b1 * self.m[i] + (1 - b1) * g
            self.v[i] = b2 * self.v[i] + (1 - b2) * g * g
            m_hat = self.m[i] / (1 - b1**self.t)
            v_hat = self.v[i] / (1 - b2**self.t)
            p -= cfg.adam_lr * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)


def train_mlp(train: FeatureMatrix, cfg: TrainConfig) -> MlpModel:
    X, y = train.values, train.target.astype(np.float64)
    n, m = X.shape
    if n < 10 / cfg.validation_fraction:
        raise ValueError(
            f"mlp training needs n >= {10 / cfg.validation_fraction:.0f} rows "
            f"for a validation split, got {n}"
        )
    shuffle_rng = spawn_rng(cfg.seed, STREAM_MLP_SHUFFLE)
    dropout_rng = spawn_rng(cfg.seed, STREAM_MLP_DROPOUT)
    perm = shuffle_rng.permutation(n)
    n_val = max(1, int(round(cfg.validation_fraction * n)))
    val_idx, fit_idx = perm[:n_val], perm[n_val:]
    X_fit, y_fit = X[fit_idx], y[fit_idx]
    X_val, y_val = X[val_idx], y[val_idx].reshape(-1, 1)

    weights, biases = init_params(m, cfg.seed)
    adam = _AdamState(cfg)
    adam.init(weights + biases)

    best_loss = np.inf
    best_epoch = 0
    best = None
    wait = 0
    val_history: list[float] = []
    epochs_run = 0
    for epoch in range(1, cfg.max_epochs + 1):
        order = shuffle_rng.permutation(len(fit_idx))
        for start in range(0, len(order), cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            Xb, yb = X_fit[batch], y_fit[batch]
            masks = []
            for size, rate in zip(HIDDEN_SIZES[:2], DROPOUT_RATES):
                keep = dropout_rng.random((len(batch), size)) >= rate
                masks.append(keep / (1.0 - rate))
            loss, gw, gb = loss_and_grads(weights, biases, Xb, yb, masks)
            if not np.isfinite(loss):
                raise ValueError(f"mlp training diverged: non-finite loss at epoch {epoch}")
            adam.step(weights + biases, gw + gb)
        val_loss = bce_from_logits(forward_logits(weights, biases, X_val), y_val)
        if not np.isfinite(val_loss):
            raise ValueError(f"mlp training diverged: non-finite validation loss at epoch {epoch}")
        val_history.append(val_loss)
        epochs_run = epoch
        if val_loss < best_loss - cfg.min_delta:
            best_loss = val_loss
            best_epoch = epoch
            best = ([W.copy() for W in weights], [b.copy() for b in biases])
            wait = 0
        else:
            wait += 1
            if wait >= cfg.patience:
                break
    weights, biases = best
    return MlpModel(
        weights=tuple(weights),
        biases=tuple(biases),
        feature_names=tuple(train.column_names),
        epochs_run=epochs_run,
        best_epoch=best_epoch,
        validation_losses=tuple(val_history),
    )
