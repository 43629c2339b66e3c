"""The three classifiers behind one probability-prediction contract."""

from .base import ProbClassifier, TrainConfig, bce_from_logits, predict_proba, sigmoid
from .forest import ForestModel, TreeNodes, train_forest, weighted_gini
from .logistic import LogisticModel, train_logistic
from .mlp import (
    DROPOUT_RATES,
    HIDDEN_SIZES,
    MlpModel,
    forward_logits,
    init_params,
    loss_and_grads,
    train_mlp,
)
from .serialize import load_model, save_model

MODEL_KINDS = ("logistic", "forest", "mlp")

TRAINERS = {
    "logistic": train_logistic,
    "forest": train_forest,
    "mlp": train_mlp,
}

__all__ = [
    "DROPOUT_RATES",
    "HIDDEN_SIZES",
    "MODEL_KINDS",
    "TRAINERS",
    "ForestModel",
    "LogisticModel",
    "MlpModel",
    "ProbClassifier",
    "TrainConfig",
    "TreeNodes",
    "bce_from_logits",
    "forward_logits",
    "init_params",
    "load_model",
    "loss_and_grads",
    "predict_proba",
    "save_model",
    "sigmoid",
    "train_forest",
    "train_logistic",
    "train_mlp",
    "weighted_gini",
]
