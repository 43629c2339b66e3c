"""Model container files: versioned JSON with base64-packed arrays.

Layout (documented for interoperability):

    {"format": "creditxai-model", "format_version": 1,
     "kind": "logistic" | "forest" | "mlp",
     "feature_names": [...],
     "payload": {... kind-specific ...}}

Arrays are ``{"dtype": "<f8"|"<i4", "shape": [...], "data": base64}`` with
little-endian raw bytes, so a round trip is bit-exact. Kind payloads:

    logistic: weights (array), bias, learning_rate, l2, epochs_run
    forest:   class_weights [w0, w1], trees: list of
              {feature, threshold, left, right, value} node arrays
              (feature -1 marks a leaf; left/right are node ids)
    mlp:      weights (list of arrays), biases (list of arrays),
              dropout_rates, epochs_run, best_epoch, validation_losses
"""

from __future__ import annotations

import base64
import json
from pathlib import Path

import numpy as np

from .base import ProbClassifier
from .forest import ForestModel, TreeNodes
from .logistic import LogisticModel
from .mlp import MlpModel

FORMAT = "creditxai-model"
FORMAT_VERSION = 1


def _pack(arr: np.ndarray) -> dict:
    arr = np.ascontiguousarray(arr)
    if arr.dtype == np.float64:
        dtype = "<f8"
    elif arr.dtype == np.int32:
        dtype = "<i4"
    else:
        raise ValueError(f"unsupported array dtype {arr.dtype}")
    data = arr.astype(dtype, copy=False).tobytes()
    return {
        "dtype": dtype,
        "shape": list(arr.shape),
        "data": base64.b64encode(data).decode("ascii"),
    }


def _unpack(obj: dict) -> np.ndarray:
    data = base64.b64decode(obj["data"])
    arr = np.frombuffer(data, dtype=np.dtype(obj["dtype"]))
    return arr.reshape(obj["shape"]).copy()


def save_model(model: ProbClassifier, path: str | Path) -> None:
    if model.kind == "logistic":
        payload = {
            "weights": _pack(model.weights),
            "bias": model.bias,
            "learning_rate": model.learning_rate,
            "l2": model.l2,
            "epochs_run": model.epochs_run,
        }
    elif model.kind == "forest":
        payload = {
            "class_weights": list(model.class_weights),
            "trees": [
                {
                    "feature": _pack(t.feature),
                    "threshold": _pack(t.threshold),
                    "left": _pack(t.left),
                    "right": _pack(t.right),
                    "value": _pack(t.value),
                }
                for t in model.trees
            ],
        }
    elif model.kind == "mlp":
        payload = {
            "weights": [_pack(W) for W in model.weights],
            "biases": [_pack(b) for b in model.biases],
            "dropout_rates": list(model.dropout_rates),
            "epochs_run": model.epochs_run,
            "best_epoch": model.best_epoch,
            "validation_losses": list(model.validation_losses),
        }
    else:
        raise ValueError(f"cannot serialize model kind {model.kind!r}")
    doc = {
        "format": FORMAT,
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "feature_names": list(model.feature_names),
        "payload": payload,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False)
        fh.write("\n")


def load_model(path: str | Path) -> ProbClassifier:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not a valid model file ({exc})") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise ValueError(f"{path}: not a {FORMAT} file")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(
            f"{path}: unsupported format_version {doc.get('format_version')!r} "
            f"(expected {FORMAT_VERSION})"
        )
    kind = doc["kind"]
    names = tuple(doc["feature_names"])
    payload = doc["payload"]
    if kind == "logistic":
        return LogisticModel(
            weights=_unpack(payload["weights"]),
            bias=float(payload["bias"]),
            feature_names=names,
            learning_rate=float(payload["learning_rate"]),
            l2=float(payload["l2"]),
            epochs_run=int(payload["epochs_run"]),
        )
    if kind == "forest":
        trees = tuple(
            TreeNodes(
                feature=_unpack(t["feature"]),
                threshold=_unpack(t["threshold"]),
                left=_unpack(t["left"]),
                right=_unpack(t["right"]),
                value=_unpack(t["value"]),
            )
            for t in payload["trees"]
        )
        w0, w1 = payload["class_weights"]
        return ForestModel(trees=trees, class_weights=(w0, w1), feature_names=names)
    if kind == "mlp":
        return MlpModel(
            weights=tuple(_unpack(W) for W in payload["weights"]),
            biases=tuple(_unpack(b) for b in payload["biases"]),
            feature_names=names,
            dropout_rates=tuple(payload["dropout_rates"]),
            epochs_run=int(payload["epochs_run"]),
            best_epoch=int(payload["best_epoch"]),
            validation_losses=tuple(payload["validation_losses"]),
        )
    raise ValueError(f"{path}: unknown model kind {kind!r}")
