"""Random forest with class-weight-adjusted Gini splits, built from scratch.

Each tree is grown on a bootstrap sample of size n; every split examines
ceil(sqrt(m)) candidate features drawn without replacement. Class weights
w_c = n / (2 * n_c) rebalance the minority default class, and leaves store
the class-weighted default probability. The forest prediction is the plain
mean of leaf probabilities over trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..ingest.transform import FeatureMatrix
from ..rng import STREAM_TREE, spawn_rng
from .base import ProbClassifier, TrainConfig

LEAF = -1


@dataclass(frozen=True)
class TreeNodes:
    """One tree as flat arrays; ``feature == -1`` marks a leaf."""

    feature: np.ndarray  # int32
    threshold: np.ndarray  # float64, unused at leaves
    left: np.ndarray  # int32 child ids
    right: np.ndarray
    value: np.ndarray  # float64 leaf probability, unused at internal nodes

    def __len__(self) -> int:
        return len(self.feature)

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            feat = self.feature[node]
            active = feat != LEAF
            if not active.any():
                break
            rows = np.flatnonzero(active)
            f = feat[rows]
            go_left = X[rows, f] <= self.threshold[node[rows]]
            node[rows] = np.where(go_left, self.left[node[rows]], self.right[node[rows]])
        return self.value[node]


def weighted_gini(n0: float, n1: float, w0: float, w1: float) -> float:
    """Gini impurity of a node with class counts (n0, n1) under class weights."""
    W0, W1 = w0 * n0, w1 * n1
    total = W0 + W1
    if total == 0.0:
        return 0.0
    p0, p1 = W0 / total, W1 / total
    return 1.0 - p0 * p0 - p1 * p1


@dataclass(frozen=True)
class ForestModel(ProbClassifier):
    trees: tuple[TreeNodes, ...] = ()
    class_weights: tuple[float, float] = (1.0, 1.0)
    feature_names: tuple[str, ...] = ()
    kind: str = "forest"

    @property
    def parameter_count(self) -> int:
        return sum(len(t) for t in self.trees)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = self._check_width(X)
        total = np.zeros(X.shape[0])
        for tree in self.trees:
            total += tree.predict(X)
        return total / len(self.trees)


class _TreeBuilder:
    def __init__(self, X, y, w0, w1, n_candidates, max_depth, min_leaf, rng):
        self.X, self.y = X, y
        self.w0, self.w1 = w0, w1
        self.n_candidates = n_candidates
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def _new_node(self) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(0)
        self.right.append(0)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _leaf_value(self, idx) -> float:
        n1 = float(self.y[idx].sum())
        n0 = len(idx) - n1
        W0, W1 = self.w0 * n0, self.w1 * n1
        return W1 / (W0 + W1)

    def build(self, idx, depth: int) -> int:
        node = self._new_node()
        y = self.y[idx]
        n = len(idx)
        n1 = int(y.sum())
        pure = n1 == 0 or n1 == n
        if depth >= self.max_depth or n < 2 * self.min_leaf or pure:
            self.value[node] = self._leaf_value(idx)
            return node
        split = self._best_split(idx)
        if split is None:
            self.value[node] = self._leaf_value(idx)
            return node
        f, thr = split
        go_left = self.X[idx, f] <= thr
        self.feature[node] = f
        self.threshold[node] = thr
        self.left[node] = self.build(idx[go_left], depth + 1)
        self.right[node] = self.build(idx[~go_left], depth + 1)
        return node

    def _best_split(self, idx):
        m = self.X.shape[1]
        candidates = self.rng.choice(m, size=self.n_candidates, replace=False)
        y = self.y[idx].astype(np.float64)
        n = len(idx)
        best = None
        best_score = np.inf
        for f in candidates:
            x = self.X[idx, f]
            order = np.argsort(x, kind="stable")
            xs, ys = x[order], y[order]
            boundary = np.flatnonzero(xs[:-1] < xs[1:])  # split between i and i+1
            if boundary.size == 0:
                continue
            nL = boundary + 1
            nR = n - nL
            ok = (nL >= self.min_leaf) & (nR >= self.min_leaf)
            if not ok.any():
                continue
            boundary, nL, nR = boundary[ok], nL[ok], nR[ok]
            c1 = np.cumsum(ys)
            n1L = c1[boundary]
            n0L = nL - n1L
            n1R = c1[-1] - n1L
            n0R = nR - n1R
            W0L, W1L = self.w0 * n0L, self.w1 * n1L
            W0R, W1R = self.w0 * n0R, self.w1 * n1R
            WL, WR = W0L + W1L, W0R + W1R
            gL = 1.0 - (W0L / WL) ** 2 - (W1L / WL) ** 2
            gR = 1.0 - (W0R / WR) ** 2 - (W1R / WR) ** 2
            score = (WL * gL + WR * gR) / (WL + WR)
            k = int(np.argmin(score))
            if score[k] < best_score:
                best_score = float(score[k])
                b = boundary[k]
                best = (int(f), float((xs[b] + xs[b + 1]) / 2.0))
        return best

    def finish(self) -> TreeNodes:
        return TreeNodes(
            feature=np.asarray(self.feature, dtype=np.int32),
            threshold=np.asarray(self.threshold),
            left=np.asarray(self.left, dtype=np.int32),
            right=np.asarray(self.right, dtype=np.int32),
            value=np.asarray(self.value),
        )


def train_forest(train: FeatureMatrix, cfg: TrainConfig) -> ForestModel:
    X, y = train.values, train.target
    n, m = X.shape
    counts = np.bincount(y, minlength=2)
    if n < 2 or counts.min() == 0:
        raise ValueError("forest training needs n >= 2 with both classes present")
    w0 = n / (2.0 * counts[0])
    w1 = n / (2.0 * counts[1])
    n_candidates = min(m, math.ceil(math.sqrt(m)))
    trees = []
    for t in range(cfg.n_trees):
        rng = spawn_rng(cfg.seed, STREAM_TREE, t)
        sample = rng.integers(0, n, size=n)
        builder = _TreeBuilder(
            X, y, w0, w1, n_candidates, cfg.max_depth, cfg.min_leaf, rng
        )
        builder.build(sample, depth=0)
        trees.append(builder.finish())
    return ForestModel(
        trees=tuple(trees),
        class_weights=(w0, w1),
        feature_names=tuple(train.column_names),
    )
