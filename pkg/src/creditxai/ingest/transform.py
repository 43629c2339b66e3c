"""Feature-matrix construction: encoding, imputation, z-scoring, pruning, split.

All fitting statistics (levels, medians, means, stdevs, correlations) come
from the training rows only; test rows are transformed with those fitted
parameters so no test information leaks into them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..rng import STREAM_SPLIT, spawn_rng
from .tables import Column, RawTable

MISSING_LEVEL = "Missing"
MAX_CATEGORICAL_LEVELS = 64
DEFAULT_COLLINEAR_THRESHOLD = 0.85


@dataclass
class FeatureMatrix:
    """Numeric design matrix with column metadata and fitted scaling params.

    ``standardization`` maps a continuous column to the (mean, stdev) used to
    z-score it; it is empty until ``standardize`` has run. ``provenance``
    maps every encoded column back to its source column in the raw table.
    """

    values: np.ndarray
    column_names: tuple[str, ...]
    target: np.ndarray
    continuous_columns: tuple[str, ...]
    standardization: dict[str, tuple[float, float]] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)
    row_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.target = np.asarray(self.target, dtype=np.int64)
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-d matrix")
        if self.values.shape[1] != len(self.column_names):
            raise ValueError("column_names length does not match matrix width")
        if len(set(self.column_names)) != len(self.column_names):
            raise ValueError("column names must be unique")
        if self.target.shape != (self.values.shape[0],):
            raise ValueError("target length does not match row count")
        if not np.isfinite(self.values).all():
            raise ValueError("matrix contains non-finite entries")
        if not np.isin(self.target, (0, 1)).all():
            raise ValueError("target must be binary")
        if self.row_ids is not None and len(self.row_ids) != self.values.shape[0]:
            raise ValueError("row_ids length does not match row count")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_columns(self) -> int:
        return self.values.shape[1]

    def column_index(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def select_rows(self, indices) -> "FeatureMatrix":
        indices = np.asarray(indices)
        return FeatureMatrix(
            values=self.values[indices],
            column_names=self.column_names,
            target=self.target[indices],
            continuous_columns=self.continuous_columns,
            standardization=dict(self.standardization),
            provenance=dict(self.provenance),
            row_ids=None if self.row_ids is None else tuple(self.row_ids[i] for i in indices),
        )

    def select_columns(self, names) -> "FeatureMatrix":
        names = tuple(names)
        idx = [self.column_index(n) for n in names]
        return FeatureMatrix(
            values=self.values[:, idx],
            column_names=names,
            target=self.target,
            continuous_columns=tuple(n for n in self.continuous_columns if n in names),
            standardization={n: p for n, p in self.standardization.items() if n in names},
            provenance={n: s for n, s in self.provenance.items() if n in names},
            row_ids=self.row_ids,
        )


@dataclass(frozen=True)
class SplitPair:
    train: FeatureMatrix
    test: FeatureMatrix
    seed: int
    ratio: float


def encode_categoricals(
    table: RawTable,
    levels: dict[str, list[str]] | None = None,
    max_levels: int = MAX_CATEGORICAL_LEVELS,
) -> tuple[RawTable, dict[str, list[str]]]:
    """Replace each categorical column with one indicator column per level.

    With ``levels=None`` the observed levels are fitted from the table
    (missing cells become the explicit 'Missing' level, level order is
    sorted for determinism). With fitted ``levels`` the table is transformed:
    a row whose level was never fitted gets all-zero indicators.
    """
    fit = levels is None
    fitted: dict[str, list[str]] = {} if fit else dict(levels)
    out_cols: list[Column] = []
    for col in table.columns:
        if col.role != "categorical":
            out_cols.append(col)
            continue
        cells = [c if c.strip() else MISSING_LEVEL for c in col.cells]
        if fit:
            observed = sorted(set(cells))
            if len(observed) > max_levels:
                raise ValueError(
                    f"categorical column {col.name!r} has {len(observed)} levels "
                    f"(limit {max_levels})"
                )
            fitted[col.name] = observed
        for level in fitted.get(col.name, []):
            indicator = ["1" if c == level else "0" for c in cells]
            out_cols.append(Column(f"{col.name}={level}", "continuous", indicator))
    return RawTable(out_cols), fitted


def standardize(
    matrix: FeatureMatrix, fit_rows
) -> tuple[FeatureMatrix, list[str]]:
    """Z-score the continuous columns using statistics from ``fit_rows`` only.

    Columns with zero variance on the fitting rows are dropped first (and
    returned), since they carry no signal and cannot be scaled. The stdev is
    the population (1/n) form.
    """
    fit_rows = np.asarray(fit_rows)
    values = matrix.values.copy()
    params: dict[str, tuple[float, float]] = {}
    dropped: list[str] = []
    keep: list[str] = []
    for name in matrix.column_names:
        j = matrix.column_index(name)
        if name not in matrix.continuous_columns:
            keep.append(name)
            continue
        col_fit = values[fit_rows, j]
        mean = float(col_fit.mean())
        std = float(col_fit.std())  # population stdev
        if std == 0.0:
            dropped.append(name)
            continue
        values[:, j] = (values[:, j] - mean) / std
        params[name] = (mean, std)
        keep.append(name)
    idx = [matrix.column_index(n) for n in keep]
    out = FeatureMatrix(
        values=values[:, idx],
        column_names=tuple(keep),
        target=matrix.target,
        continuous_columns=tuple(n for n in matrix.continuous_columns if n in params),
        standardization=params,
        provenance={n: s for n, s in matrix.provenance.items() if n in keep},
        row_ids=matrix.row_ids,
    )
    return out, dropped


def inverse_standardize(matrix: FeatureMatrix) -> np.ndarray:
    """Values back in raw units: x = z * stdev + mean for fitted columns."""
    values = matrix.values.copy()
    for name, (mean, std) in matrix.standardization.items():
        j = matrix.column_index(name)
        values[:, j] = values[:, j] * std + mean
    return values


def destandardize_value(matrix: FeatureMatrix, name: str, z: float) -> float:
    if name in matrix.standardization:
        mean, std = matrix.standardization[name]
        return z * std + mean
    return z


def prune_collinear(
    matrix: FeatureMatrix,
    threshold: float = DEFAULT_COLLINEAR_THRESHOLD,
    fit_rows=None,
) -> tuple[FeatureMatrix, list[dict]]:
    """Greedy keep-first collinearity pruning in column order.

    A column is dropped when its absolute Pearson correlation (over the
    fitting rows) with any earlier retained column exceeds ``threshold``.
    Columns constant on the fitting rows are dropped too (correlation with
    them is undefined and they carry no signal). Returns the pruned matrix
    and a record per dropped column.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    fit_rows = np.arange(matrix.n_rows) if fit_rows is None else np.asarray(fit_rows)
    X = matrix.values[fit_rows]
    centered = X - X.mean(axis=0)
    norms = np.sqrt((centered**2).sum(axis=0))

    retained: list[int] = []
    drops: list[dict] = []
    for j, name in enumerate(matrix.column_names):
        if norms[j] == 0.0:
            drops.append({"column": name, "reason": "constant"})
            continue
        uj = centered[:, j] / norms[j]
        hit = None
        for i in retained:
            rho = float(np.dot(centered[:, i] / norms[i], uj))
            if abs(rho) > threshold:
                hit = (matrix.column_names[i], rho)
                break
        if hit is None:
            retained.append(j)
        else:
            drops.append(
                {"column": name, "reason": "collinear", "with": hit[0], "rho": hit[1]}
            )
    keep_names = tuple(matrix.column_names[j] for j in retained)
    return matrix.select_columns(keep_names), drops


def stratified_split_indices(
    target, ratio: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class shuffled allocation; both classes keep >= 1 row on each side."""
    target = np.asarray(target)
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"split ratio must be in (0, 1), got {ratio}")
    classes = np.unique(target)
    if classes.size < 2:
        raise ValueError("both classes must be present to split")
    train_parts, test_parts = [], []
    for c in classes:
        idx = np.flatnonzero(target == c)
        if idx.size < 2:
            raise ValueError(f"class {int(c)} has {idx.size} row(s); need at least 2")
        rng = spawn_rng(seed, STREAM_SPLIT, int(c))
        idx = rng.permutation(idx)
        n_train = int(math.floor(ratio * idx.size + 0.5))
        n_train = min(max(n_train, 1), idx.size - 1)
        train_parts.append(idx[:n_train])
        test_parts.append(idx[n_train:])
    train = np.sort(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return train, test


def split(matrix: FeatureMatrix, ratio: float, seed: int) -> SplitPair:
    """Deterministic stratified shuffle split of the rows."""
    train_idx, test_idx = stratified_split_indices(matrix.target, ratio, seed)
    return SplitPair(
        train=matrix.select_rows(train_idx),
        test=matrix.select_rows(test_idx),
        seed=seed,
        ratio=ratio,
    )


def parse_continuous(cells: list[str]) -> np.ndarray:
    """Text -> float with NaN for missing/unparsable cells."""
    out = np.empty(len(cells))
    for i, c in enumerate(cells):
        c = c.strip()
        if not c:
            out[i] = np.nan
            continue
        try:
            out[i] = float(c)
        except ValueError:
            out[i] = np.nan
    return out


def impute_medians(
    columns: dict[str, np.ndarray], fit_rows, medians: dict[str, float] | None = None
) -> tuple[dict[str, np.ndarray], dict[str, float], list[str]]:
    """Fill NaNs with the training-row median; all-NaN columns are dropped."""
    fit_rows = np.asarray(fit_rows)
    fit = medians is None
    fitted: dict[str, float] = {} if fit else dict(medians)
    out: dict[str, np.ndarray] = {}
    dropped: list[str] = []
    for name, col in columns.items():
        if fit:
            fit_vals = col[fit_rows]
            if np.isnan(fit_vals).all():
                dropped.append(name)
                continue
            fitted[name] = float(np.nanmedian(fit_vals))
        if name not in fitted:
            dropped.append(name)
            continue
        filled = col.copy()
        filled[np.isnan(filled)] = fitted[name]
        out[name] = filled
    return out, fitted, dropped
