"""End-to-end preparation: raw table -> standardized train/test matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tables import (
    MacroSeries,
    RawTable,
    Schema,
    derive_target,
    engineer_date_features,
    merge_macro,
)
from .transform import (
    DEFAULT_COLLINEAR_THRESHOLD,
    FeatureMatrix,
    SplitPair,
    encode_categoricals,
    impute_medians,
    parse_continuous,
    prune_collinear,
    standardize,
    stratified_split_indices,
)


@dataclass
class PreparedData:
    split: SplitPair
    meta: dict


def prepare_dataset(
    table: RawTable,
    macro: list[MacroSeries],
    schema: Schema,
    *,
    ratio: float = 0.8,
    seed: int = 42,
    collinear_threshold: float = DEFAULT_COLLINEAR_THRESHOLD,
) -> PreparedData:
    """Run the full preprocessing chain with train-only fitting.

    Order: macro merge (row drops), date feature engineering, target
    derivation (row drops), train/test index split, then median imputation,
    one-hot encoding, z-scoring, and collinearity pruning, all fitted on the
    training rows and applied to every row.
    """
    n_raw = table.n_rows
    if macro and not schema.origination_date_column:
        raise ValueError("macro series given but the schema names no origination date column")
    macro_dropped = 0
    engineered: list[str] = []
    if schema.origination_date_column:
        table, macro_dropped = merge_macro(table, macro, schema.origination_date_column)
        table, engineered = engineer_date_features(table, schema.origination_date_column)
    table, target, status_dropped = derive_target(table, schema.status_column)
    target = np.asarray(target)

    id_cols = [c for c in table.columns if c.role == "id"]
    row_ids = tuple(id_cols[0].cells) if id_cols else tuple(str(i) for i in range(len(target)))

    train_idx, test_idx = stratified_split_indices(target, ratio, seed)

    cont_cols = {
        c.name: parse_continuous(c.cells) for c in table.columns if c.role == "continuous"
    }
    cont_cols, medians, empty_dropped = impute_medians(cont_cols, train_idx)

    fit_table = table.keep_rows(list(train_idx))
    _, levels = encode_categoricals(fit_table)
    encoded, _ = encode_categoricals(table, levels)

    names: list[str] = []
    cols: list[np.ndarray] = []
    continuous: list[str] = []
    provenance: dict[str, str] = {}
    for c in encoded.columns:
        if c.role != "continuous":
            continue
        if "=" in c.name and c.name.split("=", 1)[0] in levels:
            source = c.name.split("=", 1)[0]
            col = parse_continuous(c.cells)
        elif c.name in cont_cols:
            source = c.name[len("MonthsSince"):] if c.name in engineered else c.name
            col = cont_cols[c.name]
            continuous.append(c.name)
        else:
            continue  # dropped as all-missing on train
        names.append(c.name)
        cols.append(col)
        provenance[c.name] = source

    matrix = FeatureMatrix(
        values=np.column_stack(cols) if cols else np.empty((len(target), 0)),
        column_names=tuple(names),
        target=target,
        continuous_columns=tuple(continuous),
        provenance=provenance,
        row_ids=row_ids,
    )
    matrix, zero_var_dropped = standardize(matrix, train_idx)
    matrix, prune_drops = prune_collinear(matrix, collinear_threshold, train_idx)

    pair = SplitPair(
        train=matrix.select_rows(train_idx),
        test=matrix.select_rows(test_idx),
        seed=seed,
        ratio=ratio,
    )
    meta = {
        "rows_raw": n_raw,
        "rows_kept": int(len(target)),
        "rows_dropped_macro": macro_dropped,
        "rows_dropped_status": status_dropped,
        "status_map": {
            "default": ["Chargedoff", "Defaulted", "Past Due (substring)"],
            "non_default": ["Completed", "Current"],
            "dropped": sorted(status_dropped),
        },
        "engineered_date_columns": engineered,
        "imputation_medians": medians,
        "columns_dropped_all_missing": empty_dropped,
        "categorical_levels": levels,
        "columns_dropped_zero_variance": zero_var_dropped,
        "columns_dropped_collinear": prune_drops,
        "collinear_threshold": collinear_threshold,
        "split": {"ratio": ratio, "seed": seed,
                  "train_rows": int(len(train_idx)), "test_rows": int(len(test_idx))},
        "default_rate": float(target.mean()),
    }
    return PreparedData(split=pair, meta=meta)
