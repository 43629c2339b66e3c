"""Loan-data ingestion: raw CSV to standardized, pruned feature matrices."""

from .matrix_io import read_matrix_csv, read_prepared, write_matrix_csv, write_prepared
from .pipeline import PreparedData, prepare_dataset
from .tables import (
    Column,
    MacroSeries,
    RawTable,
    Schema,
    derive_target,
    engineer_date_features,
    load_csv,
    load_macro_csv,
    load_schema,
    map_status,
    merge_macro,
    parse_month,
)
from .transform import (
    FeatureMatrix,
    SplitPair,
    destandardize_value,
    encode_categoricals,
    impute_medians,
    inverse_standardize,
    parse_continuous,
    prune_collinear,
    split,
    standardize,
    stratified_split_indices,
)

__all__ = [
    "Column",
    "FeatureMatrix",
    "MacroSeries",
    "PreparedData",
    "RawTable",
    "Schema",
    "SplitPair",
    "derive_target",
    "destandardize_value",
    "encode_categoricals",
    "engineer_date_features",
    "impute_medians",
    "inverse_standardize",
    "load_csv",
    "load_macro_csv",
    "load_schema",
    "map_status",
    "merge_macro",
    "parse_continuous",
    "parse_month",
    "prepare_dataset",
    "prune_collinear",
    "read_matrix_csv",
    "read_prepared",
    "split",
    "standardize",
    "stratified_split_indices",
    "write_matrix_csv",
    "write_prepared",
]
