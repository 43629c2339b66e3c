"""Persistence for prepared matrices: CSV values + JSON metadata sidecar.

Floats are written with ``repr`` so the round trip is bit-exact and reruns
produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .transform import FeatureMatrix, SplitPair

SIDECAR_VERSION = 1
ROW_ID_COLUMN = "__row_id__"
TARGET_COLUMN = "__target__"


def write_matrix_csv(matrix: FeatureMatrix, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([ROW_ID_COLUMN, TARGET_COLUMN, *matrix.column_names])
        ids = matrix.row_ids or tuple(str(i) for i in range(matrix.n_rows))
        for rid, y, row in zip(ids, matrix.target, matrix.values):
            writer.writerow([rid, str(int(y)), *[repr(float(v)) for v in row]])


def read_matrix_csv(path: str | Path, meta: dict) -> FeatureMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != [ROW_ID_COLUMN, TARGET_COLUMN]:
            raise ValueError(f"{path}: not a prepared-matrix file")
        names = tuple(header[2:])
        ids, targets, rows = [], [], []
        for row in reader:
            ids.append(row[0])
            targets.append(int(row[1]))
            rows.append([float(v) for v in row[2:]])
    standardization = {
        name: (float(m), float(s)) for name, (m, s) in meta["standardization"].items()
    }
    return FeatureMatrix(
        values=np.asarray(rows) if rows else np.empty((0, len(names))),
        column_names=names,
        target=np.asarray(targets, dtype=np.int64),
        continuous_columns=tuple(n for n in names if n in standardization),
        standardization=standardization,
        provenance=dict(meta["provenance"]),
        row_ids=tuple(ids),
    )


def write_prepared(split: SplitPair, meta: dict, outdir: str | Path) -> dict:
    """Write train.csv / test.csv / meta.json; returns the full sidecar dict."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_matrix_csv(split.train, outdir / "train.csv")
    write_matrix_csv(split.test, outdir / "test.csv")
    sidecar = {
        "sidecar_version": SIDECAR_VERSION,
        "column_names": list(split.train.column_names),
        "standardization": {k: list(v) for k, v in split.train.standardization.items()},
        "provenance": dict(split.train.provenance),
        **meta,
    }
    with open(outdir / "meta.json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")
    return sidecar


def read_prepared(outdir: str | Path) -> tuple[SplitPair, dict]:
    outdir = Path(outdir)
    meta_path = outdir / "meta.json"
    if not meta_path.exists():
        raise FileNotFoundError(f"no prepared data at {outdir} (meta.json missing)")
    with open(meta_path, encoding="utf-8") as fh:
        meta = json.load(fh)
    if meta.get("sidecar_version") != SIDECAR_VERSION:
        raise ValueError(f"{meta_path}: unsupported sidecar_version {meta.get('sidecar_version')!r}")
    train = read_matrix_csv(outdir / "train.csv", meta)
    test = read_matrix_csv(outdir / "test.csv", meta)
    pair = SplitPair(
        train=train, test=test,
        seed=int(meta["split"]["seed"]), ratio=float(meta["split"]["ratio"]),
    )
    return pair, meta
