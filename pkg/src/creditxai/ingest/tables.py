"""Raw loan tables: CSV loading, target derivation, macro merge, date features.

The raw table is kept columnar and text-valued until encoding; every row
drop is counted and reported rather than silent.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

# Column roles a schema file may declare. Undeclared columns are ignored.
ROLES = ("continuous", "categorical", "date", "target-source", "id", "ignore")

# LoanStatus -> default mapping. "Past Due" statuses are treated as default
# (conservative risk treatment); anything not covered here drops the row.
DEFAULT_STATUSES = frozenset({"Chargedoff", "Defaulted"})
NON_DEFAULT_STATUSES = frozenset({"Completed", "Current"})
PAST_DUE_MARKER = "Past Due"


@dataclass(frozen=True)
class Schema:
    """Column role declarations plus pipeline anchors.

    ``origination_date_column`` may be empty for tables without dates; the
    macro merge and date-feature steps then have nothing to do.
    """

    roles: dict[str, str]
    status_column: str
    origination_date_column: str = ""
    note: str = ""

    def __post_init__(self):
        for name, role in self.roles.items():
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r} for column {name!r}")
        if self.roles.get(self.status_column) != "target-source":
            raise ValueError(
                f"status column {self.status_column!r} must be declared target-source"
            )
        if self.origination_date_column and (
            self.roles.get(self.origination_date_column) != "date"
        ):
            raise ValueError(
                f"origination date column {self.origination_date_column!r} must be declared date"
            )


def load_schema(path: str | Path) -> Schema:
    import json

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"schema file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if raw.get("schema_version") != 1:
        raise ValueError(f"unsupported schema_version in {path}: {raw.get('schema_version')!r}")
    return Schema(
        roles=dict(raw["columns"]),
        status_column=raw["status_column"],
        origination_date_column=raw.get("origination_date_column", ""),
        note=raw.get("note", ""),
    )


@dataclass
class Column:
    name: str
    role: str
    cells: list[str] = field(default_factory=list)


@dataclass
class RawTable:
    """Ordered text columns with equal cell counts and unique names."""

    columns: list[Column]

    def __post_init__(self):
        names = [c.name for c in self.columns]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise ValueError(f"duplicate column name(s): {sorted(dupes)}")
        lengths = {len(c.cells) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError(f"columns have unequal lengths: {sorted(lengths)}")

    @property
    def n_rows(self) -> int:
        return len(self.columns[0].cells) if self.columns else 0

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def has_column(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def keep_rows(self, indices) -> "RawTable":
        return RawTable(
            [Column(c.name, c.role, [c.cells[i] for i in indices]) for c in self.columns]
        )


def load_csv(path: str | Path, schema: Schema) -> RawTable:
    """Parse an RFC-4180 CSV with header row into a RawTable.

    Declared columns get their schema role; undeclared ones are loaded with
    role ``ignore``. Ragged rows are rejected with their (1-based, header
    excluded) row index.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"data file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, header row required") from None
        dupes = {h for h in header if header.count(h) > 1}
        if dupes:
            raise ValueError(f"{path}: duplicate header name(s): {sorted(dupes)}")
        columns = [Column(h, schema.roles.get(h, "ignore")) for h in header]
        for i, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: ragged row {i}: expected {len(header)} cells, got {len(row)}"
                )
            for col, cell in zip(columns, row):
                col.cells.append(cell)
    missing = [n for n in schema.roles if not any(c.name == n for c in columns)]
    if missing:
        raise ValueError(f"{path}: declared column(s) missing from header: {missing}")
    return RawTable(columns)


def derive_target(table: RawTable, status_column: str) -> tuple[RawTable, list[int], dict[str, int]]:
    """Map loan statuses to the binary default target.

    Returns the table restricted to mappable rows, the {0,1} labels, and a
    count of dropped rows per unmapped status. Raises if nothing survives.
    """
    col = table.column(status_column)
    if col.role != "target-source":
        raise ValueError(f"column {status_column!r} has role {col.role!r}, expected target-source")
    keep: list[int] = []
    labels: list[int] = []
    dropped: dict[str, int] = {}
    for i, status in enumerate(col.cells):
        label = map_status(status)
        if label is None:
            dropped[status] = dropped.get(status, 0) + 1
        else:
            keep.append(i)
            labels.append(label)
    if not labels:
        raise ValueError("target derivation dropped every row; no mappable loan status found")
    return table.keep_rows(keep), labels, dropped


def map_status(status: str) -> int | None:
    """Pure status -> label mapping; None means the row is dropped."""
    if status in DEFAULT_STATUSES or PAST_DUE_MARKER in status:
        return 1
    if status in NON_DEFAULT_STATUSES:
        return 0
    return None


# --- macro series ---------------------------------------------------------


@dataclass(frozen=True)
class MacroSeries:
    """A monthly macro series; months are strictly increasing (year, month) keys."""

    name: str
    months: tuple[int, ...]  # year * 12 + (month - 1)
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.months:
            raise ValueError(f"macro series {self.name!r} is empty")
        if any(b <= a for a, b in zip(self.months, self.months[1:])):
            raise ValueError(f"macro series {self.name!r} months must be strictly increasing")

    def value_at(self, month: int) -> float | None:
        """Latest value at or before ``month``; None before the first point."""
        import bisect

        i = bisect.bisect_right(self.months, month) - 1
        return None if i < 0 else self.values[i]


def parse_month(text: str) -> int | None:
    """'YYYY-MM' or 'YYYY-MM-DD' -> month index; None when unparsable."""
    parts = text.strip().split("-")
    if len(parts) < 2:
        return None
    try:
        year, month = int(parts[0]), int(parts[1])
    except ValueError:
        return None
    if not 1 <= month <= 12:
        return None
    return year * 12 + (month - 1)


def load_macro_csv(path: str | Path, name: str | None = None) -> MacroSeries:
    """Two-column CSV (month 'YYYY-MM', value); series name defaults to the file stem."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"macro file not found: {path}")
    months, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty macro file")
        for i, row in enumerate(reader, start=1):
            if len(row) != 2:
                raise ValueError(f"{path}: macro row {i} must have 2 cells, got {len(row)}")
            month = parse_month(row[0])
            if month is None:
                raise ValueError(f"{path}: macro row {i}: bad month {row[0]!r}")
            months.append(month)
            values.append(float(row[1]))
    return MacroSeries(name or path.stem, tuple(months), tuple(values))


def merge_macro(
    table: RawTable, series: list[MacroSeries], date_column: str
) -> tuple[RawTable, int]:
    """Append one continuous column per series, valued as of loan origination month.

    A loan takes the latest series point whose month is <= its origination
    month (never a later one). Rows originating before a series starts, or
    with unparsable dates, are dropped and counted.
    """
    col = table.column(date_column)
    months = [parse_month(c) for c in col.cells]
    keep = []
    new_cells: list[list[str]] = [[] for _ in series]
    for i, m in enumerate(months):
        if m is None:
            continue
        vals = [s.value_at(m) for s in series]
        if any(v is None for v in vals):
            continue
        keep.append(i)
        for cells, v in zip(new_cells, vals):
            cells.append(repr(v))
    dropped = table.n_rows - len(keep)
    out = table.keep_rows(keep)
    for s, cells in zip(series, new_cells):
        if out.has_column(s.name):
            raise ValueError(f"macro series name collides with existing column: {s.name!r}")
        out.columns.append(Column(s.name, "continuous", cells))
    return out, dropped


def engineer_date_features(table: RawTable, origination_column: str) -> tuple[RawTable, list[str]]:
    """Replace date columns with month counts relative to origination.

    Each date column other than the origination date becomes a continuous
    column ``MonthsSince<col>`` = months from that date to the loan's
    origination month (so a long credit history shows up as a large value).
    The origination column itself is consumed here and dropped: its economic
    content enters through the merged macro series.
    """
    origin = [parse_month(c) for c in table.column(origination_column).cells]
    out_cols: list[Column] = []
    engineered: list[str] = []
    for c in table.columns:
        if c.role != "date":
            out_cols.append(c)
            continue
        if c.name == origination_column:
            continue
        cells = []
        for o, raw in zip(origin, c.cells):
            m = parse_month(raw)
            cells.append("" if (m is None or o is None) else str(o - m))
        name = f"MonthsSince{c.name}"
        out_cols.append(Column(name, "continuous", cells))
        engineered.append(name)
    return RawTable(out_cols), engineered
