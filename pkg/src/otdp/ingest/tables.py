"""Parsed-table model: cells, column schema, label selection, readiness.

Cells are kept as the raw text that came out of the file so that parsing is
loss-free; missingness is a predicate over that text, not a sentinel value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from ..errors import NoLabelError, ParseError

ColumnKind = Literal["numeric", "categorical", "missing-only"]

#: Column names that mark a label column when no explicit hint is given.
LABEL_NAME_HINTS = ("label", "class", "attack", "category", "type", "result")

#: Label values treated as benign by default (compared case-insensitively,
#: whitespace-trimmed).  Everything else counts as malicious.
DEFAULT_BENIGN_ALIASES = ("benign", "normal", "0", "false", "good", "natural")

_MISSING_EXACT = frozenset({"", "?", "NaN", "nan"})


def is_missing(cell: str) -> bool:
    """True for empty cells and the literal missing markers '?' and 'NaN'."""
    if cell in _MISSING_EXACT:
        return True
    s = cell.strip()
    return s in ("", "?") or s.lower() == "nan"


def missing_mask(values: Sequence[str]) -> np.ndarray:
    """Vectorised `is_missing` over one column."""
    arr = np.asarray(values, dtype=np.str_)
    stripped = np.char.strip(arr)
    return (stripped == "") | (stripped == "?") | (np.char.lower(stripped) == "nan")


@dataclass(frozen=True)
class ColumnMeta:
    """Schema for one column.

    `distinct_count` and `missing_count` are computed over the column's cells;
    distinct values are counted among non-missing cells only.
    """

    name: str
    kind: ColumnKind
    distinct_count: int
    missing_count: int


@dataclass(frozen=True)
class LabelSpec:
    """Which column carries the label and which values mean benign."""

    column_index: int
    benign_aliases: frozenset[str] = frozenset(DEFAULT_BENIGN_ALIASES)
    positive_class_name: str = "malicious"

    def __post_init__(self):
        if not self.benign_aliases:
            raise ValueError("benign_aliases must be non-empty")

    def is_benign(self, cell: str) -> bool:
        return cell.strip().lower() in self.benign_aliases


def make_label_spec(column_index: int, benign_aliases: Sequence[str] | None = None) -> LabelSpec:
    aliases = DEFAULT_BENIGN_ALIASES if benign_aliases is None else benign_aliases
    return LabelSpec(column_index, frozenset(a.strip().lower() for a in aliases))


@dataclass
class RawTable:
    """A parsed tabular file: raw text cells plus per-column schema."""

    source_name: str
    format: Literal["csv", "arff"]
    columns: tuple[ColumnMeta, ...]
    rows: list[list[str]]
    n_rows: int
    n_cols: int
    _column_cache: Optional[tuple[tuple[str, ...], ...]] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        if self.n_rows < 1:
            raise ParseError(f"{self.source_name}: table has no data rows")
        if self.n_cols < 2:
            raise ParseError(
                f"{self.source_name}: need at least 2 columns "
                f"(one feature and one label candidate), found {self.n_cols}"
            )
        if len(self.rows) != self.n_rows or len(self.columns) != self.n_cols:
            raise ParseError(f"{self.source_name}: row/column counts do not match data")
        for i, row in enumerate(self.rows):
            if len(row) != self.n_cols:
                raise ParseError(
                    f"row {i + 1}: expected {self.n_cols} cells, found {len(row)}"
                )

    def column_values(self, index: int) -> tuple[str, ...]:
        """All cells of one column, in row order."""
        if self._column_cache is None:
            self._column_cache = tuple(zip(*self.rows))
        return self._column_cache[index]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)


def infer_columns(
    rows: Sequence[Sequence[str]],
    names: Sequence[str],
    declared_kinds: Sequence[ColumnKind] | None = None,
) -> tuple[ColumnMeta, ...]:
    """Build ColumnMeta for every column.

    A column is numeric exactly when every non-missing cell parses as a finite
    real number; mixed columns fall back to categorical.  Declared kinds (from
    formats that carry them) override the parse rule, except that a column
    without any non-missing cell is always `missing-only`.
    """
    metas = []
    cols = list(zip(*rows)) if rows else []
    for j, name in enumerate(names):
        values = np.asarray(cols[j], dtype=np.str_)
        mask = missing_mask(values)
        present = values[~mask]
        n_missing = int(mask.sum())
        n_distinct = int(np.unique(present).size)
        if present.size == 0:
            kind: ColumnKind = "missing-only"
        elif declared_kinds is not None:
            kind = declared_kinds[j]
        else:
            kind = "numeric" if _all_finite_numbers(present) else "categorical"
        metas.append(ColumnMeta(name, kind, n_distinct, n_missing))
    return tuple(metas)


def _all_finite_numbers(values: np.ndarray) -> bool:
    try:
        parsed = values.astype(np.float64)
    except ValueError:
        return False
    return bool(np.isfinite(parsed).all())


def infer_schema(
    table: RawTable,
    label_hint: str | None = None,
    benign_aliases: Sequence[str] | None = None,
) -> tuple[tuple[ColumnMeta, ...], LabelSpec]:
    """Pick the label column and return the table schema with it.

    Preference order: the explicit hint, then the last column whose name
    matches a known label name, then the last column.  Raises when every
    column is constant (nothing can serve as a label).
    """
    columns = table.columns
    if all(c.distinct_count <= 1 for c in columns):
        raise NoLabelError(
            f"{table.source_name}: no column usable as label "
            "(all columns constant after missing removal)"
        )
    if label_hint is not None:
        wanted = label_hint.strip().lower()
        for j, c in enumerate(columns):
            if c.name.strip().lower() == wanted:
                return columns, make_label_spec(j, benign_aliases)
        raise NoLabelError(
            f"{table.source_name}: label hint {label_hint!r} does not match any column "
            f"(columns: {', '.join(table.column_names)})"
        )
    label_index = table.n_cols - 1
    for j in range(table.n_cols - 1, -1, -1):
        if columns[j].name.strip().lower() in LABEL_NAME_HINTS:
            label_index = j
            break
    return columns, make_label_spec(label_index, benign_aliases)


@dataclass(frozen=True)
class ReadinessVerdict:
    ready: bool
    reasons: tuple[str, ...] = ()


def check_ml_ready(table: RawTable, spec: LabelSpec) -> ReadinessVerdict:
    """Judge whether the table can feed a classifier directly.

    Ready means: the label column has at least two distinct values, at least
    one feature column carries data, and both a benign-aliased and a
    non-benign label value occur.
    """
    reasons: list[str] = []
    label_meta = table.columns[spec.column_index]
    if label_meta.distinct_count < 2:
        reasons.append("single-class labels")
    feature_ok = any(
        c.kind != "missing-only"
        for j, c in enumerate(table.columns)
        if j != spec.column_index
    )
    if not feature_ok:
        reasons.append("no usable feature column")
    label_values = table.column_values(spec.column_index)
    seen_benign = False
    seen_malicious = False
    for cell in label_values:
        if is_missing(cell):
            continue
        if spec.is_benign(cell):
            seen_benign = True
        else:
            seen_malicious = True
        if seen_benign and seen_malicious:
            break
    if not seen_benign:
        reasons.append("no benign-aliased label value")
    if not seen_malicious:
        reasons.append("no malicious label value")
    return ReadinessVerdict(ready=not reasons, reasons=tuple(reasons))
