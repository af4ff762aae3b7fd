"""Table cleaning, label binarization, imbalance ratio, sampling, encoding.

Everything here is a pure function of its inputs plus the seed; all sampling
runs on the portable generator in `otdp.rng` so results reproduce exactly
across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    EmptyAfterCleanError,
    InsufficientClassError,
    NoFeaturesError,
    SingleClassError,
)
from .ingest.tables import ColumnMeta, LabelSpec, RawTable, missing_mask
from .rng import derive_stream

_SAMPLE_STREAM_TAG = 0x5A4D50


@dataclass(frozen=True)
class SamplingConfig:
    """Target sample size and seed for the ratio-preserving draw."""

    k: int = 1000
    seed: int = 42

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"sample size k must be >= 2, got {self.k}")


@dataclass(frozen=True)
class ImbalanceStat:
    """Class counts and their ratio (majority count over minority count)."""

    n_benign: int
    n_malicious: int
    ir: float

    @classmethod
    def from_counts(cls, n_benign: int, n_malicious: int) -> "ImbalanceStat":
        if n_benign < 1 or n_malicious < 1:
            raise SingleClassError(
                "imbalance ratio undefined: both classes must have at least one row "
                f"(benign={n_benign}, malicious={n_malicious})"
            )
        majority = max(n_benign, n_malicious)
        minority = min(n_benign, n_malicious)
        return cls(n_benign, n_malicious, majority / minority)


def imbalance_ratio(y: np.ndarray) -> ImbalanceStat:
    """Majority-class count divided by minority-class count (>= 1)."""
    y = np.asarray(y)
    return ImbalanceStat.from_counts(int((y == 0).sum()), int((y == 1).sum()))


@dataclass(frozen=True)
class CleanResult:
    """A cleaned table plus what was removed to produce it."""

    table: RawTable
    label_spec: LabelSpec
    dropped_rows: int
    dropped_columns: tuple[str, ...]
    kept_row_indices: np.ndarray = field(compare=False)


def clean(table: RawTable, spec: LabelSpec) -> CleanResult:
    """Drop missing-only columns, then every row with any missing cell.

    The label column is never dropped; if all its cells are missing every row
    goes with them and the result is an error.  The returned label spec is
    remapped to the surviving column layout, and `kept_row_indices` records
    the original position of each surviving row.
    """
    keep_cols = [
        j
        for j, meta in enumerate(table.columns)
        if meta.kind != "missing-only" or j == spec.column_index
    ]
    if len(keep_cols) < 2:
        raise NoFeaturesError(
            f"{table.source_name}: only the label column survives cleaning"
        )
    dropped_columns = tuple(
        table.columns[j].name for j in range(table.n_cols) if j not in set(keep_cols)
    )

    # Only columns that actually contain missing cells can disqualify a row.
    row_bad = np.zeros(table.n_rows, dtype=bool)
    for j in keep_cols:
        if table.columns[j].missing_count:
            row_bad |= missing_mask(table.column_values(j))
    kept = np.flatnonzero(~row_bad)
    if kept.size == 0:
        raise EmptyAfterCleanError(
            f"{table.source_name}: every row contains a missing cell"
        )

    if not dropped_columns and not row_bad.any():
        return CleanResult(
            table=table,
            label_spec=spec,
            dropped_rows=0,
            dropped_columns=(),
            kept_row_indices=kept,
        )

    if dropped_columns:
        rows = [[table.rows[i][j] for j in keep_cols] for i in kept]
    else:
        rows = [table.rows[i] for i in kept]
    names = [table.columns[j].name for j in keep_cols]
    declared = [table.columns[j].kind for j in keep_cols]
    columns = _recount_columns(rows, names, declared)
    cleaned = RawTable(
        source_name=table.source_name,
        format=table.format,
        columns=columns,
        rows=rows,
        n_rows=len(rows),
        n_cols=len(keep_cols),
    )
    new_label_index = keep_cols.index(spec.column_index)
    new_spec = LabelSpec(
        column_index=new_label_index,
        benign_aliases=spec.benign_aliases,
        positive_class_name=spec.positive_class_name,
    )
    return CleanResult(
        table=cleaned,
        label_spec=new_spec,
        dropped_rows=int(table.n_rows - kept.size),
        dropped_columns=dropped_columns,
        kept_row_indices=kept,
    )


def _recount_columns(rows, names, declared_kinds) -> tuple[ColumnMeta, ...]:
    # Kinds were decided on the full table and survive cleaning; the cleaned
    # rows have no missing cells, so only the distinct counts need a pass.
    cols = list(zip(*rows))
    return tuple(
        ColumnMeta(
            name,
            declared_kinds[j],
            int(np.unique(np.asarray(cols[j], dtype=np.str_)).size),
            0,
        )
        for j, name in enumerate(names)
    )


def binarize_labels(table: RawTable, spec: LabelSpec) -> np.ndarray:
    """0 for benign-aliased label cells, 1 for everything else.

    Attack flags of any kind collapse to the positive class; matching is
    case-insensitive and whitespace-trimmed.  Raises when only one class
    results.
    """
    labels = table.column_values(spec.column_index)
    y = np.fromiter(
        (0 if spec.is_benign(cell) else 1 for cell in labels),
        dtype=np.int8,
        count=len(labels),
    )
    if (y == 0).all() or (y == 1).all():
        raise SingleClassError(
            f"{table.source_name}: labels binarize to a single class; "
            "check --benign-alias values"
        )
    return y


@dataclass(frozen=True)
class SampleResult:
    rows: list
    y: np.ndarray
    indices: np.ndarray  # positions into the input rows, ascending


def stratified_sample(
    rows: Sequence,
    y: np.ndarray,
    config: SamplingConfig = SamplingConfig(),
) -> SampleResult:
    """Draw k rows without replacement, preserving the class ratio.

    The benign share is rounded half-up to an integer and clamped so that at
    least 2 rows of each class survive.  With k >= len(rows) the input is
    returned unchanged.  Row order is preserved (indices ascend), so repeated
    runs with one seed give identical index sequences.
    """
    y = np.asarray(y)
    n = len(rows)
    if n != len(y):
        raise ValueError("rows and labels differ in length")
    benign_idx = np.flatnonzero(y == 0)
    malicious_idx = np.flatnonzero(y == 1)
    if benign_idx.size < 2 or malicious_idx.size < 2:
        raise InsufficientClassError(
            "ratio-preserving sampling needs at least 2 rows per class "
            f"(benign={benign_idx.size}, malicious={malicious_idx.size})"
        )
    if config.k >= n:
        return SampleResult(list(rows), y.copy(), np.arange(n))
    if config.k < 4:
        raise InsufficientClassError(
            f"sample size k={config.k} cannot hold 2 rows of each class"
        )

    p_benign = benign_idx.size / n
    n_benign = int(np.floor(config.k * p_benign + 0.5))  # half-up
    n_benign = max(2, min(config.k - 2, n_benign))
    n_malicious = config.k - n_benign

    rng_b = derive_stream(config.seed, _SAMPLE_STREAM_TAG)
    rng_m = derive_stream(config.seed, _SAMPLE_STREAM_TAG + 1)
    chosen_b = benign_idx[rng_b.sample_without_replacement(benign_idx.size, n_benign)]
    chosen_m = malicious_idx[rng_m.sample_without_replacement(malicious_idx.size, n_malicious)]
    chosen = np.sort(np.concatenate([chosen_b, chosen_m]))
    return SampleResult(
        rows=[rows[i] for i in chosen],
        y=y[chosen],
        indices=chosen,
    )


@dataclass(frozen=True)
class Provenance:
    source_name: str
    seed: int
    k_requested: int
    dropped_rows: int


@dataclass
class LabeledMatrix:
    """Fully numeric feature matrix plus binary labels."""

    feature_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    provenance: Provenance

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise ValueError("X and y row counts differ")
        if self.X.shape[1] != len(self.feature_names):
            raise ValueError("feature name count does not match X width")
        if not np.isfinite(self.X).all():
            raise ValueError("X contains missing or non-finite entries")
        classes = set(np.unique(self.y).tolist())
        if not classes <= {0, 1} or len(classes) != 2:
            raise SingleClassError("labels must contain both classes 0 and 1")

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class _OutputColumn:
    name: str
    source_index: int
    category: str | None  # None for numeric pass-through


class TableEncoder:
    """One-hot layout fixed on a cleaned table; reusable on row subsets.

    Numeric columns pass through; each categorical column within the
    cardinality cap expands to one indicator column per value, in first
    appearance order.  Categorical columns above the cap are dropped and
    recorded in `dropped_high_cardinality`.
    """

    def __init__(
        self,
        outputs: tuple[_OutputColumn, ...],
        dropped: tuple[tuple[str, int], ...],
        label_index: int,
    ):
        self.outputs = outputs
        self.dropped_high_cardinality = dropped
        self.label_index = label_index

    @classmethod
    def from_table(
        cls,
        table: RawTable,
        spec: LabelSpec,
        cardinality_cap: int = 64,
    ) -> "TableEncoder":
        outputs: list[_OutputColumn] = []
        dropped: list[tuple[str, int]] = []
        for j, meta in enumerate(table.columns):
            if j == spec.column_index:
                continue
            if meta.kind == "numeric":
                outputs.append(_OutputColumn(meta.name, j, None))
            elif meta.kind == "categorical":
                if meta.distinct_count > cardinality_cap:
                    dropped.append((meta.name, meta.distinct_count))
                    continue
                seen: dict[str, None] = {}
                for cell in table.column_values(j):
                    if cell not in seen:
                        seen[cell] = None
                for value in seen:
                    outputs.append(_OutputColumn(f"{meta.name}={value}", j, value))
            # missing-only columns were removed by clean()
        if not outputs:
            raise NoFeaturesError(
                f"{table.source_name}: no feature columns survive encoding"
            )
        return cls(tuple(outputs), tuple(dropped), spec.column_index)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.outputs)

    def transform(self, rows: Sequence[Sequence[str]]) -> np.ndarray:
        """Encode rows (drawn from the table this encoder was built on)."""
        n = len(rows)
        X = np.empty((n, len(self.outputs)), dtype=np.float64)
        cols = list(zip(*rows)) if n else []
        cache: dict[int, np.ndarray] = {}
        for out_pos, out in enumerate(self.outputs):
            if out.source_index not in cache:
                cache[out.source_index] = np.asarray(cols[out.source_index], dtype=np.str_)
            raw = cache[out.source_index]
            if out.category is None:
                X[:, out_pos] = raw.astype(np.float64)
            else:
                X[:, out_pos] = (raw == out.category).astype(np.float64)
        return X

    def column_values(self, rows: Sequence[Sequence[str]], output_index: int) -> np.ndarray:
        """Encode a single output column; cheap path for plotting."""
        out = self.outputs[output_index]
        raw = np.asarray([row[out.source_index] for row in rows], dtype=np.str_)
        if out.category is None:
            return raw.astype(np.float64)
        return (raw == out.category).astype(np.float64)


def one_hot_encode(
    table: RawTable,
    spec: LabelSpec,
    y: np.ndarray,
    cardinality_cap: int = 64,
    provenance: Provenance | None = None,
) -> tuple[LabeledMatrix, TableEncoder]:
    """Encode a cleaned table into a LabeledMatrix (plus the reusable encoder)."""
    encoder = TableEncoder.from_table(table, spec, cardinality_cap)
    X = encoder.transform(table.rows)
    if provenance is None:
        provenance = Provenance(table.source_name, 0, table.n_rows, 0)
    matrix = LabeledMatrix(encoder.feature_names, X, np.asarray(y), provenance)
    return matrix, encoder
