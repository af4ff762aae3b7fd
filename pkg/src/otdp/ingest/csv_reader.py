"""CSV ingestion: RFC-4180-style quoting, configurable delimiter.

Empty cells, '?', and 'NaN' (any case) read as missing.  Cell text is kept
verbatim, so re-serialising reproduces the input modulo quoting
normalisation.
"""

from __future__ import annotations

import csv
import io
import os
from typing import IO, Iterable, Union

from ..errors import EmptyInputError, ParseError, TableTooLargeError
from .tables import RawTable, infer_columns

SUPPORTED_DELIMITERS = (",", ";", "\t")

#: Default in-memory budget; files beyond that are counted, not loaded.
DEFAULT_MAX_CELLS = 20_000_000

Source = Union[str, bytes, os.PathLike, IO[bytes], IO[str]]


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return data.decode("latin-1")


def _read_text(source: Source) -> tuple[str, str]:
    """Return (text, source_name) for a path, bytes, raw text, or stream."""
    if isinstance(source, bytes):
        return _decode(source), "<bytes>"
    if isinstance(source, os.PathLike):
        with open(source, "rb") as fh:
            return _decode(fh.read()), os.fspath(source)
    if isinstance(source, str):
        if "\n" not in source and os.path.exists(source):
            with open(source, "rb") as fh:
                return _decode(fh.read()), source
        return source, "<text>"
    data = source.read()
    name = getattr(source, "name", "<stream>")
    if isinstance(data, bytes):
        return _decode(data), name
    return data, name


def parse_csv(
    source: Source,
    delimiter: str = ",",
    has_header: bool = True,
    source_name: str | None = None,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> RawTable:
    """Parse delimited text into a RawTable.

    Raises ParseError for ragged rows ("row N: expected X cells, found Y",
    N counting physical records including the header), EmptyInputError for
    inputs without data rows, and TableTooLargeError once the cell count
    exceeds `max_cells` (the error still carries the full dimensions).
    """
    if delimiter not in SUPPORTED_DELIMITERS:
        raise ParseError(
            f"unsupported delimiter {delimiter!r}; use one of comma, semicolon, tab"
        )
    text, detected_name = _read_text(source)
    name = source_name or detected_name
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)

    header: list[str] | None = None
    rows: list[list[str]] = []
    n_cols = 0
    n_data_rows = 0
    first_blank = 0
    n_blank = 0
    record_no = 0
    overflow = False
    for record in reader:
        record_no += 1
        if not record:
            # Tolerated only as trailing junk; an interior blank is ragged.
            if not first_blank:
                first_blank = record_no
            n_blank += 1
            continue
        if first_blank:
            raise ParseError(
                f"row {first_blank}: expected {n_cols or len(record)} cells, found 0"
            )
        if header is None and has_header:
            header = [c.strip() for c in record]
            n_cols = len(header)
            continue
        if n_cols == 0:
            n_cols = len(record)
        if len(record) != n_cols:
            raise ParseError(
                f"row {record_no}: expected {n_cols} cells, found {len(record)}"
            )
        n_data_rows += 1
        if not overflow:
            rows.append(record)
            if len(rows) * n_cols > max_cells:
                overflow = True
    if overflow:
        raise TableTooLargeError(
            f"{name}: {n_data_rows * n_cols} cells exceed the {max_cells}-cell budget "
            "(counted only; raise --max-cells to load fully)",
            n_rows=n_data_rows,
            n_cols=n_cols,
        )
    if not rows:
        raise EmptyInputError(f"{name}: no data rows")
    if header is None:
        header = [f"col_{j}" for j in range(n_cols)]
    columns = infer_columns(rows, header)
    return RawTable(
        source_name=name,
        format="csv",
        columns=columns,
        rows=rows,
        n_rows=len(rows),
        n_cols=n_cols,
    )


def serialize_csv(table: RawTable, delimiter: str = ",", include_header: bool = True) -> str:
    """Render a table back to delimited text with minimal quoting."""
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    if include_header:
        writer.writerow(table.column_names)
    writer.writerows(table.rows)
    return buf.getvalue()


def scan_csv_dimensions(source: Source, delimiter: str = ",", has_header: bool = True) -> tuple[int, int]:
    """Streaming (n_rows, n_cols) count without keeping cells in memory."""
    text, _ = _read_text(source)
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    n_rows = 0
    n_cols = 0
    for record in reader:
        if not record:
            continue
        if n_cols == 0:
            n_cols = len(record)
        n_rows += 1
    if has_header and n_rows:
        n_rows -= 1
    return n_rows, n_cols
