"""ARFF ingestion: @relation/@attribute/@data dialect, dense rows only.

Keywords are case-insensitive, '%' comments are ignored, and nominal domains
are enforced against the data.  '?' reads as missing.
"""

from __future__ import annotations

import math
import re

from ..errors import EmptyInputError, ParseError, TableTooLargeError, UnsupportedFormatError
from .csv_reader import DEFAULT_MAX_CELLS, Source, _read_text
from .tables import ColumnKind, RawTable, infer_columns, is_missing

_NUMERIC_TYPES = {"numeric", "real", "integer"}

_ATTRIBUTE_RE = re.compile(
    r"""^@attribute\s+
        (?P<name>'[^']*'|"[^"]*"|\S+)\s+
        (?P<type>\{.*\}|\S+)\s*$""",
    re.IGNORECASE | re.VERBOSE,
)


def _unquote(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
        return token[1:-1]
    return token


def _split_values(line: str) -> list[str]:
    """Split a dense data row on commas, honouring single/double quotes."""
    values: list[str] = []
    buf: list[str] = []
    quote: str | None = None
    for ch in line:
        if quote:
            if ch == quote:
                quote = None
            else:
                buf.append(ch)
        elif ch in "'\"":
            quote = ch
        elif ch == ",":
            values.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    if quote:
        raise ParseError(f"unterminated quote in data row: {line!r}")
    values.append("".join(buf).strip())
    return values


def parse_arff(
    source: Source,
    source_name: str | None = None,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> RawTable:
    """Parse an ARFF document into a RawTable.

    Attribute declarations decide column kinds: `numeric`/`real`/`integer`
    become numeric columns, `{v1,v2,...}` become categorical columns with the
    declared domain.  A data value outside its nominal domain is a parse
    error naming the column and value; sparse `{...}` rows are unsupported.
    """
    text, detected_name = _read_text(source)
    name = source_name or detected_name

    attr_names: list[str] = []
    attr_kinds: list[ColumnKind] = []
    domains: list[frozenset[str] | None] = []
    rows: list[list[str]] = []
    in_data = False
    saw_relation = False
    data_row_no = 0

    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("%"):
            continue
        lower = line.lower()
        if not in_data:
            if lower.startswith("@relation"):
                saw_relation = True
            elif lower.startswith("@attribute"):
                match = _ATTRIBUTE_RE.match(line)
                if not match:
                    raise ParseError(f"{name}: malformed attribute line: {line!r}")
                attr_name = _unquote(match.group("name"))
                attr_type = match.group("type").strip()
                if attr_type.startswith("{"):
                    if not attr_type.endswith("}"):
                        raise ParseError(
                            f"{name}: malformed nominal domain for {attr_name!r}"
                        )
                    domain = frozenset(
                        _unquote(v) for v in _split_values(attr_type[1:-1])
                    )
                    attr_names.append(attr_name)
                    attr_kinds.append("categorical")
                    domains.append(domain)
                elif attr_type.lower() in _NUMERIC_TYPES:
                    attr_names.append(attr_name)
                    attr_kinds.append("numeric")
                    domains.append(None)
                else:
                    raise UnsupportedFormatError(
                        f"{name}: attribute type {attr_type!r} is not supported "
                        "(only numeric and nominal attributes)"
                    )
            elif lower.startswith("@data"):
                if not saw_relation:
                    raise ParseError(f"{name}: @data before @relation")
                if not attr_names:
                    raise ParseError(f"{name}: @data without @attribute declarations")
                in_data = True
            else:
                raise ParseError(f"{name}: unexpected line before @data: {line!r}")
            continue

        if line.startswith("{"):
            raise UnsupportedFormatError(
                f"{name}: sparse ARFF rows are not supported"
            )
        data_row_no += 1
        values = _split_values(line)
        if len(values) != len(attr_names):
            raise ParseError(
                f"row {data_row_no}: expected {len(attr_names)} cells, found {len(values)}"
            )
        for j, value in enumerate(values):
            if is_missing(value):
                continue
            domain = domains[j]
            if domain is not None:
                if value not in domain:
                    raise ParseError(
                        f"column {attr_names[j]}: value {value!r} not in nominal domain"
                    )
            else:
                try:
                    parsed = float(value)
                except ValueError:
                    raise ParseError(
                        f"column {attr_names[j]}: value {value!r} is not numeric"
                    ) from None
                if not math.isfinite(parsed):
                    raise ParseError(
                        f"column {attr_names[j]}: value {value!r} is not a finite number"
                    )
        rows.append(values)
        if len(rows) * len(attr_names) > max_cells:
            raise TableTooLargeError(
                f"{name}: exceeds the {max_cells}-cell budget",
                n_rows=len(rows),
                n_cols=len(attr_names),
            )

    if not in_data:
        raise ParseError(f"{name}: missing @data section")
    if not rows:
        raise EmptyInputError(f"{name}: no data rows")
    columns = infer_columns(rows, attr_names, declared_kinds=attr_kinds)
    return RawTable(
        source_name=name,
        format="arff",
        columns=columns,
        rows=rows,
        n_rows=len(rows),
        n_cols=len(attr_names),
    )
