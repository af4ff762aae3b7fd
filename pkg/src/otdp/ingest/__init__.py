"""Dataset file ingestion: CSV/ARFF parsing, schema inference, readiness."""

from .arff_reader import parse_arff
from .csv_reader import (
    DEFAULT_MAX_CELLS,
    parse_csv,
    scan_csv_dimensions,
    serialize_csv,
)
from .tables import (
    DEFAULT_BENIGN_ALIASES,
    LABEL_NAME_HINTS,
    ColumnMeta,
    LabelSpec,
    RawTable,
    ReadinessVerdict,
    check_ml_ready,
    infer_columns,
    infer_schema,
    is_missing,
    make_label_spec,
    missing_mask,
)

__all__ = [
    "DEFAULT_BENIGN_ALIASES",
    "DEFAULT_MAX_CELLS",
    "LABEL_NAME_HINTS",
    "ColumnMeta",
    "LabelSpec",
    "RawTable",
    "ReadinessVerdict",
    "check_ml_ready",
    "infer_columns",
    "infer_schema",
    "is_missing",
    "make_label_spec",
    "missing_mask",
    "parse_arff",
    "parse_csv",
    "scan_csv_dimensions",
    "serialize_csv",
]
