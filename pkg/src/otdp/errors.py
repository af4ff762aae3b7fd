"""Exception hierarchy shared across the toolkit."""


class OtdpError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(OtdpError):
    """Input file violates its format (ragged row, bad nominal value, ...)."""


class EmptyInputError(ParseError):
    """The input stream contains no data rows."""


class UnsupportedFormatError(ParseError):
    """The input format is recognised but not handled (sparse ARFF, XLSX)."""


class TableTooLargeError(OtdpError):
    """The file exceeds the configured in-memory cell budget."""

    def __init__(self, message, n_rows=None, n_cols=None):
        super().__init__(message)
        self.n_rows = n_rows
        self.n_cols = n_cols


class NoLabelError(OtdpError):
    """No column is usable as a label (all columns constant)."""


class NotMlReadyError(OtdpError):
    """The file failed the readiness check; carries the reasons."""

    def __init__(self, source_name, reasons):
        self.reasons = tuple(reasons)
        super().__init__(f"{source_name}: not ML-ready: " + "; ".join(self.reasons))


class EmptyAfterCleanError(OtdpError):
    """Every row was dropped while removing missing values."""


class SingleClassError(OtdpError):
    """An operation that needs both classes saw only one."""


class InsufficientClassError(OtdpError):
    """A class has too few rows for ratio-preserving sampling."""


class NoFeaturesError(OtdpError):
    """No feature columns survived encoding."""


class DegenerateClassifierError(OtdpError):
    """The linear classifier cannot be trained (single-class input)."""


class CatalogError(OtdpError):
    """The dataset catalogue file is malformed or inconsistent."""


class UnknownAttackError(CatalogError):
    """A query names an attack subheading that does not exist."""

    def __init__(self, name, valid_names):
        self.name = name
        self.valid_names = list(valid_names)
        super().__init__(
            f"unknown attack subheading {name!r}; valid names: "
            + ", ".join(self.valid_names)
        )


class UnknownDatasetError(CatalogError):
    """A lookup names a dataset that is not in the catalogue."""

    def __init__(self, name, suggestion=None):
        self.name = name
        self.suggestion = suggestion
        msg = f"unknown dataset {name!r}"
        if suggestion:
            msg += f" (did you mean {suggestion!r}?)"
        super().__init__(msg)
