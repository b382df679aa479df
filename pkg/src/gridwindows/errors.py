"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class GridWindowsError(Exception):
    """Base class for all errors raised by this package."""


class InputError(GridWindowsError):
    """Bad input data (CLI exit code 1)."""


class MalformedRow(InputError):
    def __init__(self, row: int, message: str):
        self.row = row
        super().__init__(f"row {row}: {message}")


class DuplicateTimestamp(InputError):
    def __init__(self, row: int, timestamp: str):
        self.row = row
        self.timestamp = timestamp
        super().__init__(f"row {row}: duplicate timestamp {timestamp}")


class MissingColumn(InputError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"missing column: {column!r}")


class EmptyInput(InputError):
    pass


class EmptySequence(InputError):
    pass


class EmptyMembers(InputError):
    pass


class EmptyValues(InputError):
    pass


class ConfigError(GridWindowsError):
    """Inconsistent configuration or data-size problem (CLI exit code 2)."""


class BandTooNarrow(ConfigError):
    pass


class TooFewDays(ConfigError):
    pass


class MixedSeriesKind(ConfigError):
    pass


class InconsistentClusterIds(ConfigError):
    pass


class IoError(GridWindowsError, OSError):
    pass
