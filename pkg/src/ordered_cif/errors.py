"""Exception types shared across the package."""


class OrderedCifError(Exception):
    """Base class for all errors raised by this package."""


class DataError(OrderedCifError):
    """Malformed or inconsistent input data.

    Carries the 1-based input line number when raised during CSV ingestion.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PreconditionError(OrderedCifError):
    """An operation was invoked outside its documented contract."""


class RangeError(OrderedCifError):
    """Evaluation was requested beyond the range supported by the data."""


class DomainError(OrderedCifError):
    """A parameter lies outside its mathematical domain."""


class ConfigError(OrderedCifError):
    """Invalid run configuration."""
