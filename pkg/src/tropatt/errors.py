"""Exception hierarchy.

Domain errors (exit code 3 on the command line) are kept apart from input
schema errors (exit code 2) so callers can tell bad data from bad files.
"""


class TropattError(Exception):
    """Base class for every error raised by this package."""


class InvalidValueError(TropattError, ValueError):
    """A value outside the tropical carrier (NaN or +inf)."""


class DomainError(TropattError, ValueError):
    """An operation was applied outside its domain."""


class DimensionMismatchError(DomainError):
    pass


class AllBottomRowError(DomainError):
    """A row has no finite entry, so no maximum (and no softmax) exists."""

    def __init__(self, row, what="row"):
        self.row = row
        super().__init__(f"{what} {row} has no finite entry")


class EnumerationGuardError(DomainError):
    """Exhaustive enumeration would exceed the path budget."""


class SchemaError(TropattError, ValueError):
    """Malformed JSON / CSV input."""
