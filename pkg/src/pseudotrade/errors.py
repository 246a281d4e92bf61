"""Exception hierarchy. Each class maps to one CLI exit code."""


class PseudotradeError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class SpecError(PseudotradeError, ValueError):
    """Invalid parameters or configuration (exit code 2)."""

    exit_code = 2


class DataError(PseudotradeError, ValueError):
    """Input data that cannot be used, e.g. too short or non-positive (exit code 3)."""

    exit_code = 3


class UndefinedValueError(PseudotradeError, LookupError):
    """Read of a warm-up position that has no defined value."""

    exit_code = 4


class InvariantError(PseudotradeError, RuntimeError):
    """An internal invariant was violated (exit code 4)."""

    exit_code = 4
