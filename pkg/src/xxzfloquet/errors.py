"""Exception hierarchy shared by the whole package.

Every error derives from :class:`XXZError` so a driver can catch one type.
The CLI maps the subclasses onto process exit codes.
"""


class XXZError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(XXZError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(InvalidArgumentError):
    """A spin string or config value could not be parsed."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnsupportedLatticeError(InvalidArgumentError):
    """The requested operation is only defined for periodic spin-1/2 chains."""


class ResourceError(XXZError, MemoryError):
    """A Hilbert space or dense matrix would exceed the configured cap."""


class AccuracyError(XXZError, ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""


class NumericalConsistencyError(AccuracyError):
    """A result violates a mathematical invariant beyond roundoff."""
