"""Exception hierarchy shared by every poroflow module."""


class PoroflowError(Exception):
    """Base class for all library errors."""


class DimensionError(PoroflowError, ValueError):
    """Grid too small or shapes that should match do not."""


class ConfigError(PoroflowError, ValueError):
    """Invalid filter / phantom / bench parameter."""


class DomainError(PoroflowError, ValueError):
    """Input outside the mathematical domain of an operation."""


class NumericalError(PoroflowError, ArithmeticError):
    """A non-finite value appeared during an iterative computation."""

    def __init__(self, message, pixel=None):
        super().__init__(message)
        self.pixel = pixel


class FormatError(PoroflowError, ValueError):
    """Malformed grid file. ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset
