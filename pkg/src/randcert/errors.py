"""Exception types shared across the library."""


class RandcertError(Exception):
    """Base class for all library errors."""


class FormatError(RandcertError, ValueError):
    """Malformed input file contents."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class DataError(RandcertError, ValueError):
    """Input data violates a declared property (e.g. non-monotone timestamps)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NumericError(RandcertError, ArithmeticError):
    """A numeric routine produced a non-finite or invalid intermediate."""
