"""Exception hierarchy shared by every module."""


class TateError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(TateError, ValueError):
    """Gamma evaluated at a non-positive integer."""


class RingMismatchError(TateError, TypeError):
    pass


class PrecisionError(TateError, ValueError):
    """A requested coefficient lies at or beyond the known head of a series."""


class AdmissibilityError(TateError, ValueError):
    """A series fails the unit / nilpotence conditions an operation needs."""


class MembershipError(AdmissibilityError):
    """A series is not an invertible nil-Laurent series."""


class ParityError(TateError, ValueError):
    pass


class WindowError(TateError, ValueError):
    """An operator was requested outside the weight window it was built on."""


class FitError(TateError, ValueError):
    """The Virasoro defect is not scalar, or the cubic fit is inconsistent."""


class ParseError(TateError, ValueError):
    """Malformed expression text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
