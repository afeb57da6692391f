"""Exception hierarchy shared by every module."""


class QSchurError(Exception):
    """Base class for all errors raised by qschur."""


class UsageError(QSchurError, ValueError):
    """Incompatible arguments, e.g. series over different numbers of colours."""


class DomainError(QSchurError, ValueError):
    """An argument outside the mathematical domain of an operation."""


class DivergenceError(QSchurError, ValueError):
    """An infinite product that does not stabilise inside a truncation box."""


class TruncationError(QSchurError, ValueError):
    """A truncation box too small for the requested computation to be exact."""


class AlphabetError(UsageError):
    """A super-increasing alphabet violating one of its defining invariants."""
