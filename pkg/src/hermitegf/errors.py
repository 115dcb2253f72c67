"""Exception hierarchy for hermitegf."""

from __future__ import annotations


class HermiteGFError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrix(HermiteGFError):
    """A pivot of an elimination fell below the underflow threshold."""

    def __init__(self, message, pivot_index=None, cond=None):
        super().__init__(message)
        self.pivot_index = pivot_index
        self.cond = cond


class SingularVandermonde(SingularMatrix):
    pass


class RankDeficientC(HermiteGFError):
    pass


class InsufficientBasis(HermiteGFError):
    pass


class CapacityExceeded(HermiteGFError):
    pass


class DomainError(HermiteGFError, ValueError):
    pass


class DegenerateDiagonal(HermiteGFError):
    pass


class ExponentOverflow(HermiteGFError, OverflowError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CriterionNotMet(HermiteGFError):
    """Raised when no candidate degree satisfies the cut-off criterion.

    ``result`` carries the best-effort :class:`~hermitegf.cutoff.CutoffResult`.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DimensionTooLarge(HermiteGFError, ValueError):
    pass


class OutOfDomain(HermiteGFError, ValueError):
    pass


class RejectionStalled(HermiteGFError):
    pass


class UnknownFunction(HermiteGFError, KeyError):
    pass


class DivisionByZero(HermiteGFError, ZeroDivisionError):
    pass
