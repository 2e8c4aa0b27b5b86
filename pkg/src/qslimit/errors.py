"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class QSLError(ValueError):
    """Base class for all validation and numerical errors raised here."""


class DimensionError(QSLError):
    pass


class NotHermitianError(QSLError):
    pass


class NormalizationError(QSLError):
    pass


class NonFiniteError(QSLError):
    pass


class StationaryStateError(QSLError):
    """Energy uncertainty is zero: the state never leaves its ray."""


class DomainError(QSLError):
    """An argument lies outside the interval where a formula is valid."""


class ConvergenceError(QSLError):
    pass
