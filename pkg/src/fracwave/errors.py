"""Exception hierarchy shared by all fracwave modules."""
from __future__ import annotations


class FracwaveError(Exception):
    """Base class for all library errors."""


class DomainError(FracwaveError, ValueError):
    """An argument lies outside the domain of an operation."""


class NumericalError(FracwaveError, ArithmeticError):
    """A numerical procedure failed or its self-check disagreed.

    ``details`` carries whatever diagnostic the raising routine has
    (per-point flags, the disagreeing values, ...).
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details


class NotAdmissible(FracwaveError, ValueError):
    """The constitutive model is not one of the thermodynamically admissible classes."""

    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason if reason is not None else message


class InfiniteSpeed(FracwaveError, ValueError):
    """A dimensional wave speed was requested for a model without a finite cone."""


class GridMismatch(FracwaveError, ValueError):
    """Sampled initial data are too coarse for the kernel being convolved."""


class ParseError(FracwaveError, ValueError):
    """A configuration document could not be parsed."""


class ValidationError(FracwaveError, ValueError):
    """A configuration document parsed but violates an invariant."""
