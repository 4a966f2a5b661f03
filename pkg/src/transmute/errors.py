"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class TransmuteError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TransmuteError, ValueError):
    """An argument lies outside the domain where a function is defined."""


class PreconditionError(TransmuteError, ValueError):
    """Operator or formula parameters violate the stated hypotheses."""


class ConvergenceError(TransmuteError, ArithmeticError):
    """An iterative procedure (series, Newton, refinement) failed to converge."""

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


class AccuracyLossError(TransmuteError, ArithmeticError):
    """The requested argument is outside the range with validated accuracy."""


class TruncationError(ConvergenceError):
    """A semi-infinite integral did not settle before the tail budget ran out."""
