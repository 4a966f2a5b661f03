"""Transmutation operators for the Bessel operator, Hankel-transform
compositions and closed-form solutions of Euler-Poisson-Darboux equations."""

from __future__ import annotations

from .errors import (
    AccuracyLossError,
    ConvergenceError,
    DomainError,
    PreconditionError,
    TransmuteError,
    TruncationError,
)
from .functions import Decay, TestFunction, parse_function_spec
from .operators import OperatorParams

__all__ = [
    "AccuracyLossError",
    "ConvergenceError",
    "Decay",
    "DomainError",
    "OperatorParams",
    "PreconditionError",
    "TestFunction",
    "TransmuteError",
    "TruncationError",
    "parse_function_spec",
]
