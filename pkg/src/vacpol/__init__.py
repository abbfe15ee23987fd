"""Vacuum-polarization corrections to the interaction of two point charges."""

from __future__ import annotations

__version__ = "0.1.0"

from .context import ALPHA, EvalAccuracy, PhysicalContext, UnitSystem
from .errors import ConvergenceError, DomainError, OverflowGuardError, PoleError, RangeError, VacpolError

__all__ = [
    "ALPHA",
    "ConvergenceError",
    "DomainError",
    "EvalAccuracy",
    "OverflowGuardError",
    "PhysicalContext",
    "PoleError",
    "RangeError",
    "UnitSystem",
    "VacpolError",
    "__version__",
]
