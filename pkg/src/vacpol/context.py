"""Physical constants, unit handling and evaluation tolerances.

All formulas are coded in atomic units (hbar = m_e = e = 1, c = 1/alpha).
Relativistic units (hbar = m_e = c = 1) measure lengths in reduced Compton
wavelengths (alpha bohr) and energies in m_e c^2 (1/alpha^2 hartree).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .errors import DomainError

ALPHA = 1.0 / 137.035999
EULER_GAMMA = 0.577215664901532860606512

# CODATA 2018
BOHR_RADIUS_M = 5.29177210903e-11
HARTREE_J = 4.3597447222071e-18


class UnitSystem(str, enum.Enum):
    ATOMIC = "atomic"
    RELATIVISTIC = "relativistic"
    SI = "SI-factors"


# quantity -> power of alpha multiplying an atomic-unit value to express it in
# relativistic units
# "spectral" is energy x volume, the unit of a Fourier-transformed potential
_RELATIVISTIC_POWER = {"length": -1, "energy": 2, "wavenumber": 1, "spectral": -1}
_SI_FACTOR = {
    "length": BOHR_RADIUS_M,
    "energy": HARTREE_J,
    "wavenumber": 1.0 / BOHR_RADIUS_M,
    "spectral": HARTREE_J * BOHR_RADIUS_M**3,
}


@dataclass(frozen=True)
class EvalAccuracy:
    rel_tol: float = 1e-12
    abs_tol: float = 0.0
    max_subdivisions: int = 12

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise DomainError(f"abs_tol must be nonnegative, got {self.abs_tol}")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError(f"max_subdivisions must be a positive integer, got {self.max_subdivisions}")


DEFAULT_ACCURACY = EvalAccuracy()


@dataclass(frozen=True)
class PhysicalContext:
    """Coupling constant, charges and unit system for one evaluation.

    ``Q`` is the nuclear charge number used by single-centre formulas.  When
    both ``q1`` and ``q2`` are set the context is in pair mode and
    :attr:`charge_product` is ``q1 * q2``; otherwise it is ``Q``.
    """

    alpha: float = ALPHA
    Q: float = 1.0
    q1: float | None = None
    q2: float | None = None
    unit_system: UnitSystem = UnitSystem.ATOMIC
    accuracy: EvalAccuracy = field(default=DEFAULT_ACCURACY)

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if (self.q1 is None) != (self.q2 is None):
            raise DomainError("q1 and q2 must be given together")
        object.__setattr__(self, "unit_system", UnitSystem(self.unit_system))

    @property
    def pair_mode(self) -> bool:
        return self.q1 is not None

    @property
    def charge_product(self) -> float:
        return self.q1 * self.q2 if self.pair_mode else self.Q

    def with_charge(self, Q: float) -> "PhysicalContext":
        """Copy in nuclear mode with charge ``Q``."""
        return replace(self, Q=Q, q1=None, q2=None)

    def to_atomic(self, value, quantity: str):
        """Convert ``value`` of ``quantity`` from this context's units to atomic units."""
        return value / self._factor(quantity)

    def from_atomic(self, value, quantity: str):
        return value * self._factor(quantity)

    def _factor(self, quantity: str) -> float:
        if quantity not in _RELATIVISTIC_POWER:
            raise DomainError(f"unknown quantity {quantity!r}")
        if self.unit_system is UnitSystem.ATOMIC:
            return 1.0
        if self.unit_system is UnitSystem.RELATIVISTIC:
            return self.alpha ** _RELATIVISTIC_POWER[quantity]
        return _SI_FACTOR[quantity]


def compton_length(ctx: PhysicalContext) -> float:
    """Reduced electron Compton wavelength in bohr (numerically alpha)."""
    return ctx.alpha


def minimal_distance(Q: float, ctx: PhysicalContext) -> float:
    """Shortest distance ``Lambda_e / Q`` resolvable by a nonrelativistic wavefunction."""
    if not Q > 0:
        raise DomainError("Q must be positive")
    return compton_length(ctx) / Q


def screening_factor(alpha: float = ALPHA) -> float:
    """Effective-charge factor ``1 - 5 alpha / (9 pi)`` from the constant term of the Uehling spectrum."""
    return 1.0 - 5.0 * alpha / (9.0 * math.pi)
