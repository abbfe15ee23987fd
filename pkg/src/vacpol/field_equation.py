"""Radial field equation with the Euler-Heisenberg cubic term.

For a point charge the field ``y = phi'(r)`` obeys the depressed cubic
``y^3 + p y + q / r^2 = 0`` with ``q = Q p`` and, in atomic units,
``p = 45 pi / (2 alpha^7)``.  The linear root ``-Q/r^2`` is the Coulomb
field; the first nonlinear correction integrates to the Wichmann-Kroll
term ``-Q^3 / (5 p r^5)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .context import PhysicalContext
from .errors import DomainError


@dataclass(frozen=True)
class CubicCoefficients:
    p: float
    q: float
    r: float

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError(f"p must be positive, got {self.p}")
        if not self.r > 0:
            raise DomainError(f"r must be positive, got {self.r}")

    @property
    def constant(self) -> float:
        return self.q / (self.r * self.r)

    @property
    def discriminant(self) -> float:
        """``(q / 2r^2)^2 + (p/3)^3``; positive means a single real root."""
        return (0.5 * self.constant) ** 2 + (self.p / 3.0) ** 3


def field_coefficient_p(ctx: PhysicalContext) -> float:
    """``p = 45 pi / (2 alpha^7)`` in atomic units."""
    return 45.0 * math.pi / (2.0 * ctx.alpha**7)


def physical_coefficients(r: float, ctx: PhysicalContext) -> CubicCoefficients:
    """Coefficients at distance ``r`` (context units) for the charge ``ctx.charge_product``."""
    p = field_coefficient_p(ctx)
    return CubicCoefficients(p, ctx.charge_product * p, ctx.to_atomic(r, "length"))


def _depressed_root(P: float, R: float) -> float:
    # real root of y^3 + P y + R = 0, P > 0, without subtractive cancellation:
    # y = u + v with u v = -P/3, and u^3 + v^3 = -R gives y = -R / (u^2 + v^2 + P/3)
    if R == 0:
        return 0.0
    half = -0.5 * R
    root = math.sqrt(half * half + (P / 3.0) ** 3)
    t = half + math.copysign(root, half)
    u = math.copysign(abs(t) ** (1.0 / 3.0), t)
    v = -P / (3.0 * u)
    y = -R / (u * u + v * v + P / 3.0)
    for _ in range(3):
        f = y * y * y + P * y + R
        d = 3.0 * y * y + P
        step = f / d
        y -= step
        if abs(step) <= 1e-17 * abs(y):
            break
    return y


def cardano_real_root(coeffs: CubicCoefficients) -> float:
    """The real root of ``y^3 + p y + q/r^2 = 0`` (``p > 0``), evaluated stably."""
    return _depressed_root(coeffs.p, coeffs.constant)


def cardano_verbatim(coeffs: CubicCoefficients) -> float:
    """Textbook ``cbrt(-c/2 + sqrt(D)) + cbrt(-c/2 - sqrt(D))``; cancels badly at large r."""
    c = coeffs.constant
    root = math.sqrt(coeffs.discriminant)
    a, b = -0.5 * c + root, -0.5 * c - root
    return math.copysign(abs(a) ** (1 / 3), a) + math.copysign(abs(b) ** (1 / 3), b)


def root_residual(coeffs: CubicCoefficients, y: float) -> float:
    """``|y^3 + p y + q/r^2| / max(|p y|, |q/r^2|)``."""
    c = coeffs.constant
    scale = max(abs(coeffs.p * y), abs(c))
    if scale == 0:
        return 0.0
    return abs(y * y * y + coeffs.p * y + c) / scale


def nonlinear_deviation(coeffs: CubicCoefficients) -> float:
    """``y - y_lin`` with ``y_lin = -q/(p r^2)``, exactly ``-y^3 / p``."""
    y = cardano_real_root(coeffs)
    return -(y * y * y) / coeffs.p


def dimensionless_root(x: float, eps: float) -> float:
    """Root of ``eps Y^3 + Y + 1/x^2 = 0``; ``Y`` in units of ``Q/alpha^2``, ``x = r/alpha``."""
    if not eps > 0 or not x > 0:
        raise DomainError("eps and x must be positive")
    # divide by eps: Y^3 + Y/eps + 1/(eps x^2) = 0
    return _depressed_root(1.0 / eps, 1.0 / (eps * x * x))


def field_epsilon(ctx: PhysicalContext) -> float:
    """``eps = 2 Q^2 alpha^3 / (45 pi)`` of the dimensionless form."""
    return 2.0 * ctx.charge_product**2 * ctx.alpha**3 / (45.0 * math.pi)


def field_correction_psi(r: float, ctx: PhysicalContext) -> float:
    """Perturbative correction ``psi(r) = -Q^3 / (5 p r^5)`` (context energy units)."""
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    r_au = ctx.to_atomic(r, "length")
    return ctx.from_atomic(-ctx.charge_product**3 / (5.0 * field_coefficient_p(ctx) * r_au**5), "energy")


def field_correction_slope(r: float, ctx: PhysicalContext) -> float:
    """``psi'(r) = Q^3 / (p r^6)`` in atomic units."""
    r_au = ctx.to_atomic(r, "length")
    return ctx.charge_product**3 / (field_coefficient_p(ctx) * r_au**6)


def perturbative_agreement(r: float, ctx: PhysicalContext) -> float:
    """``|(y + Q/r^2) - psi'(r)| / |psi'(r)|`` at ``r``."""
    dev = nonlinear_deviation(physical_coefficients(r, ctx))
    slope = field_correction_slope(r, ctx)
    return abs(dev - slope) / abs(slope)


@dataclass(frozen=True)
class AsymptoteReport:
    regime: str
    description: str
    predicted_exponent: float
    fitted_exponent: float
    limit_value: float
    predicted_limit: float
    printed_large_r_slope: float = math.nan


def crossover_radius(p: float, q: float) -> float:
    """Radius where the cubic and linear terms are comparable, ``sqrt(|q|) / p^{3/4}``."""
    return math.sqrt(abs(q)) / p**0.75


def appendix_asymptotes(regime: str, p: float, q: float) -> AsymptoteReport:
    """Fit the small- or large-r behaviour of the Cardano root.

    Small r: ``y ~ -q^{1/3} r^{-2/3}`` (so ``phi ~ -3 q^{1/3} r^{1/3}``); the
    exponent is regressed over ``r in [1e-8, 1e-6] r_c``.  Large r: the two
    cube roots cancel and ``y r^2 -> -q/p``; measured at ``r = 1e4 r_c``.
    The printed large-r form ``phi = 2 (p/3)^{1/2} r`` is returned for the
    discrepancy report as ``printed_large_r_slope``.
    """
    if q == 0:
        raise DomainError("q must be nonzero")
    rc = crossover_radius(p, q)
    if regime == "small":
        r = np.geomspace(1e-8, 1e-6, 21) * rc
        y = np.array([cardano_real_root(CubicCoefficients(p, q, float(x))) for x in r])
        slope = float(np.polyfit(np.log(r), np.log(np.abs(y)), 1)[0])
        lead = float(y[0] * r[0] ** (2.0 / 3.0))
        return AsymptoteReport(
            "small", "y ~ -q^(1/3) r^(-2/3); phi ~ -3 q^(1/3) r^(1/3) + c", -2.0 / 3.0, slope, lead, -math.copysign(abs(q) ** (1 / 3), q)
        )
    if regime == "large":
        r = np.geomspace(1e3, 1e4, 11) * rc
        y = np.array([cardano_real_root(CubicCoefficients(p, q, float(x))) for x in r])
        slope = float(np.polyfit(np.log(r), np.log(np.abs(y)), 1)[0])
        limit = float(y[-1] * r[-1] ** 2)
        return AsymptoteReport(
            "large", "y ~ -q/(p r^2); phi ~ q/(p r) + c", -2.0, slope, limit, -q / p, 2.0 * math.sqrt(p / 3.0)
        )
    raise DomainError(f"regime must be 'small' or 'large', got {regime!r}")
