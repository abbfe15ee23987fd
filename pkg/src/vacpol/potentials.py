"""Uehling and Wichmann-Kroll potentials and the total two-charge potential.

Lengths and energies are read and returned in the units of the supplied
:class:`PhysicalContext`; internally everything is atomic units.  The charge
factor is ``ctx.charge_product`` (``Q`` in nuclear mode, ``q1*q2`` in pair
mode).  The Uehling part is linear in it, the Wichmann-Kroll part cubic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import integrate
from scipy.special import binom, gamma

from .context import EULER_GAMMA, PhysicalContext
from .errors import ConvergenceError, DomainError
from .special_functions import bickley_family

# z = 2r/alpha above which the Uehling bracket is taken from its asymptotic
# series instead of the cancelling K0/Ki combination
ASYMPTOTIC_SWITCH = 40.0


def _watson_coefficients(n: int) -> np.ndarray:
    # Taylor coefficients of h(s) = [(1+s)^-2 + (1+s)^-4 / 2] sqrt(1 + s/2),
    # the smooth factor of the integral-form weight at xi = 1 + s
    j = np.arange(n)
    inv2 = (-1.0) ** j * (j + 1)
    inv4 = (-1.0) ** j * binom(j + 3, 3)
    root = binom(0.5, j) * 0.5**j
    return np.convolve(inv2 + 0.5 * inv4, root)[:n] * gamma(j + 1.5)


_WATSON = _watson_coefficients(120)


def _check_r(r):
    if not r > 0:
        raise DomainError(f"distance must be positive, got {r}")


def _uehling_bracket_asymptotic(z: float) -> float:
    """``z**1.5 * exp(z) * int_1^inf exp(-z xi) g(xi) dxi`` summed to its smallest term."""
    total = 0.0
    prev = math.inf
    inv = 1.0 / z
    power = 1.0
    for c in _WATSON:
        term = c * power
        if abs(term) > abs(prev):
            break
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return math.sqrt(2.0) * total
        prev = term
        power *= inv
    if abs(prev) > 1e-11 * abs(total):
        raise ConvergenceError(f"Uehling asymptotic series too short at z={z}", achieved=abs(prev / total))
    return math.sqrt(2.0) * total


def _uehling_au(r: float, charge: float, alpha: float, form: str = "closed", z: float | None = None) -> float:
    # form: "closed", "tridiagonal", or "tridiagonal_printed" (q - 1 and q + 1 swapped)
    if z is None:
        z = 2.0 * r / alpha
    if charge == 0:
        return 0.0
    if z > ASYMPTOTIC_SWITCH:
        # U = (2 alpha Q / 3 pi r) e^{-z} z^{-3/2} * bracket
        return (4.0 * charge / (3.0 * math.pi * z)) * math.exp(-z) * z**-1.5 * _uehling_bracket_asymptotic(z)
    k0, ki1, ki2 = (Fraction(v) for v in bickley_family(z, scaled=True))
    scale = math.exp(-z)
    # the terms cancel strongly for large z: combine them in exact rational
    # arithmetic so the only rounding is in the special-function values
    zf = Fraction(z)
    if form == "closed":
        x = zf / 2
        bracket = (1 + x * x / 3) * k0 - (x / 6) * ki1 - (Fraction(5, 6) + x * x / 3) * ki2
        return 4.0 * charge / (3.0 * math.pi * z) * float(bracket) * scale
    q = zf * zf + 11
    if form == "tridiagonal_printed":
        bracket = (q - 1) * k0 - zf * ki1 - (q + 1) * ki2
    else:
        bracket = (q + 1) * k0 - zf * ki1 - (q - 1) * ki2
    return charge / (9.0 * math.pi * z) * float(bracket) * scale


def uehling_closed(r: float, ctx: PhysicalContext) -> float:
    """Uehling potential from the closed K0 / Bickley-function expression.

    Beyond ``2r/alpha = ASYMPTOTIC_SWITCH`` the leading terms of the
    expression cancel, and the large-distance asymptotic series of the same
    combination is used instead.
    """
    _check_r(r)
    r_au = ctx.to_atomic(r, "length")
    return ctx.from_atomic(_uehling_au(r_au, ctx.charge_product, ctx.alpha), "energy")


def uehling_tridiagonal(z: float, ctx: PhysicalContext, verbatim: bool = False) -> float:
    """Uehling potential at ``z = 2r/alpha`` written with ``q(z) = z**2 + 11``.

    The regrouping of the closed form is
    ``(Q / 9 pi z) [(q + 1) K0 - z Ki1 - (q - 1) Ki2]``.  ``verbatim=True``
    evaluates the variant with ``q - 1`` on K0 and ``q + 1`` on Ki2, which is
    not equal to the closed form and exists only for the discrepancy report.
    Above the asymptotic switch both share the series branch.
    """
    if not z > 0:
        raise DomainError(f"z must be positive, got {z}")
    r_au = 0.5 * z * ctx.alpha
    form = "tridiagonal_printed" if verbatim else "tridiagonal"
    return ctx.from_atomic(_uehling_au(r_au, ctx.charge_product, ctx.alpha, form=form, z=float(z)), "energy")


def uehling_integral(r: float, ctx: PhysicalContext, rel_tol: float = 1e-13) -> float:
    """Uehling potential by adaptive quadrature of its defining integral.

    Independent of the Bickley-function machinery; this is the reference
    the closed form is checked against.  The substitution ``xi = 1 + s**2``
    removes the square-root endpoint singularity.
    """
    _check_r(r)
    charge = ctx.charge_product
    if charge == 0:
        return 0.0
    alpha = ctx.alpha
    r_au = ctx.to_atomic(r, "length")
    z = 2.0 * r_au / alpha

    def integrand(s):
        xi = 1.0 + s * s
        return math.exp(-z * s * s) * (1.0 + 0.5 / (xi * xi)) * 2.0 * s * s * math.sqrt(2.0 + s * s) / (xi * xi)

    # bulk of the weight sits at s ~ 1/sqrt(z); split there
    s_mid = 1.0 / math.sqrt(z)
    pieces = []
    for lo, hi in ((0.0, s_mid), (s_mid, 10.0 * s_mid), (10.0 * s_mid, math.inf)):
        val, err, info = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=400, full_output=1)[:3]
        if err > 10 * rel_tol * abs(val) + 1e-300 and err > 1e-15 * abs(val):
            raise ConvergenceError(f"Uehling integral quadrature failed at r={r}: error estimate {err:.2e}", achieved=err)
        pieces.append(val)
    total = math.fsum(pieces) * math.exp(-z)
    return ctx.from_atomic(2.0 * alpha * charge / (3.0 * math.pi * r_au) * total, "energy")


def uehling_asymptote_small_r(r: float, ctx: PhysicalContext) -> float:
    """Short-distance form ``(Q/r)(alpha/3pi)[-5/3 - 2 gamma + 2 ln alpha - 2 ln r]``."""
    _check_r(r)
    a = ctx.alpha
    r_au = ctx.to_atomic(r, "length")
    val = ctx.charge_product / r_au * (a / (3.0 * math.pi)) * (
        -5.0 / 3.0 - 2.0 * EULER_GAMMA + 2.0 * math.log(a) - 2.0 * math.log(r_au)
    )
    return ctx.from_atomic(val, "energy")


def uehling_asymptote_large_r(r: float, ctx: PhysicalContext) -> float:
    """Long-distance form ``(Q/r) alpha^{5/2} / (4 sqrt(pi) r^{3/2}) exp(-2r/alpha)``."""
    _check_r(r)
    a = ctx.alpha
    r_au = ctx.to_atomic(r, "length")
    val = ctx.charge_product / r_au * a**2.5 / (4.0 * math.sqrt(math.pi) * r_au**1.5) * math.exp(-2.0 * r_au / a)
    return ctx.from_atomic(val, "energy")


def _wk_prefactor(ctx: PhysicalContext) -> float:
    return -2.0 * ctx.charge_product**3 * ctx.alpha**7 / (225.0 * math.pi)


def wichmann_kroll_raw(r: float, ctx: PhysicalContext) -> float:
    """Unregularized Wichmann-Kroll potential ``-2 Q^3 alpha^7 / (225 pi r^5)``."""
    _check_r(r)
    r_au = ctx.to_atomic(r, "length")
    return ctx.from_atomic(_wk_prefactor(ctx) / r_au**5, "energy")


def wichmann_kroll_regularized(r: float, ctx: PhysicalContext) -> float:
    """Wichmann-Kroll potential with the ``r (r^2 + alpha^2)^2`` denominator.

    This is the form used everywhere else in the package.
    """
    _check_r(r)
    r_au = ctx.to_atomic(r, "length")
    return ctx.from_atomic(_wk_prefactor(ctx) / (r_au * (r_au * r_au + ctx.alpha**2) ** 2), "energy")


@dataclass(frozen=True)
class PotentialSample:
    r: float
    coulomb: float
    uehling: float
    wichmann_kroll: float

    @property
    def total(self) -> float:
        return self.coulomb + self.uehling + self.wichmann_kroll


def total_potential(r12: float, ctx: PhysicalContext) -> PotentialSample:
    """Coulomb + Uehling + regularized Wichmann-Kroll for the charges in ``ctx``."""
    _check_r(r12)
    r_au = ctx.to_atomic(r12, "length")
    coulomb = ctx.from_atomic(ctx.charge_product / r_au, "energy")
    return PotentialSample(r12, coulomb, uehling_closed(r12, ctx), wichmann_kroll_regularized(r12, ctx))


def potential_table(r_values: Iterable[float], ctx: PhysicalContext, workers: int = 1) -> list[PotentialSample]:
    """Evaluate :func:`total_potential` on a grid; output order follows the input."""
    r_values = list(r_values)
    if workers <= 1:
        return [total_potential(r, ctx) for r in r_values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: total_potential(r, ctx), r_values))


def radial_potential(kind: str, ctx: PhysicalContext):
    """Vectorized atomic-unit potential energy ``V(r)`` for ``kind`` in
    {'uehling', 'wichmann_kroll', 'both'}, for use by integrators."""
    charge = ctx.charge_product
    alpha = ctx.alpha
    pref = _wk_prefactor(ctx)

    def uehling(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return np.array([_uehling_au(x, charge, alpha) for x in r])

    def wk(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return pref / (r * (r * r + alpha * alpha) ** 2)

    if kind == "uehling":
        return uehling
    if kind == "wichmann_kroll":
        return wk
    if kind == "both":
        return lambda r: uehling(r) + wk(r)
    raise DomainError(f"unknown potential kind {kind!r}")
