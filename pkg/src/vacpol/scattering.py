"""Variable-phase scattering by a short-range add-on potential in a Coulomb field.

The phase function obeys

    d delta_l / dr = -(2 V(r) / k) [cos(delta_l) F_l(kr; eta) + sin(delta_l) G_l(kr; eta)]^2

(unit reduced mass, atomic units) and ``delta_l(inf)`` is the phase shift
of ``V`` relative to the Coulomb waves.  ``eta = charge_product / k``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.integrate import solve_ivp

from .context import PhysicalContext
from .coulomb_waves import CoulombWaves, coulomb_phase, turning_point
from .errors import ConvergenceError, DomainError, OverflowGuardError
from .potentials import _uehling_au, _wk_prefactor
from .special_functions import digamma

R_START_FACTOR = 1e-6


@dataclass(frozen=True)
class PhaseTrajectory:
    ell: int
    k: float
    samples: list[tuple[float, float]]
    delta_inf: float
    converged: bool
    tail_estimate: float
    error_estimate: float = 0.0
    eta: float = 0.0


@dataclass(frozen=True)
class CrossSectionPoint:
    theta: float
    dsigma: float
    components: tuple[float, float, float]
    amplitude_squared: float
    relative_discrepancy: float = field(default=math.nan)


def add_on_potential(ctx: PhysicalContext, which: str = "uehling", scale: float = 1.0) -> Callable[[float], float]:
    """Scalar atomic-unit potential ``scale * V(r)`` for ``which`` in
    {'uehling', 'wichmann_kroll', 'both', 'zero'}."""
    charge, alpha = ctx.charge_product, ctx.alpha
    pref = _wk_prefactor(ctx)

    def uehling(r):
        return scale * _uehling_au(r, charge, alpha)

    def wk(r):
        return scale * pref / (r * (r * r + alpha * alpha) ** 2)

    table = {
        "uehling": uehling,
        "wichmann_kroll": wk,
        "both": lambda r: uehling(r) + wk(r),
        "zero": lambda r: 0.0,
    }
    if which not in table:
        raise DomainError(f"unknown potential {which!r}")
    return table[which]


def _abs_tail(potential, r):
    val, _ = integrate.quad(lambda x: abs(potential(x)), r, math.inf, limit=200, epsrel=1e-6, epsabs=0.0)
    return val


def _envelope(waves: CoulombWaves, rho: float, ell: int, eta: float) -> float:
    # max of F^2 + G^2 on [rho, inf), sampled past the turning point
    hi = max(2.0 * turning_point(ell, eta), 2.0 * rho, rho + 10.0)
    hi = min(hi, 200.0)
    grid = np.geomspace(rho, hi, 24) if hi > rho else [rho]
    best = 1.0
    for x in grid:
        f, g = waves(float(x))
        best = max(best, f * f + g * g)
    return 1.5 * best


def _integrate_once(potential, ell, k, eta, rtol, tail_tol, r_max, waves):
    r0 = R_START_FACTOR / k

    def born_start():
        def f(r):
            F = waves.regular(k * r)
            return potential(r) * F * F

        val, _ = integrate.quad(f, 0.0, r0, epsabs=0.0, epsrel=1e-12, limit=200)
        return -2.0 / k * val

    def rhs(x, y):
        r = math.exp(x)
        F, G = waves(k * r)
        s = math.cos(y[0]) * F + math.sin(y[0]) * G
        return (-2.0 * potential(r) / k * s * s * r,)

    delta = born_start()
    samples = [(0.0, 0.0), (r0, delta)]
    r = r0
    tail = math.inf
    while True:
        r_next = min(max(2.0 * r, 1e-3 / k), r_max)
        sol = solve_ivp(
            rhs, (math.log(r), math.log(r_next)), (delta,), method="DOP853", rtol=rtol, atol=1e-300, dense_output=False
        )
        if not sol.success:
            raise ConvergenceError(f"phase integration failed near r={r}: {sol.message}")
        for x, d in zip(sol.t[1:], sol.y[0, 1:]):
            samples.append((math.exp(x), float(d)))
        delta = float(sol.y[0, -1])
        r = r_next
        tail = 2.0 / k * _abs_tail(potential, r) * _envelope(waves, k * r, ell, eta)
        if tail <= max(tail_tol * abs(delta), 1e-300) or r >= r_max:
            break
    return delta, samples, tail


def integrate_phase(
    potential: Callable[[float], float],
    ell: int,
    k: float,
    ctx: PhysicalContext,
    rtol: float = 1e-10,
    tail_tol: float = 1e-9,
    r_max: float | None = None,
) -> PhaseTrajectory:
    """Integrate the phase equation for ``potential`` (atomic units) and return the trajectory.

    ``k`` is in the context's wave-number units.  The Coulomb background has
    ``eta = ctx.charge_product / k``.  Integration starts at
    ``r_start = 1e-6 / k`` with the first-order Born increment over
    ``[0, r_start]``, proceeds in doubling chunks, and stops once
    ``(2/k) int_r^inf |V| dr * max(F^2 + G^2)`` drops below
    ``tail_tol * |delta|``.  The error estimate is the change of
    ``delta_inf`` when ``rtol`` is loosened tenfold, plus the tail bound.
    """
    if int(ell) != ell or ell < 0:
        raise DomainError(f"ell must be a nonnegative integer, got {ell}")
    k_au = ctx.to_atomic(k, "wavenumber")
    if not k_au > 0:
        raise DomainError(f"k must be positive, got {k}")
    eta = ctx.charge_product / k_au
    r_max = 200.0 / k_au if r_max is None else min(r_max, 200.0 / k_au)
    waves = CoulombWaves(int(ell), eta, rho_min=0.5 * R_START_FACTOR * 1e-3)
    if potential(R_START_FACTOR / k_au) == 0.0 and potential(1.0 / k_au) == 0.0 and _abs_tail(potential, R_START_FACTOR / k_au) == 0.0:
        return PhaseTrajectory(int(ell), k, [(0.0, 0.0), (r_max, 0.0)], 0.0, True, 0.0, 0.0, eta)
    delta, samples, tail = _integrate_once(potential, ell, k_au, eta, rtol, tail_tol, r_max, waves)
    coarse, _, _ = _integrate_once(potential, ell, k_au, eta, 10.0 * rtol, tail_tol, r_max, waves)
    converged = tail <= max(tail_tol * abs(delta), 1e-300)
    if not math.isfinite(delta):
        raise OverflowGuardError("phase function is not finite")
    return PhaseTrajectory(
        ell=int(ell),
        k=k,
        samples=[(ctx.from_atomic(r, "length"), d) for r, d in samples],
        delta_inf=delta,
        converged=converged,
        tail_estimate=tail,
        error_estimate=abs(delta - coarse) + tail,
        eta=eta,
    )


def born_phase(potential: Callable[[float], float], ell: int, k: float, ctx: PhysicalContext) -> float:
    """First-order phase ``-(2/k) int_0^inf V F_l^2 dr`` by direct quadrature."""
    k_au = ctx.to_atomic(k, "wavenumber")
    eta = ctx.charge_product / k_au
    waves = CoulombWaves(int(ell), eta, rho_min=1.0)

    def f(r):
        F = waves.regular(k_au * r)
        return potential(r) * F * F

    edges = [0.0, 1e-6 / k_au, ctx.alpha, 10 * ctx.alpha, 100 * ctx.alpha, 1.0 / k_au, 200.0 / k_au]
    edges = sorted(set(e for e in edges if e <= 200.0 / k_au))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(f, lo, hi, epsabs=0.0, epsrel=1e-12, limit=400)[0]
    return -2.0 / k_au * total


def coulomb_amplitude(theta: float, k: float, eta: float) -> complex:
    """Pure Coulomb amplitude ``-eta / (2k s^2) exp(-i eta ln s^2 + 2 i sigma_0)``, ``s = sin(theta/2)``."""
    if not 0 < theta <= math.pi:
        raise DomainError(f"theta must lie in (0, pi], got {theta}")
    s2 = math.sin(0.5 * theta) ** 2
    sigma0 = coulomb_phase(0, eta)
    return -eta / (2.0 * k * s2) * cmath.exp(-1j * eta * math.log(s2) + 2j * sigma0)


def total_amplitude(theta: float, k: float, delta0: float, ctx: PhysicalContext, coulomb_phase0: float | None = None, eta: float | None = None) -> complex:
    """``f_C(theta) + (1/2ik)[e^{2i delta0} - 1] e^{2i sigma_0}``.

    ``eta`` defaults to ``ctx.charge_product / k`` and ``coulomb_phase0`` to
    ``arg Gamma(1 + i eta)``.
    """
    k_au = ctx.to_atomic(k, "wavenumber")
    if not k_au > 0:
        raise DomainError(f"k must be positive, got {k}")
    eta = ctx.charge_product / k_au if eta is None else eta
    sigma0 = coulomb_phase(0, eta) if coulomb_phase0 is None else coulomb_phase0
    f_c = coulomb_amplitude(theta, k_au, eta)
    return f_c + (cmath.exp(2j * delta0) - 1.0) / (2j * k_au) * cmath.exp(2j * sigma0)


def differential_cross_section(theta: float, k: float, delta0: float, a_C: float, ctx: PhysicalContext) -> CrossSectionPoint:
    """Interference cross-section in the printed three-term form, and ``|f|^2``.

    ``dsigma`` and ``components`` (pure Coulomb, interference,
    vacuum-polarization) follow the printed bracket with prefactor
    ``Q^2 / (2 v^2)``, ``v = k``.  ``amplitude_squared`` is ``|f(theta)|^2``
    from :func:`total_amplitude` with ``eta = 1 / (k a_C)``, which carries
    the prefactor ``eta^2 / (4 k^2)``.
    """
    if not 0 < theta <= math.pi:
        raise DomainError(f"theta must lie in (0, pi], got {theta}")
    k_au = ctx.to_atomic(k, "wavenumber")
    if not k_au > 0:
        raise DomainError(f"k must be positive, got {k}")
    if a_C == 0:
        raise DomainError("a_C must be nonzero")
    s = math.sin(0.5 * theta)
    x = k_au * a_C
    pref = ctx.charge_product**2 / (2.0 * k_au * k_au)
    sd = math.sin(delta0)
    coulomb = pref / s**4
    interference = -pref * 4.0 * x / (s * s) * sd * math.cos(2.0 / x * math.log(s) + delta0)
    vp = pref * 4.0 * x * x * sd * sd
    dsigma = coulomb + interference + vp
    eta = 1.0 / x
    amp2 = abs(total_amplitude(theta, k, delta0, ctx, eta=eta)) ** 2
    return CrossSectionPoint(theta, dsigma, (coulomb, interference, vp), amp2, (dsigma - amp2) / amp2)


def cot_delta_relation(k: float, a_C: float, kappa: float) -> float:
    """Solve ``cot delta0 = -(1/pi)[e^{2pi/(k a_C)} - 1][Re psi(-i/(k a_C)) + ln(k a_C) + kappa a_C / 2]``.

    Returns the principal branch ``delta0`` in ``(0, pi)``.  ``kappa`` has no
    default: it is an external constant the caller must supply.
    """
    if not k > 0 or not a_C > 0:
        raise DomainError("k and a_C must be positive")
    x = k * a_C
    exponent = 2.0 * math.pi / x
    if exponent > 700.0:
        raise OverflowGuardError(f"exp(2 pi / (k a_C)) overflows for k a_C = {x}")
    bracket = math.expm1(exponent)
    psi = digamma(complex(0.0, -1.0 / x)).real
    cot = -(1.0 / math.pi) * bracket * (psi + math.log(x) + 0.5 * kappa * a_C)
    return math.atan2(1.0, cot)
