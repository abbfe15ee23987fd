"""Hydrogenic bound states with vacuum-polarization corrections, and cusp values.

The electron sees the nucleus through the charge product ``-Q``, so the
Uehling term is attractive and the Wichmann-Kroll term repulsive.
Energies are in hartree and lengths in bohr unless a context says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize
from scipy.special import eval_genlaguerre, gammaln

from .context import EULER_GAMMA, EvalAccuracy, PhysicalContext, minimal_distance
from .errors import ConvergenceError, DomainError
from .potentials import _uehling_au
from .quadrature import exp_sinh, tanh_sinh

ELECTRON_ELECTRON_CUSP = 0.5
NUMEROV_STEPS = 20000
# beyond this z = 2r/alpha the Uehling term is below 1e-300 relative
_UEHLING_CUTOFF_Z = 1400.0


@dataclass(frozen=True)
class HydrogenicState:
    n: int
    ell: int
    Q: float
    energy: float

    @property
    def node_count(self) -> int:
        return self.n - self.ell - 1

    def radial(self, r):
        """Normalized ``R_nl(r)`` (vectorized)."""
        r = np.asarray(r, dtype=float)
        n, ell, Q = self.n, self.ell, self.Q
        rho = 2.0 * Q * r / n
        log_norm = 1.5 * math.log(2.0 * Q / n) + 0.5 * (gammaln(n - ell) - math.log(2.0 * n) - gammaln(n + ell + 1))
        return math.exp(log_norm) * np.exp(-0.5 * rho) * rho**ell * eval_genlaguerre(n - ell - 1, 2 * ell + 1, rho)

    def cusp_ratio(self) -> float:
        """``R'(0) / R(0)`` from the Laguerre polynomial at the origin."""
        if self.ell > 0:
            raise DomainError("states with ell > 0 vanish at the origin and have no contact cusp")
        m = self.n - 1
        # L_m^(1)(0) = m + 1,  d/drho L_m^(1)(0) = -m (m + 1) / 2
        return (2.0 * self.Q / self.n) * (-0.5 - 0.5 * m)


def hydrogenic_state(n: int, ell: int, Q: float) -> HydrogenicState:
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if int(ell) != ell or not 0 <= ell < n:
        raise DomainError(f"ell must satisfy 0 <= ell < n, got ell={ell}, n={n}")
    if not Q > 0:
        raise DomainError(f"Q must be positive, got {Q}")
    return HydrogenicState(int(n), int(ell), float(Q), -Q * Q / (2.0 * n * n))


def _vp_terms(Q: float, alpha: float, which: str) -> Callable[[np.ndarray], np.ndarray]:
    # atomic-unit add-on potential felt by an electron (charge product -Q)
    if which not in ("uehling", "wichmann_kroll", "both"):
        raise DomainError(f"unknown potential {which!r}")
    charge = -Q
    wk_pref = -2.0 * charge**3 * alpha**7 / (225.0 * math.pi)
    cutoff = 0.5 * _UEHLING_CUTOFF_Z * alpha

    def uehling(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.zeros_like(r)
        for i, x in enumerate(r):
            if x < cutoff:
                out[i] = _uehling_au(x, charge, alpha)
        return out

    def wk(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return wk_pref / (r * (r * r + alpha * alpha) ** 2)

    if which == "uehling":
        return uehling
    if which == "wichmann_kroll":
        return wk
    return lambda r: uehling(r) + wk(r)


@dataclass(frozen=True)
class ShiftEstimate:
    value: float
    double_exponential: float
    quadpack: float
    relative_difference: float


def perturbative_shift_dual(state: HydrogenicState, which: str, ctx: PhysicalContext) -> ShiftEstimate:
    """``<nl|V|nl>`` by two independent quadratures, in atomic units.

    Route one splits at ``r = alpha``: tanh-sinh on ``[0, alpha]`` (it absorbs
    the logarithmic singularity of the Uehling term) and exp-sinh beyond.
    Route two is QUADPACK with breakpoints.  ``value`` is route one.
    """
    alpha = ctx.alpha
    if ctx.charge_product == 0 or state.Q == 0:
        return ShiftEstimate(0.0, 0.0, 0.0, 0.0)
    V = _vp_terms(state.Q, alpha, which)

    def integrand(r):
        R = state.radial(r)
        return V(r) * R * R * r * r

    acc = EvalAccuracy(rel_tol=1e-13)
    inner, _ = tanh_sinh(integrand, 0.0, alpha, acc)
    outer, _ = exp_sinh(integrand, alpha, scale=alpha, accuracy=acc, t_min=-4.5, t_max=5.0)
    de = inner + outer

    def scalar(r):
        return float(integrand(r)[0])

    edges = [0.0, alpha, 10 * alpha, 100 * alpha, state.n**2 / state.Q, math.inf]
    edges = sorted(set(edges))
    pieces = [integrate.quad(scalar, lo, hi, epsabs=0.0, epsrel=1e-12, limit=400)[0] for lo, hi in zip(edges[:-1], edges[1:])]
    qp = math.fsum(pieces)
    rel = abs(de - qp) / max(abs(qp), 1e-300)
    return ShiftEstimate(de, de, qp, rel)


def perturbative_shift(state: HydrogenicState, which: str, ctx: PhysicalContext) -> float:
    """First-order energy shift ``<nl|V|nl>`` in the context's energy units.

    Raises :class:`ConvergenceError` if the two quadrature routes differ by
    more than 1e-9 relative.
    """
    est = perturbative_shift_dual(state, which, ctx)
    if est.relative_difference > 1e-9 and abs(est.value) > 1e-300:
        raise ConvergenceError(
            f"quadrature routes disagree by {est.relative_difference:.2e}", achieved=est.relative_difference
        )
    return ctx.from_atomic(est.value, "energy")


@dataclass(frozen=True)
class NumerovGrid:
    r_min: float
    r_max: float
    steps: int = NUMEROV_STEPS


@dataclass(frozen=True)
class EigenSolution:
    energy: float
    r: np.ndarray
    u: np.ndarray
    nodes: int
    mean_inverse_r: float


def default_grid(n: int, Q: float) -> NumerovGrid:
    return NumerovGrid(1e-6 / Q, 60.0 * n * n / Q)


def _numerov(g: np.ndarray, h: float, phi0: float, phi1: float) -> np.ndarray:
    # phi'' = g phi
    c = 1.0 - (h * h / 12.0) * g
    phi = np.empty_like(g)
    phi[0], phi[1] = phi0, phi1
    a = c.tolist()
    p0, p1 = phi0, phi1
    out = [p0, p1]
    for i in range(1, len(a) - 1):
        p2 = ((12.0 - 10.0 * a[i]) * p1 - a[i - 1] * p0) / a[i + 1]
        out.append(p2)
        p0, p1 = p1, p2
    phi[:] = out
    return phi


def _nodes(phi: np.ndarray) -> int:
    s = np.sign(phi[:-1])
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def numerov_eigensolve(
    n: int,
    ell: int,
    Q: float,
    mode: str = "coulomb",
    grid: NumerovGrid | None = None,
    ctx: PhysicalContext | None = None,
) -> EigenSolution:
    """Eigenvalue with ``n - ell - 1`` nodes by Numerov shooting on ``x = ln(Q r)``.

    With ``u = e^{x/2} phi`` the radial equation becomes
    ``phi'' = [2 r^2 (V - E) + (ell + 1/2)^2] phi``.  The outward solution is
    started from its small-r power law, the eigenvalue is bracketed by node
    counting and refined with ``brentq`` on ``phi(r_max)``.  ``mode`` is
    'coulomb' or 'total' (Coulomb + Uehling + Wichmann-Kroll).
    """
    state = hydrogenic_state(n, ell, Q)
    ctx = ctx or PhysicalContext(Q=Q)
    grid = grid or default_grid(n, Q)
    if grid.r_min > 1e-5 / Q or grid.r_max < 50.0 * n * n / Q:
        raise DomainError(
            f"grid too coarse: need r_min <= {1e-5 / Q:.3g} and r_max >= {50.0 * n * n / Q:.3g}, got [{grid.r_min}, {grid.r_max}]"
        )
    if grid.steps < 1000:
        raise DomainError("grid too coarse: at least 1000 steps required")
    x = np.linspace(math.log(Q * grid.r_min), math.log(Q * grid.r_max), grid.steps + 1)
    h = x[1] - x[0]
    r = np.exp(x) / Q
    V = -Q / r
    if mode == "total":
        V = V + _vp_terms(Q, ctx.alpha, "both")(r)
    elif mode != "coulomb":
        raise DomainError(f"mode must be 'coulomb' or 'total', got {mode!r}")
    r2 = r * r
    lam = (ell + 0.5) ** 2
    target = state.node_count

    def shoot(E):
        g = 2.0 * r2 * (V - E) + lam
        return _numerov(g, h, math.exp((ell + 0.5) * x[0]), math.exp((ell + 0.5) * x[1]))

    def end_value(E):
        phi = shoot(E)
        return phi[-1] / np.max(np.abs(phi))

    E0 = state.energy
    width = 1e-3 * abs(E0)
    lo, hi = E0 - width, E0 + width
    for _ in range(60):
        n_lo, n_hi = _nodes(shoot(lo)), _nodes(shoot(hi))
        if n_lo <= target < n_hi or (n_lo == target and n_hi == target + 1):
            break
        if n_lo > target:
            lo -= width
        if n_hi <= target:
            hi += width
        width *= 2.0
    else:
        raise ConvergenceError(f"no sign change: could not bracket the (n={n}, ell={ell}) eigenvalue")
    # narrow to the interval where the node count steps from target to target + 1
    for _ in range(200):
        if _nodes(shoot(lo)) == target and _nodes(shoot(hi)) == target + 1:
            break
        mid = 0.5 * (lo + hi)
        if _nodes(shoot(mid)) > target:
            hi = mid
        else:
            lo = mid
    f_lo, f_hi = end_value(lo), end_value(hi)
    if f_lo * f_hi > 0:
        raise ConvergenceError(f"no sign change of phi(r_max) in [{lo}, {hi}]")
    E = optimize.brentq(end_value, lo, hi, xtol=1e-15 * abs(E0), rtol=4 * np.finfo(float).eps, maxiter=200)
    phi = shoot(E)
    # trim the growing tail left after the root
    half = len(phi) // 2
    cut = int(np.argmin(np.abs(phi[half:]))) + half
    u = np.exp(0.5 * x) * phi
    u[cut + 1 :] = 0.0
    # int u^2 dr = int u^2 r dx
    norm = integrate.simpson(u * u * r, x=x)
    u = u / math.sqrt(norm)
    mean_inv = integrate.simpson(u * u, x=x)
    return EigenSolution(E, r, u, _nodes(phi[: cut + 1]), mean_inv)


def virial_ratio(sol: EigenSolution, Q: float) -> float:
    """``<T> / (-E)`` for a Coulomb eigensolution; 1 for an exact solution."""
    kinetic = sol.energy + Q * sol.mean_inverse_r
    return kinetic / -sol.energy


def direct_shift(n: int, ell: int, Q: float, ctx: PhysicalContext, grid: NumerovGrid | None = None) -> float:
    """``E_total - E_coulomb`` from two eigensolves on the same grid (atomic units)."""
    e_c = numerov_eigensolve(n, ell, Q, "coulomb", grid, ctx).energy
    e_t = numerov_eigensolve(n, ell, Q, "total", grid, ctx).energy
    return e_t - e_c


def cusp_operator_value(state: HydrogenicState) -> float:
    """Contact value ``R'(0)/R(0)`` of an s state; ``-Q`` for every hydrogenic ns state."""
    return state.cusp_ratio()


def pair_cusp(m1: float, m2: float, q1: float, q2: float) -> float:
    """Coulomb cusp ``mu q1 q2`` of a pair; infinite masses allowed."""
    if math.isinf(m1) and math.isinf(m2):
        raise DomainError("at least one mass must be finite")
    mu = m2 if math.isinf(m1) else m1 if math.isinf(m2) else m1 * m2 / (m1 + m2)
    return mu * q1 * q2


@dataclass(frozen=True)
class CuspReport:
    nu_coulomb: float
    nu_modified: float
    C_param: float
    f_param: float
    uehling_rel_correction: float
    wk_abs_correction: float


def cusp_at_distance(r: float, Q: float, f_param: float, ctx: PhysicalContext) -> float:
    """r-dependent cusp ``-Q{1 - (alpha/3pi)[5/3 + 2 gamma - 2 ln alpha + 2 ln r]} + f 2Q^3 alpha^3/(225 pi)``.

    Diverges logarithmically as ``r -> 0``; evaluating at ``r = C alpha``
    gives :func:`modified_cusp`.
    """
    if not r > 0:
        raise DomainError("r must be positive")
    a = ctx.alpha
    r_au = ctx.to_atomic(r, "length")
    bracket = 5.0 / 3.0 + 2.0 * EULER_GAMMA - 2.0 * math.log(a) + 2.0 * math.log(r_au)
    return -Q * (1.0 - a / (3.0 * math.pi) * bracket) + f_param * 2.0 * Q**3 * a**3 / (225.0 * math.pi)


def modified_cusp(Q: float, C_param: float = 1.0, f_param: float | None = None, ctx: PhysicalContext | None = None) -> CuspReport:
    """Cusp with the vacuum-polarization terms cut off at ``a_min = C alpha``.

    ``nu = -Q{1 - (alpha/3pi)[5/3 + 2 gamma + 2 ln C]} + f 2 Q^3 alpha^3 / (225 pi)``
    with ``f = 1/(1 + C^2)`` unless given.  Values in atomic units.
    """
    if not Q > 0:
        raise DomainError("Q must be positive")
    if not C_param > 0:
        raise DomainError("C must be positive")
    ctx = ctx or PhysicalContext(Q=Q)
    a = ctx.alpha
    f = 1.0 / (1.0 + C_param * C_param) if f_param is None else f_param
    rel = a / (3.0 * math.pi) * (5.0 / 3.0 + 2.0 * EULER_GAMMA + 2.0 * math.log(C_param))
    wk = f * 2.0 * Q**3 * a**3 / (225.0 * math.pi)
    nu = -Q * (1.0 - rel) + wk
    return CuspReport(-Q, nu, C_param, f, rel, wk)


def minimal_cusp_distance(Q: float, ctx: PhysicalContext | None = None) -> float:
    """``a_min = Lambda_e / Q`` in bohr."""
    return minimal_distance(Q, ctx or PhysicalContext(Q=Q))
