"""Regular and irregular Coulomb wave functions F_l(rho; eta), G_l(rho; eta).

Evaluation strategy, chosen by where each method keeps full precision:

* ``rho >= rho_s = max(turning point, 0.5)``: Steed's method.  CF1 gives
  ``F'/F`` (started at an order high enough that ``F > 0`` and recurred
  down, which fixes the sign of ``F``), CF2 gives ``(G' + iF')/(G + iF)``,
  and the Wronskian fixes the normalization.
* ``rho < rho_s``: ``F`` from ``C_l rho^{l+1} e^{-i rho} 1F1(l+1-i eta; 2l+2; 2i rho)``
  when the series keeps the requested accuracy, otherwise from the
  equivalent real power series; ``G`` by integrating the Coulomb equation
  inwards from ``rho_s`` (``G`` is the growing solution in that direction).

Derivatives always come from the same algorithm as the function, and every
result with an ODE leg is gated on the Wronskian ``F'G - FG' = 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .context import DEFAULT_ACCURACY, EvalAccuracy
from .errors import ConvergenceError, DomainError, OverflowGuardError, RangeError
from .special_functions import hyp1f1, log_gamma_complex

MAX_ELL = 10
MAX_ABS_ETA = 20.0
MAX_RHO = 200.0
# below this rho the CF2 normalization is not used even without a turning point
STEED_RHO_MIN = 0.5
WRONSKIAN_GATE = 1e-9

_TINY = 1e-300


@dataclass(frozen=True)
class CoulombParams:
    ell: int
    eta: float
    rho: float

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 0:
            raise DomainError(f"ell must be a nonnegative integer, got {self.ell}")
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if not math.isfinite(self.eta):
            raise DomainError(f"eta must be finite, got {self.eta}")
        if self.ell > MAX_ELL or abs(self.eta) > MAX_ABS_ETA or self.rho > MAX_RHO:
            raise RangeError(
                f"(ell, eta, rho) = ({self.ell}, {self.eta}, {self.rho}) outside the working range "
                f"ell <= {MAX_ELL}, |eta| <= {MAX_ABS_ETA}, rho <= {MAX_RHO}"
            )


@dataclass(frozen=True)
class CoulombValues:
    F: float
    dF: float
    G: float
    dG: float
    method: str

    @property
    def wronskian(self) -> float:
        return self.dF * self.G - self.F * self.dG


def sommerfeld_eta(q1q2: float, m1: float, m2: float, k: float, verbatim: bool = False) -> float:
    """Sommerfeld parameter for charges with product ``q1q2`` and masses ``m1, m2``.

    Masses are in electron masses (``math.inf`` for a fixed centre), ``k`` in
    inverse bohr.  The default is the conventional ``eta = mu q1 q2 / k``,
    negative for attraction.  ``verbatim=True`` returns
    ``sqrt(mu |q1 q2| / k)``, the square-root form with the sign lost.
    """
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    if not (m1 > 0 and m2 > 0):
        raise DomainError("masses must be positive")
    if math.isinf(m1) and math.isinf(m2):
        raise DomainError("at least one mass must be finite")
    mu = m2 if math.isinf(m1) else m1 if math.isinf(m2) else m1 * m2 / (m1 + m2)
    if verbatim:
        return math.sqrt(mu * abs(q1q2) / k)
    return mu * q1q2 / k


def turning_point(ell: int, eta: float) -> float:
    """Outer classical turning point ``eta + sqrt(eta^2 + l(l+1))`` (0 if none)."""
    return max(eta + math.sqrt(eta * eta + ell * (ell + 1)), 0.0)


def coulomb_phase(ell: int, eta: float) -> float:
    """Coulomb phase shift ``sigma_l = arg Gamma(l + 1 + i eta)``."""
    return log_gamma_complex(complex(ell + 1, eta)).imag


def log_normalization(ell: int, eta: float) -> float:
    """``ln C_l(eta)`` with ``C_l = 2^l e^{-pi eta/2} |Gamma(l+1+i eta)| / (2l+1)!``."""
    return (
        ell * math.log(2.0)
        - 0.5 * math.pi * eta
        + log_gamma_complex(complex(ell + 1, eta)).real
        - math.lgamma(2 * ell + 2)
    )


def coulomb_normalization(ell: int, eta: float, verbatim: bool = False) -> complex | float:
    """Normalization ``C_l(eta)``.

    ``verbatim=True`` replaces ``e^{-pi eta/2}`` by the phase ``e^{-i eta/2}``;
    the result is then complex and does not normalize ``F`` to unit amplitude.
    """
    if not verbatim:
        return math.exp(log_normalization(ell, eta))
    mag = math.exp(ell * math.log(2.0) + log_gamma_complex(complex(ell + 1, eta)).real - math.lgamma(2 * ell + 2))
    return mag * cmath.exp(-0.5j * eta)


def _steed_rho(ell: int, eta: float) -> float:
    return max(turning_point(ell, eta), STEED_RHO_MIN)


# ---------------------------------------------------------------- Steed


def _cf1(L: int, eta: float, rho: float, max_iter: int = 100_000) -> float:
    # F'_L / F_L = S_{L+1} - R_{L+1}^2 / (T_{L+1} - R_{L+2}^2 / (T_{L+2} - ...))
    def t_of(k):
        return (2 * k + 1) * (1.0 / rho + eta / (k * (k + 1)))

    k = L + 1
    g = t_of(k) or _TINY
    c, d = g, 0.0
    for _ in range(max_iter):
        k += 1
        a = -(1.0 + eta * eta / (k * k))
        t = t_of(k)
        d = t + a * d
        d = 1.0 / (d or _TINY)
        c = t + a / c
        c = c or _TINY
        delta = c * d
        g *= delta
        if abs(delta - 1.0) < 1e-16:
            s1 = (L + 1) / rho + eta / (L + 1)
            return s1 - (1.0 + eta * eta / ((L + 1) ** 2)) / g
    raise ConvergenceError(f"CF1 did not converge for (L, eta, rho) = ({L}, {eta}, {rho})")


def _cf2(ell: int, eta: float, rho: float, max_iter: int = 100_000) -> complex:
    # (H+)'/H+ = i(1 - eta/rho) + (i/rho) a_1/(b_1 + a_2/(b_2 + ...)),
    # a_n = (i eta - l + n - 1)(i eta + l + n),  b_n = 2(rho - eta + n i)
    f = _TINY + 0j
    c, d = f, 0j
    for n in range(1, max_iter):
        a = (1j * eta - ell + n - 1) * (1j * eta + ell + n)
        b = 2.0 * (rho - eta + n * 1j)
        d = b + a * d
        d = 1.0 / (d if d != 0 else _TINY)
        c = b + a / c
        if c == 0:
            c = _TINY
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return 1j * (1.0 - eta / rho) + 1j / rho * f
    raise ConvergenceError(f"CF2 did not converge for (l, eta, rho) = ({ell}, {eta}, {rho})")


def _start_order(ell: int, eta: float, rho: float) -> int:
    # an order whose turning point lies beyond rho, so F_L(rho) > 0
    L = max(ell, int(math.sqrt(rho * rho + 2.0 * abs(eta) * rho)) + 2)
    while turning_point(L, eta) <= rho:
        L += 1
    return L


def _steed(ell: int, eta: float, rho: float) -> CoulombValues:
    L = _start_order(ell, eta, rho)
    f = _cf1(L, eta, rho)
    u, du = 1e-200, f * 1e-200
    for m in range(L, ell, -1):
        r_m = math.sqrt(1.0 + eta * eta / (m * m))
        s_m = m / rho + eta / m
        u_prev = (s_m * u + du) / r_m
        du = s_m * u_prev - r_m * u
        u = u_prev
        if abs(u) > 1e200:
            du /= abs(u)
            u /= abs(u)
    f_ell = du / u
    pq = _cf2(ell, eta, rho)
    p, q = pq.real, pq.imag
    if not q > 0:
        raise ConvergenceError(f"CF2 gave nonpositive q at (l, eta, rho) = ({ell}, {eta}, {rho})")
    F = math.copysign(1.0 / math.sqrt((f_ell - p) ** 2 / q + q), u)
    G = (f_ell - p) * F / q
    return CoulombValues(F, f_ell * F, G, p * G - q * F, "steed")


# ---------------------------------------------------------------- series


def _f_hypergeometric(ell: int, eta: float, rho: float, accuracy: EvalAccuracy):
    """Complex ``C rho^{l+1} e^{-i rho} M`` and its derivative (raises on cancellation)."""
    a = complex(ell + 1, -eta)
    b = 2 * ell + 2
    z = 2j * rho
    m0 = hyp1f1(a, b, z, accuracy)
    m1 = hyp1f1(a + 1, b + 1, z, accuracy)
    c = math.exp(log_normalization(ell, eta))
    base = c * rho ** (ell + 1) * cmath.exp(-1j * rho)
    val = base * m0
    der = base * (((ell + 1) / rho - 1j) * m0 + 2j * (a / b) * m1)
    return val, der


def _f_power_series(ell: int, eta: float, rho: float, accuracy: EvalAccuracy, max_terms: int = 5000):
    # F = C sum_j A_j rho^j, j >= l+1;  (j+l)(j-l-1) A_j = 2 eta A_{j-1} - A_{j-2}
    lead = ell + 1
    a_prev2, a_prev1 = 1.0, eta / (ell + 1)
    s = a_prev2 + a_prev1 * rho
    ds = lead * a_prev2 + (lead + 1) * a_prev1 * rho
    biggest = max(abs(a_prev2), abs(a_prev1 * rho))
    power = rho
    for j in range(lead + 2, lead + max_terms):
        a = (2.0 * eta * a_prev1 - a_prev2) / ((j + ell) * (j - ell - 1))
        power *= rho
        term = a * power
        s += term
        ds += j * term
        biggest = max(biggest, abs(term))
        a_prev2, a_prev1 = a_prev1, a
        if abs(term) <= 1e-17 * abs(s) and abs(a_prev2 * power / rho) <= 1e-17 * abs(s) and j > lead + 2 * rho:
            break
    else:
        raise ConvergenceError(f"Coulomb F power series did not converge at rho={rho}")
    lost = 4.0 * np.finfo(float).eps * biggest / abs(s)
    if lost > accuracy.rel_tol:
        raise ConvergenceError(
            f"Coulomb F power series cancellation at (l, eta, rho) = ({ell}, {eta}, {rho}): accuracy {lost:.1e}",
            achieved=lost,
        )
    c = math.exp(log_normalization(ell, eta))
    return c * rho**lead * s, c * rho**ell * ds


def coulomb_f_complex(params: CoulombParams, verbatim: bool = False, accuracy: EvalAccuracy = DEFAULT_ACCURACY) -> complex:
    """``C_l rho^{l+1} e^{-i rho} 1F1(l+1-i eta; 2l+2; 2i rho)`` as a complex number.

    With the conventional normalization the imaginary part is rounding
    residue.  ``verbatim=True`` uses the phase-factor normalization.
    """
    val, _ = _f_hypergeometric(params.ell, params.eta, params.rho, accuracy)
    if verbatim:
        val = val / math.exp(log_normalization(params.ell, params.eta)) * coulomb_normalization(params.ell, params.eta, True)
    return val


def _f_small(ell: int, eta: float, rho: float, accuracy: EvalAccuracy) -> tuple[float, float, str]:
    try:
        val, der = _f_hypergeometric(ell, eta, rho, accuracy)
        return val.real, der.real, "hypergeometric"
    except ConvergenceError:
        f, df = _f_power_series(ell, eta, rho, accuracy)
        return f, df, "power_series"


# ---------------------------------------------------------------- ODE leg


def _inward_solution(ell: int, eta: float, rho_from: float, start: CoulombValues, rho_to: float, dense: bool = False):
    # u_xx = u_x + (l(l+1) + 2 eta rho - rho^2) u  in x = ln rho;  y = (u, u_x)
    ll = ell * (ell + 1)

    def rhs(x, y):
        r = math.exp(x)
        return (y[1], y[1] + (ll + 2.0 * eta * r - r * r) * y[0])

    x0, x1 = math.log(rho_from), math.log(rho_to)
    y0 = (start.G, rho_from * start.dG)
    sol = solve_ivp(rhs, (x0, x1), y0, method="DOP853", rtol=1e-13, atol=1e-300, dense_output=dense)
    if not sol.success:
        raise ConvergenceError(f"inward integration of G failed: {sol.message}")
    return sol


def _g_small(ell: int, eta: float, rho: float) -> tuple[float, float]:
    rho_s = _steed_rho(ell, eta)
    start = _steed(ell, eta, rho_s)
    sol = _inward_solution(ell, eta, rho_s, start, rho)
    g, gx = sol.y[0, -1], sol.y[1, -1]
    return g, gx / rho


def _gate(values: CoulombValues, params: CoulombParams) -> CoulombValues:
    for v in (values.F, values.dF, values.G, values.dG):
        if not math.isfinite(v):
            raise OverflowGuardError(f"Coulomb functions overflow at {params}")
    w = values.wronskian
    if abs(w - 1.0) > WRONSKIAN_GATE:
        raise ConvergenceError(
            f"Coulomb functions at {params} lost precision: Wronskian - 1 = {w - 1.0:.2e}",
            achieved=abs(w - 1.0),
        )
    return values


def coulomb_fg(params: CoulombParams, accuracy: EvalAccuracy = DEFAULT_ACCURACY) -> CoulombValues:
    """``F, F', G, G'`` at one point."""
    ell, eta, rho = params.ell, params.eta, params.rho
    if rho >= _steed_rho(ell, eta):
        return _gate(_steed(ell, eta, rho), params)
    f, df, how = _f_small(ell, eta, rho, accuracy)
    g, dg = _g_small(ell, eta, rho)
    return _gate(CoulombValues(f, df, g, dg, how + "+inward_ode"), params)


def coulomb_f(params: CoulombParams, accuracy: EvalAccuracy = DEFAULT_ACCURACY) -> tuple[float, float]:
    """Regular Coulomb function and its derivative ``(F, dF/drho)``."""
    ell, eta, rho = params.ell, params.eta, params.rho
    if rho >= _steed_rho(ell, eta):
        v = _steed(ell, eta, rho)
        return v.F, v.dF
    f, df, _ = _f_small(ell, eta, rho, accuracy)
    return f, df


def coulomb_g(params: CoulombParams, accuracy: EvalAccuracy = DEFAULT_ACCURACY) -> tuple[float, float]:
    """Irregular Coulomb function and its derivative ``(G, dG/drho)``."""
    v = coulomb_fg(params, accuracy)
    return v.G, v.dG


class CoulombWaves:
    """Fast repeated evaluation of ``F_l`` and ``G_l`` for fixed ``(l, eta)``.

    Below ``rho_s`` one inward integration with dense output serves every
    ``G`` request down to ``rho_min``; ``F`` there comes from the series.
    """

    def __init__(self, ell: int, eta: float, rho_min: float = 1e-10, accuracy: EvalAccuracy = DEFAULT_ACCURACY):
        CoulombParams(ell, eta, 1.0)
        if not rho_min > 0:
            raise DomainError("rho_min must be positive")
        self.ell, self.eta, self.rho_min, self.accuracy = ell, eta, rho_min, accuracy
        self.rho_s = _steed_rho(ell, eta)
        self._dense = None
        if rho_min < self.rho_s:
            start = _steed(ell, eta, self.rho_s)
            self._dense = _inward_solution(ell, eta, self.rho_s, start, rho_min, dense=True).sol

    def values(self, rho: float) -> CoulombValues:
        params = CoulombParams(self.ell, self.eta, rho)
        if rho >= self.rho_s:
            return _steed(self.ell, self.eta, rho)
        if rho < self.rho_min:
            raise DomainError(f"rho={rho} below the prepared range {self.rho_min}")
        f, df, how = _f_small(self.ell, self.eta, rho, self.accuracy)
        g, gx = self._dense(math.log(rho))
        return _gate(CoulombValues(f, df, float(g), float(gx) / rho, how + "+dense_ode"), params)

    def regular(self, rho: float) -> float:
        """``F_l(rho)`` alone; valid for any ``rho > 0`` in the working range."""
        CoulombParams(self.ell, self.eta, rho)
        if rho >= self.rho_s:
            return _steed(self.ell, self.eta, rho).F
        return _f_small(self.ell, self.eta, rho, self.accuracy)[0]

    def __call__(self, rho: float) -> tuple[float, float]:
        v = self.values(rho)
        return v.F, v.G
