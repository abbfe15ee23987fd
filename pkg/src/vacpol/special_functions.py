"""Special functions used throughout the package.

K0 and the Bickley functions Ki_n share one kernel: the integral

    Ki_n(z) = int_0^inf exp(-z cosh t) sech(t)**n dt ,   Ki_0 = K0,

whose integrand already decays double-exponentially in ``t`` for ``z > 0``.
A trapezoidal sum on that variable is therefore a double-exponential rule;
it is refined by step halving until two levels agree.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .context import DEFAULT_ACCURACY, EULER_GAMMA, EvalAccuracy
from .errors import ConvergenceError, DomainError, PoleError

_EPS = np.finfo(float).eps
_LN2 = math.log(2.0)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)

# B_2k for k = 1..8
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)

K0_SERIES_MAX = 2.0
K0_ASYMPTOTIC_MIN = 18.0


def _bickley_scaled(z: float, orders, accuracy: EvalAccuracy) -> np.ndarray:
    """``exp(z) * Ki_n(z)`` for every ``n`` in ``orders`` (shared nodes)."""
    orders = np.asarray(orders)
    n_min = int(orders.min())
    cut = 40.0 + 0.5 * math.log1p(z)
    t_end = math.inf
    if z > 0:
        t_end = math.acosh(1.0 + cut / z)
    if n_min > 0:
        t_end = min(t_end, cut / n_min + _LN2)
    if not math.isfinite(t_end):
        raise DomainError("K0 diverges at z = 0")
    h = min(0.5, 1.0 / math.sqrt(z)) if z > 0 else 0.5

    def g(t):
        s = np.sinh(0.5 * t)
        base = np.exp(-2.0 * z * s * s)
        sech = 1.0 / np.cosh(t)
        return base[None, :] * sech[None, :] ** orders[:, None]

    t = np.arange(1, int(t_end / h) + 1) * h
    total = 0.5 * g(np.zeros(1))[:, 0] + g(t).sum(axis=1)
    estimate = h * total
    diff = np.full(len(orders), np.inf)
    for k in range(1, accuracy.max_subdivisions + 1):
        t = (np.arange(int(t_end / h + 0.5)) + 0.5) * h
        h *= 0.5
        total = total + g(t).sum(axis=1)
        new = h * total
        diff = np.abs(new - estimate)
        estimate = new
        if k >= 2 and np.all(diff <= np.maximum(accuracy.rel_tol * np.abs(estimate), accuracy.abs_tol)):
            return estimate
    raise ConvergenceError(
        f"Bickley quadrature at z={z}: level differences {diff} after "
        f"{accuracy.max_subdivisions} halvings",
        achieved=float(np.max(diff / np.abs(estimate))),
    )


def bickley_family(z: float, accuracy: EvalAccuracy = DEFAULT_ACCURACY, scaled: bool = False):
    """Return ``(K0(z), Ki1(z), Ki2(z))`` from one shared quadrature.

    With ``scaled=True`` each value is multiplied by ``exp(z)``, which keeps
    large arguments free of underflow.
    """
    if not z > 0:
        raise DomainError(f"z must be positive, got {z}")
    vals = _bickley_scaled(float(z), (0, 1, 2), accuracy)
    if not scaled:
        vals = vals * math.exp(-z)
    return tuple(float(v) for v in vals)


def _k0_series(z: float) -> float:
    # K0(z) = sum_k (psi(k+1) + ln 2 - ln z) (z/2)^{2k} / (k!)^2
    x = 0.25 * z * z
    log_part = _LN2 - math.log(z)
    psi = -EULER_GAMMA
    term = 1.0
    total = psi + log_part
    k = 0
    while True:
        k += 1
        term *= x / (k * k)
        psi += 1.0 / k
        contrib = term * (psi + log_part)
        total += contrib
        if abs(contrib) <= _EPS * abs(total) * 0.5:
            return total


def _k0_asymptotic(z: float, rel_tol: float) -> float:
    # sqrt(pi/2z) e^{-z} sum_k a_k z^{-k},  a_k = a_{k-1} * -(2k-1)^2 / (8k)
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        nxt = term * -((2 * k - 1) ** 2) / (8.0 * k * z)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) <= _EPS * abs(total):
            return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * total
    if abs(term) > rel_tol:
        raise ConvergenceError(f"K0 asymptotic series cannot reach {rel_tol} at z={z}", achieved=abs(term))
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * total


def bessel_k0(z: float, accuracy: EvalAccuracy = DEFAULT_ACCURACY) -> float:
    """Modified Bessel function K0 for ``z > 0``.

    ``z <= 2`` uses the psi-function power series, ``z >= 18`` the
    asymptotic expansion, and the window between them the Bickley integral
    with ``n = 0``.
    """
    z = float(z)
    if not z > 0:
        raise DomainError(f"K0 requires z > 0, got {z}")
    if z <= K0_SERIES_MAX:
        return _k0_series(z)
    if z >= K0_ASYMPTOTIC_MIN:
        return _k0_asymptotic(z, accuracy.rel_tol)
    return float(_bickley_scaled(z, (0,), accuracy)[0] * math.exp(-z))


def bickley_ki(n: int, z: float, accuracy: EvalAccuracy = DEFAULT_ACCURACY) -> float:
    """Bickley function Ki_n(z) = int_z^inf Ki_{n-1}(t) dt for n in {1, 2}."""
    if n not in (1, 2):
        raise DomainError(f"only Ki_1 and Ki_2 are supported, got n={n}")
    z = float(z)
    if not z >= 0:
        raise DomainError(f"Ki_n requires z >= 0, got {z}")
    return float(_bickley_scaled(z, (n,), accuracy)[0] * math.exp(-z))


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def digamma(x):
    """Digamma function psi(x) for real or complex ``x``.

    Real input gives a float.  Reflection covers ``Re x < 1/2`` and upward
    recurrence brings the argument into the asymptotic region.
    """
    real_input = isinstance(x, (int, float, np.integer, np.floating))
    z = complex(x)
    if _is_nonpositive_integer(z):
        raise PoleError(f"digamma has a pole at {x}")
    shift = 0j
    if z.real < 0.5:
        # psi(z) = psi(1 - z) - pi cot(pi z)
        shift = -math.pi * cmath.cos(math.pi * z) / cmath.sin(math.pi * z)
        z = 1.0 - z
    acc = 0j
    while z.real < 10.0:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0j
    power = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * power
        power *= inv2
    val = cmath.log(z) - 0.5 / z - series + acc + shift
    return val.real if real_input else val


def log_gamma_complex(z: complex) -> complex:
    """Principal branch of log Gamma(z) for ``Re z > 0``."""
    z = complex(z)
    if not z.real > 0:
        raise DomainError(f"log_gamma_complex requires Re z > 0, got {z}")
    acc = 0j
    while z.real < 10.0:
        acc += cmath.log(z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0j
    power = inv
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k * (2 * k - 1)) * power
        power *= inv2
    return (z - 0.5) * cmath.log(z) - z + _HALF_LN_2PI + series - acc


def hyp1f1(a: complex, b: complex, z: complex, accuracy: EvalAccuracy = DEFAULT_ACCURACY, max_terms: int = 10_000) -> complex:
    """Kummer's function 1F1(a; b; z) by compensated power-series summation.

    Raises ConvergenceError if the series needs more than ``max_terms`` terms
    or if cancellation between terms leaves less accuracy than requested.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if _is_nonpositive_integer(b):
        raise PoleError(f"1F1 undefined for b = {b}")
    total = 1.0 + 0j
    comp = 0j
    term = 1.0 + 0j
    biggest = 1.0
    for n in range(max_terms):
        term *= (a + n) / (b + n) * z / (n + 1)
        # Kahan summation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        mag = abs(term)
        biggest = max(biggest, mag)
        if term == 0:
            break
        ratio = abs((a + n + 1) * z / ((b + n + 1) * (n + 2)))
        if ratio < 0.5 and mag <= _EPS * abs(total):
            break
    else:
        raise ConvergenceError(
            f"1F1({a}; {b}; {z}) did not converge in {max_terms} terms (|z| too large for the series)",
            achieved=abs(term) / max(abs(total), 1e-300),
        )
    lost = 2.0 * _EPS * biggest
    if lost > accuracy.rel_tol * abs(total) + accuracy.abs_tol:
        raise ConvergenceError(
            f"1F1({a}; {b}; {z}): cancellation (largest term {biggest:.3e}, sum {abs(total):.3e}) "
            f"limits relative accuracy to {lost / max(abs(total), 1e-300):.1e}",
            achieved=lost / max(abs(total), 1e-300),
        )
    return total
