"""Fourier spatial resolution of the Uehling and Wichmann-Kroll potentials.

For a central potential ``V(r)`` the spectral function is

    v(k) = 4 pi int_0^inf j0(k r) V(r) r^2 dr ,

and the dimensionless field factor entering ``E_k = -i (4 pi / k^2)(1 + ...) k``
is ``k^2 v(k) / (4 pi)``.

Three Uehling artifacts are kept apart:

* ``uehling_spectral_closed`` evaluates the k-form printed in the source
  derivation exactly as written (tag ``closed_form``);
* ``uehling_spectral_oracle`` transforms the closed-form potential
  numerically (tag ``quadrature_oracle``);
* ``uehling_spectral_corrected`` is the re-derived elementary integral
  (tag ``corrected_closed_form``), validated against the oracle.

Wave numbers are in the context's units; spectral values are energy times
volume and field factors are dimensionless.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import beta, exp1, expi

from .context import PhysicalContext, screening_factor
from .errors import ConvergenceError, DomainError
from .potentials import _uehling_au

# below this a = k alpha / 2 the corrected form switches to its power series
SERIES_MAX_A = 0.3

MAX_PANELS = 100_000


class SpectralSource(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE_ORACLE = "quadrature_oracle"
    CORRECTED_CLOSED_FORM = "corrected_closed_form"


@dataclass(frozen=True)
class SpectralSample:
    k: float
    u_k: float
    u_tilde_k: float
    w_k: float
    W_k_field: float
    source: SpectralSource

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError(f"k must be positive, got {self.k}")


@dataclass(frozen=True)
class OracleResult:
    value: float
    panels: int
    partial_sum: float
    last_change: float


def _check_k(k):
    if not k > 0:
        raise DomainError(f"wave number must be positive, got {k}")


def _euler_average(sums: Sequence[float]) -> float:
    # repeated averaging of consecutive partial sums (Euler transform)
    s = np.asarray(sums, dtype=float)
    while s.size > 1:
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[0])


def spectral_transform(
    potential: Callable[[float], float],
    k: float,
    rel_tol: float = 1e-12,
    breakpoints: Sequence[float] = (),
    max_panels: int = MAX_PANELS,
    depth: int = 10,
) -> OracleResult:
    """``4 pi int_0^inf j0(kr) V(r) r^2 dr`` with diagnostics.

    The half-line is cut at the zeros ``j pi / k`` of ``sin(kr)``; each panel
    is integrated adaptively (``breakpoints`` inside a panel are passed on as
    extra subdivision points, e.g. where ``V`` changes scale) and the partial
    sums are accelerated by repeated averaging over the last ``depth`` panels.
    ``potential`` takes and returns atomic-unit floats.
    """
    _check_k(k)
    step = math.pi / k
    bps = sorted(b for b in breakpoints if b > 0)

    def integrand(r):
        return math.sin(k * r) * potential(r) * r

    partial = []
    total_terms = []
    estimates = []
    running = 0.0
    for j in range(max_panels):
        lo, hi = j * step, (j + 1) * step
        pts = [b for b in bps if lo < b < hi]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(integrand, lo, hi, points=pts or None, epsabs=0.0, epsrel=1.2e-14, limit=200)
        total_terms.append(val)
        running = math.fsum(total_terms)
        partial.append(running)
        if len(partial) < 3:
            continue
        est = _euler_average(partial[-(depth + 1):])
        estimates.append(est)
        if len(estimates) >= 3:
            scale = abs(est)
            d1 = abs(estimates[-1] - estimates[-2])
            d2 = abs(estimates[-2] - estimates[-3])
            beyond = any(b > hi for b in bps)
            if not beyond and max(d1, d2) <= rel_tol * scale:
                return OracleResult(4.0 * math.pi / k * est, j + 1, 4.0 * math.pi / k * running, 4.0 * math.pi / k * d1)
    change = abs(estimates[-1] - estimates[-2]) if len(estimates) > 1 else math.inf
    raise ConvergenceError(
        f"spectral transform at k={k}: no convergence after {max_panels} panels "
        f"(partial sum {4 * math.pi / k * running:.6e}, last change {4 * math.pi / k * change:.2e})",
        achieved=change / max(abs(running), 1e-300),
    )


def spectral_oracle(potential: Callable[[float], float], k: float, rel_tol: float = 1e-12, breakpoints: Sequence[float] = ()) -> float:
    """Radial Fourier transform ``4 pi int j0(kr) V(r) r^2 dr`` by panel quadrature."""
    return spectral_transform(potential, k, rel_tol, breakpoints).value


def _a_of(k: float, ctx: PhysicalContext) -> tuple[float, float]:
    _check_k(k)
    k_au = ctx.to_atomic(k, "wavenumber")
    return k_au, 0.5 * k_au * ctx.alpha


def _log_ratio(a: float) -> float:
    # ln((sqrt(1+a^2) + a) / (sqrt(1+a^2) - a)) = 2 asinh(a)
    return 2.0 * math.asinh(a)


def uehling_spectral_closed(k: float, ctx: PhysicalContext) -> float:
    """Uehling spectral function from the printed k-form, exactly as written.

    Known to be wrong (negative and growing at large ``k``); kept for the
    discrepancy report.
    """
    k_au, _ = _a_of(k, ctx)
    a = ctx.alpha
    ak = a * k_au
    root = math.sqrt(ak * ak + 4.0)
    log = math.log((root + ak) / (root - ak))
    val = (8.0 * a * ctx.charge_product / (3.0 * k_au**2)) * (
        -5.0 / 6.0 + 2.0 / ak**2 - (root / ak) * (1.0 - 2.0 / ak**2) * log
    )
    return ctx.from_atomic(val, "spectral")


def uehling_spectral_closed_a_form(k: float, ctx: PhysicalContext) -> float:
    """The printed a-form (with the factor 1/2 on the logarithm), as written."""
    _, a = _a_of(k, ctx)
    al = ctx.alpha
    val = (al**3 * ctx.charge_product / (3.0 * a * a)) * (
        -5.0 / 3.0 + 1.0 / a**2 - 0.5 * (math.sqrt(a * a + 1.0) / a) * (2.0 - 1.0 / a**2) * _log_ratio(a)
    )
    return ctx.from_atomic(val, "spectral")


def _reduced_integral_closed(a: float) -> float:
    # I(a) = (1 / 2a^2) [ -5/3 + 1/a^2 + (1/2)(sqrt(1+a^2)/a)(2 - 1/a^2) L ]
    return (0.5 / (a * a)) * (
        -5.0 / 3.0 + 1.0 / (a * a) + 0.5 * (math.sqrt(1.0 + a * a) / a) * (2.0 - 1.0 / (a * a)) * _log_ratio(a)
    )


def _reduced_integral_series(a: float) -> float:
    # I(a) = (1/2) sum_n (-a^2)^n B(n+1, 3/2) [1 + (n+1)/(2n+5)],  |a| < 1
    x = -a * a
    total = 0.0
    power = 1.0
    for n in range(200):
        term = power * beta(n + 1, 1.5) * (1.0 + (n + 1.0) / (2.0 * n + 5.0))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return 0.5 * total
        power *= x
    raise ConvergenceError(f"spectral series did not converge at a={a}")


def reduced_integral(a: float, method: str = "auto") -> float:
    """``I(a) = int_1^inf (1 + 1/2t^2) sqrt(t^2-1) / (t^2 (t^2 + a^2)) dt``.

    ``method`` is ``closed``, ``series`` or ``auto`` (series below
    ``SERIES_MAX_A``, where the closed form cancels).  ``I(0) = 2/5``.
    """
    if a < 0:
        raise DomainError(f"a must be nonnegative, got {a}")
    if a == 0:
        return 0.4
    if method == "closed":
        return _reduced_integral_closed(a)
    if method == "series":
        return _reduced_integral_series(a)
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")
    return _reduced_integral_series(a) if a < SERIES_MAX_A else _reduced_integral_closed(a)


def reduced_integral_quadrature(a: float) -> float:
    """The same integral by adaptive quadrature (substitution ``t = 1 / sqrt(1 - v)``)."""

    def f(v):
        return 0.5 * (1.0 + 0.5 * v) * math.sqrt(1.0 - v) / (1.0 + a * a * v)

    return integrate.quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)[0]


def uehling_spectral_corrected(k: float, ctx: PhysicalContext, method: str = "auto") -> float:
    """Uehling spectral function ``u(k) = (2 alpha^3 Q / 3) I(k alpha / 2)``."""
    _, a = _a_of(k, ctx)
    val = (2.0 * ctx.alpha**3 * ctx.charge_product / 3.0) * reduced_integral(a, method)
    return ctx.from_atomic(val, "spectral")


def uehling_spectral_oracle(k: float, ctx: PhysicalContext, rel_tol: float = 1e-12) -> float:
    """Uehling spectral function by numerical radial transform of the potential."""
    k_au, _ = _a_of(k, ctx)
    charge, al = ctx.charge_product, ctx.alpha
    if charge == 0:
        return 0.0
    val = spectral_oracle(
        lambda r: _uehling_au(r, charge, al), k_au, rel_tol, breakpoints=(0.01 * al, 0.1 * al, al, 5 * al, 20 * al, 60 * al)
    )
    return ctx.from_atomic(val, "spectral")


def uehling_field_factor(k: float, ctx: PhysicalContext) -> float:
    """``U~(k) = k^2 u(k) / (4 pi)`` from the corrected spectral function."""
    k_au, _ = _a_of(k, ctx)
    u = ctx.to_atomic(uehling_spectral_corrected(k, ctx), "spectral")
    return k_au * k_au * u / (4.0 * math.pi)


def uehling_field_factor_closed(k: float, ctx: PhysicalContext) -> float:
    """Printed field factor ``(2 alpha Q / 3 pi)[...]``, as written."""
    k_au, _ = _a_of(k, ctx)
    u = ctx.to_atomic(uehling_spectral_closed(k, ctx), "spectral")
    return k_au * k_au * u / (4.0 * math.pi)


def charge_screening_shift(ctx: PhysicalContext) -> float:
    """Constant part ``-5 alpha Q / (9 pi)`` of the Uehling field factor."""
    return -(1.0 - screening_factor(ctx.alpha)) * ctx.charge_product


def uehling_field_factor_large_k(k: float, ctx: PhysicalContext) -> float:
    """Leading large-k behaviour ``(2 alpha Q / 3 pi)(ln(k alpha) - 5/6)``."""
    k_au, _ = _a_of(k, ctx)
    return 2.0 * ctx.alpha * ctx.charge_product / (3.0 * math.pi) * math.log(k_au * ctx.alpha) + charge_screening_shift(ctx)


def wk_spectral_closed(k: float, ctx: PhysicalContext) -> float:
    """``w_K(k) = -(2 pi Q^3 alpha^6 / 225) exp(-k alpha)`` for the regularized potential."""
    k_au, _ = _a_of(k, ctx)
    val = -(2.0 * math.pi * ctx.charge_product**3 * ctx.alpha**6 / 225.0) * math.exp(-k_au * ctx.alpha)
    return ctx.from_atomic(val, "spectral")


def wk_field_factor(k: float, ctx: PhysicalContext) -> float:
    """``W_K(k) = -(Q^3 alpha^6 / 450) k^2 exp(-k alpha)``."""
    k_au, _ = _a_of(k, ctx)
    return -(ctx.charge_product**3 * ctx.alpha**6 / 450.0) * k_au * k_au * math.exp(-k_au * ctx.alpha)


def _exp_integral_pair(s: float) -> tuple[float, float]:
    """``(exp(-s) Ei(s), exp(s) E1(s))`` without overflow."""
    if s < 50.0:
        return math.exp(-s) * float(expi(s)), math.exp(s) * float(exp1(s))
    # asymptotic series sum n! (+-1/s)^{n+1}, truncated well before its smallest term
    plus = minus = 0.0
    term = 1.0 / s
    for n in range(1, 40):
        plus += term
        minus += term if n % 2 else -term
        term *= n / s
    return plus, minus


def wk_spectral_corrected(k: float, ctx: PhysicalContext) -> float:
    """Exact transform of the regularized Wichmann-Kroll potential.

    With ``s = k alpha``,
    ``w(k) = -(2 Q^3 alpha^5 / 225 s) [(1 + s) e^{-s} Ei(s) + (1 - s) e^{s} E1(s)]``.
    It behaves as ``-4 Q^3 alpha^5 / 225`` for ``k -> 0`` and as
    ``-8 Q^3 alpha^3 / (225 k^2)`` for large ``k``.  The printed
    ``exp(-k alpha)`` form is instead the transform of
    ``-2 Q^3 alpha^7 / (225 pi (r^2 + alpha^2)^2)``.
    """
    k_au, _ = _a_of(k, ctx)
    s = k_au * ctx.alpha
    ei_part, e1_part = _exp_integral_pair(s)
    val = -(2.0 * ctx.charge_product**3 * ctx.alpha**5 / 225.0) * ((1.0 + s) * ei_part + (1.0 - s) * e1_part) / s
    return ctx.from_atomic(val, "spectral")


def wk_field_factor_corrected(k: float, ctx: PhysicalContext) -> float:
    """``k^2 w(k) / (4 pi)`` from :func:`wk_spectral_corrected`."""
    k_au, _ = _a_of(k, ctx)
    return k_au * k_au * ctx.to_atomic(wk_spectral_corrected(k, ctx), "spectral") / (4.0 * math.pi)


def wk_closed_form_parent(r: float, ctx: PhysicalContext) -> float:
    """Potential whose transform is the printed ``exp(-k alpha)`` spectrum (atomic units)."""
    al = ctx.alpha
    return -2.0 * ctx.charge_product**3 * al**7 / (225.0 * math.pi * (r * r + al * al) ** 2)


def wk_spectral_oracle(k: float, ctx: PhysicalContext, rel_tol: float = 1e-12) -> float:
    """Radial transform of the regularized Wichmann-Kroll potential."""
    k_au, _ = _a_of(k, ctx)
    al = ctx.alpha
    pref = -2.0 * ctx.charge_product**3 * al**7 / (225.0 * math.pi)
    if pref == 0:
        return 0.0
    val = spectral_oracle(lambda r: pref / (r * (r * r + al * al) ** 2), k_au, rel_tol, breakpoints=(al, 10 * al, 100 * al))
    return ctx.from_atomic(val, "spectral")


def spectral_sample(k: float, ctx: PhysicalContext, source: SpectralSource | str = SpectralSource.CORRECTED_CLOSED_FORM) -> SpectralSample:
    """Collect u, U~, w_K and W_K at one wave number from the chosen source."""
    source = SpectralSource(source)
    k_au, _ = _a_of(k, ctx)
    if source is SpectralSource.CLOSED_FORM:
        u = uehling_spectral_closed(k, ctx)
        w = wk_spectral_closed(k, ctx)
    elif source is SpectralSource.QUADRATURE_ORACLE:
        u = uehling_spectral_oracle(k, ctx)
        w = wk_spectral_oracle(k, ctx)
    else:
        u = uehling_spectral_corrected(k, ctx)
        w = wk_spectral_corrected(k, ctx)
    factor = k_au * k_au / (4.0 * math.pi)
    return SpectralSample(
        k=k,
        u_k=u,
        u_tilde_k=factor * ctx.to_atomic(u, "spectral"),
        w_k=w,
        W_k_field=factor * ctx.to_atomic(w, "spectral"),
        source=source,
    )
