"""Truncated matrix representation of the O(2,1) radial algebra of the Coulomb problem.

Basis ``|n>``, ``n = l+1, ..., l+N``, with ``S`` diagonal.  The ladder
operator ``A+ = U + iT`` has ``<n+1|A+|n> = sqrt((n - l)(n + l + 1))``,
which fixes ``[S, T] = -iU``, ``[T, U] = iS``, ``[U, S] = -iT`` and the
Casimir ``S^2 - U^2 - T^2 = l(l+1)``.  Truncation spoils only the last row
and column of products, so every check is made on the leading
``(N-1) x (N-1)`` block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .context import EULER_GAMMA, PhysicalContext, screening_factor
from .errors import DomainError

MAX_EXPANSION_ORDER = 4
# extra basis states used when a matrix exponential must be exact on a block
HAUSDORFF_PADDING = 60

# effective-charge factor Q -> Q (1 - 5 alpha / 9 pi) at leading order
LEADING_SCREENING = screening_factor()


@dataclass(frozen=True)
class AlgebraRep:
    ell: int
    N: int
    S: np.ndarray
    T: np.ndarray
    U: np.ndarray

    @property
    def interior(self) -> slice:
        return slice(0, self.N - 1)


@dataclass(frozen=True)
class CommutatorReport:
    st: float
    tu: float
    us: float
    casimir: float

    @property
    def worst(self) -> float:
        return max(self.st, self.tu, self.us, self.casimir)


def build_generators(ell: int, N: int) -> AlgebraRep:
    if int(N) != N or N < 3:
        raise DomainError(f"N must be an integer >= 3, got {N}")
    if int(ell) != ell or ell < 0:
        raise DomainError(f"ell must be a nonnegative integer, got {ell}")
    n = np.arange(ell + 1, ell + N + 1, dtype=float)
    raise_el = np.sqrt((n[:-1] - ell) * (n[:-1] + ell + 1))
    a_plus = np.diag(raise_el, -1).astype(complex)
    a_minus = a_plus.conj().T
    S = np.diag(n).astype(complex)
    U = 0.5 * (a_plus + a_minus)
    T = (a_plus - a_minus) / 2j
    return AlgebraRep(int(ell), int(N), S, T, U)


def _block_max(m: np.ndarray, block: slice) -> float:
    return float(np.max(np.abs(m[block, block])))


def verify_commutators(rep: AlgebraRep) -> CommutatorReport:
    """Maximum residuals of the three commutators and the Casimir on the interior block."""
    S, T, U = rep.S, rep.T, rep.U
    b = rep.interior
    ident = np.eye(rep.N)
    return CommutatorReport(
        st=_block_max(S @ T - T @ S + 1j * U, b),
        tu=_block_max(T @ U - U @ T - 1j * S, b),
        us=_block_max(U @ S - S @ U + 1j * T, b),
        casimir=_block_max(S @ S - U @ U - T @ T - rep.ell * (rep.ell + 1) * ident, b),
    )


def hausdorff_residual(ell: int, N: int, beta: float, sign: int = 1, verbatim: bool = False) -> float:
    """Residual of ``e^{-i beta T} (S + sign U) e^{i beta T} = e^{sign beta} (S + sign U)``.

    The exponentials are formed in a representation padded by
    ``HAUSDORFF_PADDING`` states and compared on the leading ``N - 1`` block.
    ``verbatim=True`` uses the matrix ``exp(sign beta T)`` on the right-hand
    side in place of the scalar ``e^{sign beta}``.
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    big = build_generators(ell, N + HAUSDORFF_PADDING)
    X = big.S + sign * big.U
    left = expm(-1j * beta * big.T) @ X @ expm(1j * beta * big.T)
    right = (expm(sign * beta * big.T) @ X) if verbatim else math.exp(sign * beta) * X
    b = slice(0, N - 1)
    scale = np.max(np.abs(X[b, b]))
    return float(np.max(np.abs(left[b, b] - right[b, b])) / scale)


def hydrogen_spectrum_from_algebra(Q: float, n: int) -> float:
    """``E_n`` from the S eigenvalue ``n`` and the scaling relation ``sqrt(-2E) n = Q``."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not Q > 0:
        raise DomainError(f"Q must be positive, got {Q}")
    rep = build_generators(0, max(int(n), 3))
    s_n = float(rep.S[n - 1, n - 1].real)
    # e^beta = sqrt(-2E) = Q / s_n; s_n is an exact integer so E is exact
    return -Q * Q / (2.0 * s_n * s_n)


def power_expectation(n: int, ell: int, m: int) -> float:
    """``<n|(S + U)^m|n>`` in a representation large enough to be exact."""
    if not 0 <= ell < n:
        raise DomainError("need 0 <= ell < n")
    N = (n - ell) + m + 2
    rep = build_generators(ell, N)
    X = rep.S + rep.U
    v = np.zeros(N, dtype=complex)
    v[n - ell - 1] = 1.0
    w = v.copy()
    for _ in range(m):
        w = X @ w
    return float(np.real(v.conj() @ w))


# ---- small-z expansion of r U(r) ---------------------------------------------
# series are dicts p -> (a, b) meaning sum_p w^p (a + b ln w), w = z/2


def _k0_series(order: int) -> dict[int, tuple[float, float]]:
    out = {}
    for k in range(order // 2 + 1):
        c = 1.0 / math.factorial(k) ** 2
        harmonic = sum(1.0 / j for j in range(1, k + 1))
        out[2 * k] = (c * (harmonic - EULER_GAMMA), -c)
    return out


def _minus_integral(series: dict[int, tuple[float, float]], const: float, order: int) -> dict[int, tuple[float, float]]:
    # const - int_0^z f(t) dt with t = 2s
    out = {0: (const, 0.0)}
    for p, (a, b) in series.items():
        q = p + 1
        if q > order:
            continue
        prev = out.get(q, (0.0, 0.0))
        out[q] = (prev[0] - 2.0 * (a / q - b / q**2), prev[1] - 2.0 * b / q)
    return out


def _scale_add(acc, series, coeff, shift, order):
    for p, (a, b) in series.items():
        q = p + shift
        if q > order:
            continue
        prev = acc.get(q, (0.0, 0.0))
        acc[q] = (prev[0] + coeff * a, prev[1] + coeff * b)


@dataclass(frozen=True)
class ExpansionTerm:
    power: int
    coefficient: float
    log_coefficient: float
    operator: str


def uehling_operator_expansion(order: int, ctx: PhysicalContext | None = None) -> list[ExpansionTerm]:
    """Small-distance expansion ``r U(r) = sum_p z^p (c_p + d_p ln z)``, ``z = 2r/alpha``.

    Obtained from the K0 series, ``Ki1 = pi/2 - int K0`` and
    ``Ki2 = 1 - int Ki1``.  Each power is paired with the operator
    ``[(2/alpha)(S + U)]^p`` through the identification ``r = S + U``.
    Coefficients are in hartree * bohr and vanish with alpha.
    """
    if int(order) != order or not 0 <= order <= MAX_EXPANSION_ORDER:
        raise DomainError(f"order must be an integer in [0, {MAX_EXPANSION_ORDER}]")
    ctx = ctx or PhysicalContext()
    work = order + 2
    k0 = _k0_series(work)
    ki1 = _minus_integral(k0, math.pi / 2, work)
    ki2 = _minus_integral(ki1, 1.0, work)
    # bracket (1 + w^2/3) K0 - (w/6) Ki1 - (5/6 + w^2/3) Ki2
    f: dict[int, tuple[float, float]] = {}
    _scale_add(f, k0, 1.0, 0, order)
    _scale_add(f, k0, 1.0 / 3.0, 2, order)
    _scale_add(f, ki1, -1.0 / 6.0, 1, order)
    _scale_add(f, ki2, -5.0 / 6.0, 0, order)
    _scale_add(f, ki2, -1.0 / 3.0, 2, order)
    pref = 2.0 * ctx.alpha * ctx.charge_product / (3.0 * math.pi)
    terms = []
    for p in range(order + 1):
        a, b = f.get(p, (0.0, 0.0))
        # w^p (a + b ln w) = z^p 2^-p (a - b ln 2 + b ln z)
        s = 2.0**-p
        terms.append(ExpansionTerm(p, pref * s * (a - b * math.log(2.0)), pref * s * b, f"[(2/alpha)(S+U)]^{p}"))
    return terms


def evaluate_expansion(terms: list[ExpansionTerm], r: float, ctx: PhysicalContext | None = None) -> float:
    """Sum the truncated expansion of ``r U(r)`` at ``r`` (bohr)."""
    ctx = ctx or PhysicalContext()
    z = 2.0 * r / ctx.alpha
    lz = math.log(z)
    return math.fsum(t.coefficient * z**t.power + t.log_coefficient * z**t.power * lz for t in terms)
