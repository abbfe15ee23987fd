from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vacpol.context import ALPHA, PhysicalContext
from vacpol.errors import DomainError
from vacpol.field_equation import (
    CubicCoefficients,
    appendix_asymptotes,
    cardano_real_root,
    cardano_verbatim,
    crossover_radius,
    dimensionless_root,
    field_coefficient_p,
    field_correction_psi,
    field_epsilon,
    nonlinear_deviation,
    perturbative_agreement,
    physical_coefficients,
    root_residual,
)
from vacpol.potentials import wichmann_kroll_raw

CTX = PhysicalContext(Q=1.0)


def test_p_value():
    assert field_coefficient_p(CTX) == pytest.approx(45 * math.pi / 2 * 137.035999**7, rel=1e-14)


@pytest.mark.parametrize("Q", [1.0, 5.0, -2.0])
def test_residual_on_log_grid(Q):
    ctx = PhysicalContext(Q=Q)
    for r in np.geomspace(1e-8, 1e6, 200):
        c = physical_coefficients(float(r), ctx)
        assert root_residual(c, cardano_real_root(c)) <= 1e-10


@settings(max_examples=60, deadline=None)
# |q| bounded away from the subnormal range, where the root itself cannot carry 1e-12 precision
@given(st.floats(1e-3, 1e3), st.floats(-1e3, 1e3).filter(lambda q: q == 0 or abs(q) > 1e-200), st.floats(1e-6, 1e6))
def test_root_property(p, q, r):
    c = CubicCoefficients(p, q, r)
    y = cardano_real_root(c)
    assert root_residual(c, y) <= 1e-12
    # sign of the field opposes the constant term
    assert y == 0 or math.copysign(1, y) == -math.copysign(1, q)


def test_mpmath_root():
    import mpmath

    c = physical_coefficients(3 * ALPHA, CTX)
    with mpmath.workdps(50):
        roots = mpmath.polyroots([1, 0, mpmath.mpf(c.p), mpmath.mpf(c.constant)], maxsteps=200, extraprec=200)
        ref = float(min(roots, key=lambda z: abs(mpmath.im(z))).real)
    assert cardano_real_root(c) == pytest.approx(ref, rel=1e-14)


def test_verbatim_cancels_at_large_r():
    c = physical_coefficients(1e3, CTX)
    stable = cardano_real_root(c)
    assert stable == pytest.approx(-CTX.Q / 1e6, rel=1e-10)
    assert root_residual(c, cardano_verbatim(c)) > 1e-6
    rc = crossover_radius(field_coefficient_p(CTX), CTX.Q * field_coefficient_p(CTX))
    mid = physical_coefficients(rc, CTX)
    assert cardano_verbatim(mid) == pytest.approx(cardano_real_root(mid), rel=1e-12)


def test_deviation_identity():
    for r in (0.3 * ALPHA, 2 * ALPHA, 50 * ALPHA):
        c = physical_coefficients(r, CTX)
        y = cardano_real_root(c)
        assert nonlinear_deviation(c) == pytest.approx(y + c.q / (c.p * c.r**2), rel=1e-6)


@pytest.mark.parametrize("x", [5.0, 20.0, 100.0])
def test_perturbative_limit(x):
    assert perturbative_agreement(x * ALPHA, CTX) < 10 * field_epsilon(CTX) / x**4 + 1e-12


def test_psi_equals_wk_raw():
    for r in np.geomspace(0.1 * ALPHA, 100.0, 30):
        assert field_correction_psi(float(r), CTX) == pytest.approx(wichmann_kroll_raw(float(r), CTX), rel=1e-12)


def test_dimensionless_form():
    eps = field_epsilon(CTX)
    for x in (0.01, 1.0, 30.0):
        Y = dimensionless_root(x, eps)
        c = physical_coefficients(x * ALPHA, CTX)
        assert Y * CTX.Q / ALPHA**2 == pytest.approx(cardano_real_root(c), rel=1e-12)
    with pytest.raises(DomainError):
        dimensionless_root(0.0, eps)


def test_asymptotes():
    p = field_coefficient_p(CTX)
    q = CTX.Q * p
    small = appendix_asymptotes("small", p, q)
    assert small.fitted_exponent == pytest.approx(-2 / 3, rel=1e-2)
    assert small.limit_value == pytest.approx(small.predicted_limit, rel=1e-2)
    large = appendix_asymptotes("large", p, q)
    assert large.limit_value == pytest.approx(-q / p, rel=1e-2)
    assert large.fitted_exponent == pytest.approx(-2.0, rel=1e-2)
    assert large.printed_large_r_slope == pytest.approx(2 * math.sqrt(p / 3))
    assert crossover_radius(p, q) == pytest.approx(math.sqrt(q) / p**0.75)
    with pytest.raises(DomainError):
        appendix_asymptotes("middle", p, q)
    with pytest.raises(DomainError):
        appendix_asymptotes("small", p, 0.0)


def test_validation():
    with pytest.raises(DomainError):
        CubicCoefficients(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        CubicCoefficients(1.0, 1.0, -1.0)
    with pytest.raises(DomainError):
        field_correction_psi(0.0, CTX)
