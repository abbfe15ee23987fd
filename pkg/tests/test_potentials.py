from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vacpol.context import ALPHA, PhysicalContext, UnitSystem
from vacpol.errors import ConvergenceError, DomainError
from vacpol.potentials import (
    ASYMPTOTIC_SWITCH,
    _uehling_au,
    _uehling_bracket_asymptotic,
    potential_table,
    radial_potential,
    total_potential,
    uehling_asymptote_large_r,
    uehling_asymptote_small_r,
    uehling_closed,
    uehling_integral,
    uehling_tridiagonal,
    wichmann_kroll_raw,
    wichmann_kroll_regularized,
)

CTX = PhysicalContext(Q=1.0)

# r / alpha -> U (hartree), Q = 1, from 30-digit mpmath quadrature of the defining integral
FROZEN_U = [
    (0.01, 68.288805897485818326),
    (1.0, 0.007625160673183532086),
    (10.0, 7.8376717213374290085e-13),
    (30.0, 2.3651379589644697495e-31),
]


@pytest.mark.parametrize("m,value", FROZEN_U)
def test_frozen_uehling(m, value):
    assert uehling_closed(m * ALPHA, CTX) == pytest.approx(value, rel=1e-12)
    assert uehling_integral(m * ALPHA, CTX) == pytest.approx(value, rel=1e-12)


def test_closed_matches_integral_on_grid():
    worst = 0.0
    for r in np.geomspace(1e-4, 30.0, 60) * ALPHA:
        a, b = uehling_closed(r, CTX), uehling_integral(r, CTX)
        worst = max(worst, abs(a - b) / abs(b))
    assert worst <= 1e-10


@pytest.mark.parametrize("z", np.geomspace(0.01, 80.0, 25))
def test_tridiagonal_identity(z):
    closed = uehling_closed(0.5 * z * ALPHA, CTX)
    assert uehling_tridiagonal(z, CTX) == pytest.approx(closed, rel=1e-13)


def test_tridiagonal_printed_variant_differs():
    z = 2.0
    printed = uehling_tridiagonal(z, CTX, verbatim=True)
    assert abs(printed / uehling_tridiagonal(z, CTX) - 1) > 0.5


@pytest.mark.parametrize("z", [ASYMPTOTIC_SWITCH, 45.0, 50.0, 60.0])
def test_asymptotic_branch_overlap(z):
    # evaluate the cancelling combination directly above the switch
    from fractions import Fraction

    from vacpol.special_functions import bickley_family

    k0, ki1, ki2 = (Fraction(v) for v in bickley_family(z, scaled=True))
    x = Fraction(z) / 2
    direct = float((1 + x * x / 3) * k0 - (x / 6) * ki1 - (Fraction(5, 6) + x * x / 3) * ki2)
    series = _uehling_bracket_asymptotic(z) * z**-1.5
    assert series == pytest.approx(direct, rel=5e-11)


def test_asymptotic_series_refuses_small_z():
    with pytest.raises(ConvergenceError):
        _uehling_bracket_asymptotic(10.0)


def test_small_r_asymptote():
    for m, tol in ((1e-6, 1e-3), (1e-4, 1e-3)):
        r = m * ALPHA
        assert uehling_closed(r, CTX) / uehling_asymptote_small_r(r, CTX) == pytest.approx(1.0, abs=tol)


def test_large_r_asymptote_converges_like_one_over_z():
    # the leading Watson term leaves a relative correction of about -(29/8)/z
    for m in (15.0, 30.0, 60.0, 120.0):
        r = m * ALPHA
        z = 2 * m
        ratio = uehling_closed(r, CTX) / uehling_asymptote_large_r(r, CTX)
        assert (ratio - 1) * z == pytest.approx(-29.0 / 8.0, rel=0.25)


@settings(max_examples=80, deadline=None)
@given(st.floats(1e-5, 200.0))
def test_signs(m):
    r = m * ALPHA
    u = uehling_closed(r, CTX)
    assert u > 0 or (u == 0 and m > 150)
    assert wichmann_kroll_regularized(r, CTX) < 0


@pytest.mark.parametrize("Q", [1.0, 2.0, 5.0, 10.0])
def test_uehling_dominates_below_alpha(Q):
    c = PhysicalContext(Q=Q)
    for r in np.geomspace(1e-6, 1.0, 40) * ALPHA:
        assert abs(uehling_closed(r, c)) > abs(wichmann_kroll_regularized(r, c))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 20.0), st.floats(0.01, 50.0))
def test_charge_scaling(Q, m):
    r = m * ALPHA
    c1, cq = PhysicalContext(Q=1.0), PhysicalContext(Q=Q)
    assert uehling_closed(r, cq) == pytest.approx(Q * uehling_closed(r, c1), rel=1e-14)
    assert wichmann_kroll_regularized(r, cq) == pytest.approx(Q**3 * wichmann_kroll_regularized(r, c1), rel=1e-14)


def test_wichmann_kroll_forms():
    r = 3 * ALPHA
    raw = wichmann_kroll_raw(r, CTX)
    assert raw == pytest.approx(-2 * ALPHA**7 / (225 * math.pi * r**5), rel=1e-15)
    # regularization matters only at r ~ alpha
    big = 1000 * ALPHA
    assert wichmann_kroll_regularized(big, CTX) == pytest.approx(wichmann_kroll_raw(big, CTX), rel=1e-5)


def test_pair_mode_uses_charge_product():
    pair = PhysicalContext(q1=-1.0, q2=3.0)
    r = ALPHA
    assert uehling_closed(r, pair) == pytest.approx(-3 * uehling_closed(r, CTX), rel=1e-14)


def test_relativistic_units():
    rel = PhysicalContext(unit_system=UnitSystem.RELATIVISTIC)
    # r = 1 Compton wavelength = alpha bohr; energy returned in m c^2
    assert uehling_closed(1.0, rel) == pytest.approx(uehling_closed(ALPHA, CTX) * ALPHA**2, rel=1e-14)


def test_total_potential_and_table():
    s = total_potential(ALPHA, CTX)
    assert s.total == s.coulomb + s.uehling + s.wichmann_kroll
    assert s.coulomb == pytest.approx(1 / ALPHA)
    grid = list(np.geomspace(1e-3, 1.0, 17))
    assert potential_table(grid, CTX, workers=4) == potential_table(grid, CTX)


def test_radial_potential_vectorized():
    f = radial_potential("both", CTX)
    r = np.array([0.5 * ALPHA, ALPHA, 3 * ALPHA])
    want = [_uehling_au(x, 1.0, ALPHA) + wichmann_kroll_regularized(x, CTX) for x in r]
    assert np.allclose(f(r), want, rtol=1e-15, atol=0)
    with pytest.raises(DomainError):
        radial_potential("yukawa", CTX)


def test_domain_errors():
    for bad in (0.0, -1.0):
        with pytest.raises(DomainError):
            uehling_closed(bad, CTX)
        with pytest.raises(DomainError):
            wichmann_kroll_raw(bad, CTX)
    with pytest.raises(DomainError):
        uehling_tridiagonal(0.0, CTX)
