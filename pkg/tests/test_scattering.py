from __future__ import annotations

import math

import pytest
from scipy.integrate import solve_ivp

from vacpol.context import ALPHA, PhysicalContext
from vacpol.coulomb_waves import CoulombParams, coulomb_fg, coulomb_phase
from vacpol.errors import DomainError, OverflowGuardError
from vacpol.scattering import (
    add_on_potential,
    born_phase,
    coulomb_amplitude,
    cot_delta_relation,
    differential_cross_section,
    integrate_phase,
    total_amplitude,
)

CTX = PhysicalContext(Q=1.0)


def _yukawa_well(r):
    return -2.0 * math.exp(-r)


def _direct_phase(potential, ell, k, charge, R=40.0):
    # independent route: integrate the radial equation and match onto F, G at R
    eta = charge / k

    def rhs(r, y):
        return (y[1], (ell * (ell + 1) / r**2 + 2 * charge / r + 2 * potential(r) - k * k) * y[0])

    r0 = 1e-6
    sol = solve_ivp(rhs, (r0, R), (r0 ** (ell + 1), (ell + 1) * r0**ell), method="DOP853", rtol=1e-12, atol=1e-300)
    u, du = sol.y[0, -1], sol.y[1, -1] / k
    v = coulomb_fg(CoulombParams(ell, eta, k * R))
    return math.atan((u * v.dF - du * v.F) / (du * v.G - u * v.dG))


@pytest.mark.parametrize("ell", [0, 1])
def test_strong_potential_against_direct_integration(ell):
    got = integrate_phase(_yukawa_well, ell, 1.0, CTX)
    assert got.converged
    assert got.delta_inf == pytest.approx(_direct_phase(_yukawa_well, ell, 1.0, CTX.charge_product), abs=1e-9)


def test_zero_potential_exact():
    t = integrate_phase(add_on_potential(CTX, "zero"), 0, 1.0, CTX)
    assert t.delta_inf == 0.0 and t.error_estimate == 0.0 and t.converged
    assert all(d == 0.0 for _, d in t.samples)


@pytest.mark.parametrize("which", ["uehling", "wichmann_kroll"])
def test_born_scaling(which):
    eps = 1e-4
    d = integrate_phase(add_on_potential(CTX, which, eps), 0, 1.0, CTX)
    b = born_phase(add_on_potential(CTX, which), 0, 1.0, CTX)
    assert d.delta_inf / eps == pytest.approx(b, rel=1e-2)


def test_born_scaling_strong_potential():
    eps = 1e-4
    d = integrate_phase(lambda r: eps * _yukawa_well(r), 0, 1.0, CTX)
    assert d.delta_inf / eps == pytest.approx(born_phase(_yukawa_well, 0, 1.0, CTX), rel=1e-3)


def test_uehling_phase_value_and_sign():
    # repulsive nuclear mode: Uehling term is attractive-sign correction of the repulsion, delta < 0
    t = integrate_phase(add_on_potential(CTX, "uehling"), 0, 1.0, CTX)
    assert t.delta_inf == pytest.approx(-1.9562018378575176e-10, rel=1e-6)
    assert t.error_estimate < 1e-6 * abs(t.delta_inf)
    rs = [r for r, _ in t.samples]
    assert rs[0] == 0.0 and rs == sorted(rs)


def test_phase_linear_in_strength():
    a = integrate_phase(add_on_potential(CTX, "uehling", 2.0), 0, 1.0, CTX).delta_inf
    b = integrate_phase(add_on_potential(CTX, "uehling"), 0, 1.0, CTX).delta_inf
    assert a == pytest.approx(2 * b, rel=1e-5)


def test_add_on_potential_kinds():
    both = add_on_potential(CTX, "both")
    u, w = add_on_potential(CTX, "uehling"), add_on_potential(CTX, "wichmann_kroll")
    for r in (0.5 * ALPHA, 3 * ALPHA):
        assert both(r) == pytest.approx(u(r) + w(r), rel=1e-15)
    with pytest.raises(DomainError):
        add_on_potential(CTX, "nope")


def test_rutherford_shape_at_zero_phase():
    for theta in (0.3, 1.0, 2.5, math.pi):
        cs = differential_cross_section(theta, 1.0, 0.0, 1.0, CTX)
        coulomb, interference, vp = cs.components
        assert interference == 0.0 and vp == 0.0
        assert cs.dsigma == coulomb
        assert coulomb * math.sin(theta / 2) ** 4 == pytest.approx(1.0 / 2.0, rel=1e-15)
        # |f_C|^2 is the Rutherford law eta^2 / (4 k^2 sin^4)
        assert cs.amplitude_squared == pytest.approx(1.0 / (4 * math.sin(theta / 2) ** 4), rel=1e-13)


def test_dual_assembly_discrepancy_is_printed_prefactor():
    # bracket agrees; prefactor Q^2/(2 v^2) vs Q^2/(4 v^4) differs by 2 v^2
    for k in (0.5, 1.0, 2.0):
        for theta in (0.5, 2.0):
            cs = differential_cross_section(theta, k, 0.01, 1.0 / CTX.charge_product, CTX)
            ratio = cs.dsigma / cs.amplitude_squared
            assert ratio == pytest.approx(2 * k * k, rel=1e-12)
            assert cs.relative_discrepancy == pytest.approx(2 * k * k - 1, rel=1e-10)


def test_amplitude_pieces():
    eta = 1.0
    f = coulomb_amplitude(1.0, 1.0, eta)
    assert abs(f) == pytest.approx(eta / (2 * math.sin(0.5) ** 2), rel=1e-15)
    assert total_amplitude(1.0, 1.0, 0.0, CTX) == pytest.approx(f)
    d = 0.1
    extra = total_amplitude(1.0, 1.0, d, CTX) - f
    assert extra == pytest.approx(math.sin(d) * complex(math.cos(d), math.sin(d)) * complex(math.cos(2 * coulomb_phase(0, eta)), math.sin(2 * coulomb_phase(0, eta))))
    with pytest.raises(DomainError):
        coulomb_amplitude(0.0, 1.0, 1.0)


def test_cot_relation():
    d = cot_delta_relation(1.0, 1.0, 0.0)
    assert 0 < d < math.pi
    with pytest.raises(OverflowGuardError):
        cot_delta_relation(1e-3, 1.0, 0.0)
    with pytest.raises(DomainError):
        cot_delta_relation(-1.0, 1.0, 0.0)


def test_bad_inputs():
    with pytest.raises(DomainError):
        integrate_phase(_yukawa_well, -1, 1.0, CTX)
    with pytest.raises(DomainError):
        integrate_phase(_yukawa_well, 0, 0.0, CTX)
