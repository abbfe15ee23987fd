from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from vacpol.bound_states import (
    ELECTRON_ELECTRON_CUSP,
    NumerovGrid,
    cusp_at_distance,
    cusp_operator_value,
    default_grid,
    direct_shift,
    hydrogenic_state,
    minimal_cusp_distance,
    modified_cusp,
    numerov_eigensolve,
    pair_cusp,
    perturbative_shift,
    perturbative_shift_dual,
    virial_ratio,
)
from vacpol.context import ALPHA, PhysicalContext
from vacpol.errors import ConvergenceError, DomainError

# <1s|U|1s> (Uehling only, electron in the field of Q), 30-digit mpmath double integral
FROZEN_1S = {1.0: -3.2691731313409478662e-8, 2.0: -5.1844810183244001165e-7}


@pytest.mark.parametrize("n,ell", [(1, 0), (2, 0), (2, 1), (3, 2), (4, 1)])
def test_radial_normalized(n, ell):
    s = hydrogenic_state(n, ell, 1.7)
    val, _ = integrate.quad(lambda r: s.radial(r) ** 2 * r * r, 0, np.inf, limit=200)
    assert val == pytest.approx(1.0, rel=1e-10)


def test_radial_1s_closed_form():
    s = hydrogenic_state(1, 0, 2.0)
    r = np.array([0.0, 0.3, 1.5])
    assert s.radial(r) == pytest.approx(2 * 2.0**1.5 * np.exp(-2.0 * r), rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_cusp_of_s_states(n):
    assert cusp_operator_value(hydrogenic_state(n, 0, 3.0)) == pytest.approx(-3.0, rel=1e-15)
    with pytest.raises(DomainError):
        hydrogenic_state(n + 1, 1, 1.0).cusp_ratio()


@pytest.mark.parametrize("n,ell", [(1, 0), (2, 0), (2, 1)])
@pytest.mark.parametrize("Q", [1.0, 2.0])
def test_numerov_coulomb_eigenvalues(n, ell, Q):
    sol = numerov_eigensolve(n, ell, Q)
    assert sol.energy == pytest.approx(-Q * Q / (2 * n * n), rel=1e-8)
    assert sol.nodes == n - ell - 1
    assert virial_ratio(sol, Q) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("Q", [1.0, 2.0])
def test_perturbative_shift_frozen(Q):
    ctx = PhysicalContext(Q=Q)
    est = perturbative_shift_dual(hydrogenic_state(1, 0, Q), "uehling", ctx)
    assert est.relative_difference < 1e-9
    assert est.value == pytest.approx(FROZEN_1S[Q], rel=1e-10)


def test_leading_shift_scaling():
    # small-alpha limit of <1s|U|1s> is -4 alpha^3 Q^4 / (15 pi)
    ctx = PhysicalContext(Q=1.0, alpha=ALPHA / 50)
    val = perturbative_shift(hydrogenic_state(1, 0, 1.0), "uehling", ctx)
    assert val / (-4 * ctx.alpha**3 / (15 * math.pi)) == pytest.approx(1.0, abs=5e-3)


def test_shift_signs():
    ctx = PhysicalContext(Q=1.0)
    s = hydrogenic_state(1, 0, 1.0)
    assert perturbative_shift(s, "uehling", ctx) < 0 < perturbative_shift(s, "wichmann_kroll", ctx)
    with pytest.raises(DomainError):
        perturbative_shift(s, "other", ctx)


@pytest.mark.parametrize("Q", [1.0, 2.0])
def test_direct_shift_matches_perturbative(Q):
    ctx = PhysicalContext(Q=Q)
    d = direct_shift(1, 0, Q, ctx)
    p = perturbative_shift(hydrogenic_state(1, 0, Q), "both", ctx)
    assert d == pytest.approx(p, rel=5e-2)


def test_eigensolver_errors():
    with pytest.raises(DomainError):
        numerov_eigensolve(1, 0, 1.0, grid=NumerovGrid(1e-6, 60.0, 20))
    with pytest.raises(DomainError):
        numerov_eigensolve(1, 1, 1.0)
    with pytest.raises(DomainError):
        numerov_eigensolve(1, 0, 1.0, mode="bogus")
    g = default_grid(2, 2.0)
    assert g.r_min == pytest.approx(1e-6 / 2.0) and g.r_max == pytest.approx(120.0)


def test_cusp_alpha_to_zero():
    for Q in (1.0, 3.0):
        rep = modified_cusp(Q, ctx=PhysicalContext(Q=Q, alpha=1e-300))
        assert rep.nu_modified == -Q
    nus = [modified_cusp(1.0, ctx=PhysicalContext(alpha=a)).nu_modified for a in (1e-2, 1e-4, 1e-6)]
    assert abs(nus[2] + 1) < abs(nus[1] + 1) < abs(nus[0] + 1)


def test_cusp_magnitudes():
    rep = modified_cusp(1.0)
    assert 3e-4 <= rep.uehling_rel_correction <= 3e-3
    assert rep.uehling_rel_correction == pytest.approx(ALPHA / (3 * math.pi) * (5 / 3 + 2 * 0.5772156649015329), rel=1e-14)
    for Q in (1.0, 2.0, 5.0):
        assert modified_cusp(Q).wk_abs_correction < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(0.5, 5.0))
def test_cusp_at_distance_consistent(C, Q):
    ctx = PhysicalContext(Q=Q)
    rep = modified_cusp(Q, C_param=C, ctx=ctx)
    assert cusp_at_distance(C * ctx.alpha, Q, rep.f_param, ctx) == pytest.approx(rep.nu_modified, rel=1e-13)


def test_pair_cusp():
    assert pair_cusp(1.0, 1.0, -1.0, -1.0) == ELECTRON_ELECTRON_CUSP
    assert pair_cusp(1.0, math.inf, -1.0, 2.0) == -2.0
    with pytest.raises(DomainError):
        pair_cusp(math.inf, math.inf, 1.0, 1.0)
    assert minimal_cusp_distance(2.0) == pytest.approx(ALPHA / 2)


def test_state_validation():
    with pytest.raises(DomainError):
        hydrogenic_state(0, 0, 1.0)
    with pytest.raises(DomainError):
        hydrogenic_state(2, 2, 1.0)
    with pytest.raises(DomainError):
        hydrogenic_state(1, 0, -1.0)
    with pytest.raises(DomainError):
        modified_cusp(1.0, C_param=0.0)
