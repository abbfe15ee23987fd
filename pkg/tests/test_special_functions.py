from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from vacpol.context import EvalAccuracy
from vacpol.errors import ConvergenceError, DomainError, PoleError
from vacpol.special_functions import (
    K0_ASYMPTOTIC_MIN,
    K0_SERIES_MAX,
    _k0_asymptotic,
    _k0_series,
    bessel_k0,
    bickley_family,
    bickley_ki,
    digamma,
    hyp1f1,
    log_gamma_complex,
)

# (z, K0, Ki1, Ki2) from 30-digit mpmath quadrature of the Bickley integral
FROZEN = [
    (0.1, 2.4270690247020166125, 1.2286318830369222322, 0.86252128978336839027),
    (1.0, 0.42102443824070833334, 0.32828647817111835301, 0.27362075202611622173),
    (2.0, 0.11389387274953343565, 0.097120592478067936717, 0.085490578676908981135),
    (5.0, 0.0036910983340425942747, 0.0034089360665305699256, 0.0031783868946079714137),
    (18.0, 4.4687533373093829197e-9, 4.3551664868848098342e-9, 4.2494965353977594154e-9),
    (30.0, 2.1324774964630563712e-14, 2.0988417482836910507e-14, 2.0667076082357512262e-14),
]


@pytest.mark.parametrize("z,k0,ki1,ki2", FROZEN)
def test_frozen_values(z, k0, ki1, ki2):
    got = bickley_family(z)
    assert got[0] == pytest.approx(k0, rel=1e-12)
    assert got[1] == pytest.approx(ki1, rel=1e-12)
    assert got[2] == pytest.approx(ki2, rel=1e-12)


@pytest.mark.parametrize("z", [1e-4, 0.01, 0.5, 1.9, 2.1, 7.0, 17.9, 18.1, 45.0, 300.0])
def test_k0_against_mpmath(z):
    assert bessel_k0(z) == pytest.approx(float(mp.besselk(0, z)), rel=1e-13)


@pytest.mark.parametrize("z", [K0_SERIES_MAX, K0_ASYMPTOTIC_MIN])
def test_k0_branch_overlap(z):
    trap = bickley_family(z)[0]
    if z == K0_SERIES_MAX:
        assert _k0_series(z) == pytest.approx(trap, rel=1e-13)
    else:
        assert _k0_asymptotic(z, 1e-14) == pytest.approx(trap, rel=1e-13)


@pytest.mark.parametrize("z", np.geomspace(0.1, 30, 9))
def test_recursion_closure(z):
    # Ki1(z) = int_z^inf K0, Ki2(z) = int_z^inf Ki1, by an independent quadrature
    k0 = lambda t: float(mp.besselk(0, t))  # noqa: E731
    ki1 = integrate.quad(k0, z, np.inf, epsrel=1e-13, epsabs=0, limit=200)[0]
    assert bickley_ki(1, z) == pytest.approx(ki1, rel=1e-10)
    ki2 = integrate.quad(lambda t: bickley_ki(1, t), z, np.inf, epsrel=1e-12, epsabs=0, limit=200)[0]
    assert bickley_ki(2, z) == pytest.approx(ki2, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 60.0), st.floats(1.001, 1.5))
def test_positive_decreasing_and_ordered(z, factor):
    a = bickley_family(z)
    b = bickley_family(z * factor)
    assert a[0] > a[1] > a[2] > 0
    assert all(x > y for x, y in zip(a, b))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_large_z_asymptote(n):
    vals = [math.sqrt(z) * bickley_family(z, scaled=True)[n] for z in (100.0, 1000.0, 10000.0)]
    target = math.sqrt(math.pi / 2)
    errs = [abs(v / target - 1) for v in vals]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 3e-4


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_k0(0.0)
    with pytest.raises(DomainError):
        bickley_ki(3, 1.0)
    with pytest.raises(DomainError):
        bickley_ki(1, -1.0)
    assert bickley_ki(1, 0.0) == pytest.approx(math.pi / 2, rel=1e-13)
    assert bickley_ki(2, 0.0) == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("x", [0.3, 1.0, 2.5, 17.0, -0.5, -3.7])
def test_digamma_real(x):
    assert digamma(x) == pytest.approx(float(mp.digamma(x)), rel=1e-13, abs=1e-14)


@pytest.mark.parametrize("z", [complex(0, -1), complex(0, -0.01), complex(0.5, 20), complex(-2.5, 3)])
def test_digamma_complex(z):
    want = complex(mp.digamma(z))
    assert abs(digamma(z) - want) <= 1e-13 * abs(want)


def test_digamma_poles():
    for x in (0, -1, -7):
        with pytest.raises(PoleError):
            digamma(x)


@pytest.mark.parametrize("z", [complex(1, 0), complex(1, 5), complex(11, -20), complex(0.1, 0.3)])
def test_log_gamma(z):
    want = complex(mp.loggamma(z))
    assert abs(log_gamma_complex(z) - want) <= 1e-13 * max(1.0, abs(want))


@pytest.mark.parametrize("a,b,z", [(1 - 2j, 2, 0.4j), (3 - 1j, 8, 4j), (0.5, 1.5, -2.0), (2, 3, 10.0)])
def test_hyp1f1(a, b, z):
    want = complex(mp.hyp1f1(a, b, z))
    assert abs(hyp1f1(a, b, z) - want) <= 1e-12 * abs(want)


def test_hyp1f1_cancellation_detected():
    with pytest.raises(ConvergenceError):
        hyp1f1(1.0, 1.0, -60.0, EvalAccuracy(rel_tol=1e-12))
    with pytest.raises(PoleError):
        hyp1f1(1.0, -2.0, 1.0)
