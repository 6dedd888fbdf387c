"""Special-function kernel against independent oracles (mpmath, scipy.quad)."""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from gkstates import (
    ConvergenceError,
    DomainError,
    SeriesControl,
    bessel_k,
    hyp0f1,
    log_gamma,
    log_hyp0f1,
    log_pochhammer,
)


def test_log_gamma_known_values():
    assert log_gamma(1.0) == 0.0
    assert math.isclose(log_gamma(5.0), math.log(24.0), rel_tol=1e-15)
    assert math.isclose(log_gamma(0.5), 0.5 * math.log(math.pi), rel_tol=1e-15)


def test_log_gamma_against_mpmath():
    mp.mp.dps = 30
    for x in np.geomspace(0.5, 1e6, 40):
        ref = float(mp.loggamma(mp.mpf(x)))
        got = log_gamma(float(x))
        assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref))


def test_log_gamma_recurrence():
    # |lg(x+1) - lg(x) - ln x| small on a log grid; for large x the result
    # quantisation (ulp of ~8e4) is the attainable floor
    for x in np.geomspace(1.0, 1e4, 60):
        defect = log_gamma(x + 1.0) - log_gamma(x) - math.log(x)
        assert abs(defect) <= max(1e-12, 4.0 * np.spacing(log_gamma(x + 1.0)))


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5])
def test_log_gamma_domain(bad):
    with pytest.raises(DomainError):
        log_gamma(bad)


def test_log_pochhammer():
    # (3)_4 = 3*4*5*6 = 360
    assert math.isclose(log_pochhammer(3.0, 4), math.log(360.0), rel_tol=1e-14)
    assert log_pochhammer(7.0, 0) == 0.0
    with pytest.raises(DomainError):
        log_pochhammer(-1.0, 2)


def brute_force_0f1(b, z, terms=200):
    """Independent oracle: plain partial sums at 50-digit precision."""
    mp.mp.dps = 50
    total = mp.mpf(0)
    term = mp.mpf(1)
    for k in range(terms):
        total += term
        term *= mp.mpf(z) / ((mp.mpf(b) + k) * (k + 1))
    return total


def test_hyp0f1_trivial():
    assert hyp0f1(7.0, 0.0) == 1.0
    # 0F1(3/2; x^2/4) = sinh(x)/x at x=1
    assert math.isclose(hyp0f1(1.5, 0.25), math.sinh(1.0), rel_tol=1e-13)


def test_hyp0f1_large_argument_vs_brute_force():
    ref = brute_force_0f1(102.0, 590.0)
    got = hyp0f1(102.0, 590.0)
    assert abs(got - float(ref)) <= 1e-12 * float(ref)


@pytest.mark.parametrize("b,z", [(2.5, 1.0), (102.0, 2490.0), (3.0, 459.0), (402.0, 2e5)])
def test_log_hyp0f1_vs_mpmath(b, z):
    mp.mp.dps = 40
    ref = mp.log(mp.hyp0f1(b, z))
    assert abs(log_hyp0f1(b, z) - float(ref)) <= 1e-12 * max(1.0, abs(float(ref)))


def test_hyp0f1_monotone_in_z():
    zs = np.linspace(0.0, 50.0, 25)
    vals = [hyp0f1(4.5, z) for z in zs]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_hyp0f1_domain_and_convergence():
    with pytest.raises(DomainError):
        hyp0f1(-1.0, 2.0)
    with pytest.raises(DomainError):
        hyp0f1(2.0, -1.0)
    with pytest.raises(ConvergenceError):
        hyp0f1(2.0, 1e4, SeriesControl(rel_tol=1e-14, max_terms=5))


def test_series_control_validation():
    with pytest.raises(DomainError):
        SeriesControl(rel_tol=0.0)
    with pytest.raises(DomainError):
        SeriesControl(max_terms=0)


def test_bessel_k_half_order():
    # K_{1/2}(x) = sqrt(pi/(2x)) exp(-x)
    x = 2.0
    assert math.isclose(bessel_k(0.5, x), math.sqrt(math.pi / (2 * x)) * math.exp(-x), rel_tol=1e-10)


def test_bessel_k_order_symmetry():
    assert math.isclose(bessel_k(-3.0, 1.0), bessel_k(3.0, 1.0), rel_tol=1e-12)


def test_bessel_k_vs_quadrature_oracle():
    # independent adaptive quadrature of the defining integral
    nu, x = 5.0, 10.0
    ref, err = quad(
        lambda t: math.exp(-x * math.cosh(t)) * math.cosh(nu * t),
        0.0,
        12.0,
        epsabs=1e-18,
        epsrel=1e-12,
    )
    assert err < 1e-12 * ref
    assert abs(bessel_k(nu, x) - ref) <= 1e-8 * ref


@pytest.mark.parametrize("nu,x", [(0.0, 0.3), (2.25, 7.0), (26.0, 3.0), (26.0, 40.0), (101.0, 15.0)])
def test_bessel_k_vs_mpmath(nu, x):
    mp.mp.dps = 30
    ref = float(mp.besselk(nu, x))
    assert abs(bessel_k(nu, x) - ref) <= 1e-9 * ref


def test_bessel_k_decreasing_in_x():
    xs = np.geomspace(0.1, 30.0, 15)
    vals = [bessel_k(2.0, x) for x in xs]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_bessel_k_domain():
    with pytest.raises(DomainError):
        bessel_k(1.0, 0.0)
    with pytest.raises(DomainError):
        bessel_k(1.0, -2.0)
