"""Coherent-state construction: rho, normalisation, weights, overlaps."""

import math

import mpmath as mp
import numpy as np
import pytest

from gkstates import (
    DegenerateSpectrumError,
    DomainError,
    ModelMismatchError,
    Morse,
    MathewsLakshmanan,
    QuasiHarmonic,
    SpectrumModel,
    TruncatedSpectrumError,
    build_state,
    continuity_gap,
    log_normalization_sq,
    log_rho,
    log_rho_closed,
    log_rho_sequence,
    overlap,
    radius_of_convergence,
)


class GeometricSpectrum(SpectrumModel):
    """Synthetic bounded spectrum e_n = 1 - 2^-n: finite radius of convergence."""

    alpha = 1.0

    @property
    def ground_energy(self):
        return 0.0

    def _e_raw(self, n):
        return 0.0 if n == 0 else 1.0 - 2.0 ** (-n)

    def e_n_derivative(self, n, order):
        raise NotImplementedError


class DegenerateSpectrum(SpectrumModel):
    alpha = 1.0

    @property
    def ground_energy(self):
        return 0.0

    def _e_raw(self, n):
        return 0.0 if n <= 1 else float(n)


def test_rho_zero_is_one():
    for model in (QuasiHarmonic(upsilon=0.3), Morse(mu=2.0)):
        assert log_rho(model, 0) == 0.0


def test_rho_direct_substitution():
    # e_1 = 1.5, e_2 = 3.5 at ups = 0.5 -> rho_2 = 5.25
    m = QuasiHarmonic(alpha=1.0, upsilon=0.5)
    assert math.isclose(log_rho(m, 2), math.log(5.25), rel_tol=1e-14)
    # Morse: rho_n = n! mu^(2n); mu=2, n=3 -> 3! * 4^3 = 384
    assert math.isclose(log_rho(Morse(mu=2.0), 3), math.log(384.0), rel_tol=1e-14)


@pytest.mark.parametrize("ups", [0.05, 0.1, 0.5, 1.0, 2.0])
def test_rho_closed_form_matches_product(ups):
    m = QuasiHarmonic(alpha=1.0, upsilon=ups)
    seq = log_rho_sequence(m, 200)
    for n in (0, 1, 2, 10, 50, 137, 200):
        assert abs(log_rho_closed(m, n) - seq[n]) <= 1e-12 * max(1.0, abs(seq[n]))


def test_rho_closed_form_morse():
    m = Morse(mu=0.7)
    seq = log_rho_sequence(m, 60)
    for n in (0, 1, 7, 60):
        assert abs(log_rho_closed(m, n) - seq[n]) <= 1e-12 * max(1.0, abs(seq[n]))


def test_rho_degenerate_spectrum():
    with pytest.raises(DegenerateSpectrumError):
        log_rho_sequence(DegenerateSpectrum(), 3)


def brute_force_log_norm_sq(model, J, n_terms=400):
    mp.mp.dps = 50
    total = mp.mpf(0)
    log_rho_n = mp.mpf(0)
    for n in range(n_terms):
        if n > 0:
            log_rho_n += mp.log(model.e_n(n))
        total += mp.e ** (n * mp.log(J) - log_rho_n) if J > 0 else (1 if n == 0 else 0)
    return float(mp.log(total))


def test_normalization_trivial_and_morse():
    assert log_normalization_sq(QuasiHarmonic(upsilon=0.1), 0.0) == 0.0
    # Morse: N^2 = exp(J/mu^2)
    assert math.isclose(log_normalization_sq(Morse(mu=1.0), 3.0), 3.0, rel_tol=1e-13)
    assert math.isclose(log_normalization_sq(Morse(mu=2.0), 10.0), 2.5, rel_tol=1e-13)


@pytest.mark.parametrize("ups,J", [(0.1, 5.9), (0.1, 24.9), (0.5, 130.3), (1.0, 459.0)])
def test_normalization_vs_brute_force(ups, J):
    m = QuasiHarmonic(alpha=1.0, upsilon=ups)
    got = log_normalization_sq(m, J)
    ref = brute_force_log_norm_sq(m, J)
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_build_state_vacuum():
    st = build_state(QuasiHarmonic(upsilon=0.1), 0.0, 0.0)
    assert st.truncation_n == 1
    assert st.weights[0] == 1.0


def test_build_state_truncation_and_normalisation():
    st = build_state(QuasiHarmonic(upsilon=0.1), 5.9, 0.0)
    assert st.truncation_n >= 30
    assert abs(st.weights.sum() - 1.0) <= 1e-12
    # tail mass below the retained components is negligible
    assert st.weights[-1] < 1e-15


def test_morse_weights_are_poisson():
    lam = 4.0
    st = build_state(Morse(mu=1.0), 4.0, 1.3)
    n = np.arange(st.truncation_n)
    poisson = np.exp(-lam + n * math.log(lam) - [math.lgamma(k + 1) for k in n])
    assert np.max(np.abs(st.weights - poisson)) < 1e-14


@pytest.mark.parametrize("J", [1.0, 5.0, 20.0])
def test_small_upsilon_limit_is_poisson(J):
    st = build_state(QuasiHarmonic(alpha=1.0, upsilon=1e-6), J, 0.0)
    n = np.arange(st.truncation_n)
    poisson = np.exp(-J + n * math.log(J) - np.array([math.lgamma(k + 1) for k in n]))
    total_variation = 0.5 * np.sum(np.abs(st.weights - poisson))
    assert total_variation < 1e-4


@pytest.mark.parametrize(
    "model,J",
    [
        (QuasiHarmonic(upsilon=0.1), 5.9),
        (QuasiHarmonic(upsilon=1.0), 459.0),
        (Morse(mu=2.0), 4.0),
        (MathewsLakshmanan(lambda_tilde=-0.02), 11.0),
    ],
)
def test_action_identity(model, J):
    # sum_n P_n e_n = J
    st = build_state(model, J, 0.0)
    mean_e = float(np.dot(st.weights, st.e_values))
    assert abs(mean_e - J) <= 1e-12 * J


def test_truncated_spectrum_rejected():
    with pytest.raises(TruncatedSpectrumError):
        build_state(MathewsLakshmanan(lambda_tilde=0.1), 1.0, 0.0)


def test_j_outside_convergence_domain():
    with pytest.raises(DomainError):
        build_state(GeometricSpectrum(), 2.0, 0.0)  # radius is 1


def test_gamma_must_be_finite():
    with pytest.raises(DomainError):
        build_state(QuasiHarmonic(upsilon=0.1), 1.0, math.inf)


def test_radius_of_convergence():
    assert radius_of_convergence(QuasiHarmonic(upsilon=0.3)) == math.inf
    assert radius_of_convergence(Morse(mu=1.0)) == math.inf
    assert abs(radius_of_convergence(GeometricSpectrum()) - 1.0) <= 1e-3


def test_overlap_self_is_one():
    st = build_state(QuasiHarmonic(upsilon=0.1), 5.9, 0.7)
    val = overlap(st, st)
    assert abs(val - 1.0) <= 1e-12


def test_overlap_full_period_phase():
    # with 1/ups^2 integer, shifting gamma by 2 pi / ups^2 multiplies every
    # coefficient phase by a multiple of 2 pi
    m = QuasiHarmonic(alpha=1.0, upsilon=0.1)
    a = build_state(m, 5.9, 0.0)
    b = build_state(m, 5.9, 2.0 * math.pi / 0.1**2)
    assert abs(abs(overlap(a, b)) - 1.0) <= 1e-9


def brute_force_overlap(model, Ja, ga, Jb, gb, n_terms=400):
    mp.mp.dps = 40
    total = mp.mpc(0)
    log_rho_n = mp.mpf(0)
    for n in range(n_terms):
        if n > 0:
            log_rho_n += mp.log(model.e_n(n))
        mag = mp.e ** (0.5 * n * (mp.log(Ja) + mp.log(Jb)) - log_rho_n)
        total += mag * mp.e ** (-1j * (ga - gb) * mp.mpf(model.e_n(n)))
    log_norm = 0.5 * (
        brute_force_log_norm_sq(model, Ja) + brute_force_log_norm_sq(model, Jb)
    )
    return complex(total / mp.e**log_norm)


def test_overlap_cross_values_vs_brute_force():
    m = QuasiHarmonic(alpha=1.0, upsilon=0.1)
    a = build_state(m, 5.9, 0.0)
    b = build_state(m, 24.9, 0.0)
    got = overlap(a, b)
    ref = brute_force_overlap(m, 5.9, 0.0, 24.9, 0.0)
    assert got.imag == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < got.real < 1.0
    assert abs(got - ref) <= 1e-10


def test_overlap_hermitian_and_bounded():
    m = QuasiHarmonic(alpha=1.0, upsilon=0.2)
    a = build_state(m, 6.9, 0.3)
    b = build_state(m, 15.3, -1.1)
    assert overlap(a, b) == pytest.approx(overlap(b, a).conjugate(), abs=1e-14)
    for Ja, Jb, ga, gb in [(1.0, 2.0, 0.0, 0.5), (6.9, 6.9, 0.1, 2.0), (0.0, 3.0, 0.0, 1.0)]:
        val = overlap(build_state(m, Ja, ga), build_state(m, Jb, gb))
        assert abs(val) <= 1.0 + 1e-12


def test_overlap_model_mismatch():
    a = build_state(QuasiHarmonic(upsilon=0.1), 1.0, 0.0)
    b = build_state(QuasiHarmonic(upsilon=0.2), 1.0, 0.0)
    with pytest.raises(ModelMismatchError):
        overlap(a, b)


def test_continuity_gap():
    m = QuasiHarmonic(alpha=1.0, upsilon=0.1)
    st = build_state(m, 5.9, 0.0)
    assert continuity_gap(st, st) == pytest.approx(0.0, abs=1e-12)
    near = build_state(m, 5.9 + 1e-6, 0.0)
    assert continuity_gap(st, near) < 1e-6
    far = build_state(m, 100.0, 2.0)
    assert 0.0 <= continuity_gap(st, far) <= 4.0
