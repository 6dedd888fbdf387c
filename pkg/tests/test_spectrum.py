"""Spectrum models and the shape-invariance chain engine."""

import math

import pytest

from gkstates import (
    DomainError,
    InvalidChainError,
    MathewsLakshmanan,
    Morse,
    QuasiHarmonic,
    ShapeInvarianceChain,
    SpectrumRangeError,
    e_n,
    energy,
    si_energy,
    standard_chain,
)

ALL_MODELS = [
    QuasiHarmonic(alpha=1.0, upsilon=0.1),
    QuasiHarmonic(alpha=2.0, upsilon=0.5),
    Morse(mu=1.0),
    Morse(mu=2.0, alpha=1.5),
    MathewsLakshmanan(alpha=1.0, lambda_tilde=-0.08),
]


def test_e_n_direct_substitution():
    m = QuasiHarmonic(alpha=1.0, upsilon=0.2)
    assert math.isclose(e_n(m, 5), 5 * (1 + 0.04 * 6), rel_tol=1e-15)  # 6.2
    assert e_n(Morse(mu=1.0), 3) == 3.0
    for model in ALL_MODELS:
        assert e_n(model, 0) == 0.0


def test_energy_values():
    assert energy(QuasiHarmonic(alpha=1.0, upsilon=0.1), 0) == 0.5
    # alpha=2, ups=0.5: 2[(2.5) + 0.25*6] = 8
    assert math.isclose(energy(QuasiHarmonic(alpha=2.0, upsilon=0.5), 2), 8.0, rel_tol=1e-15)
    # harmonic limit
    assert math.isclose(energy(QuasiHarmonic(alpha=1.0, upsilon=0.0), 7), 7.5, rel_tol=1e-15)


@pytest.mark.parametrize("model", ALL_MODELS)
def test_monotonicity(model):
    levels = [model.e_n(n) for n in range(200)]
    assert all(b > a for a, b in zip(levels, levels[1:]))


@pytest.mark.parametrize("model", ALL_MODELS)
def test_energy_consistency(model):
    # E_n - E_0 = omega * e_n
    for n in (1, 3, 17, 120):
        lhs = model.energy(n) - model.energy(0)
        rhs = model.omega * model.e_n(n)
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_mathews_lakshmanan_matches_quasiharmonic():
    ups = 0.37
    ml = MathewsLakshmanan(alpha=1.0, lambda_tilde=-2 * ups**2)
    qh = QuasiHarmonic(alpha=1.0, upsilon=ups)
    for n in range(120):
        a, b = ml.e_n(n), qh.e_n(n)
        assert abs(a - b) <= 1e-15 * max(1.0, abs(b))


def test_truncated_spectrum_bound():
    ml = MathewsLakshmanan(alpha=1.0, lambda_tilde=0.1)
    assert ml.n_max_valid == 9  # floor(1/0.1 - 1)
    # the bound is exactly the last strictly increasing level
    levels = [ml.e_n(n) for n in range(ml.n_max_valid + 1)]
    assert all(b > a for a, b in zip(levels, levels[1:]))
    with pytest.raises(SpectrumRangeError):
        ml.e_n(ml.n_max_valid + 1)


def test_negative_n_rejected():
    with pytest.raises(SpectrumRangeError):
        QuasiHarmonic().e_n(-1)


def test_parameter_validation():
    with pytest.raises(DomainError):
        QuasiHarmonic(alpha=0.0)
    with pytest.raises(DomainError):
        QuasiHarmonic(upsilon=-0.1)
    with pytest.raises(DomainError):
        Morse(mu=0.0)
    with pytest.warns(UserWarning):
        QuasiHarmonic(upsilon=2.5)
    with pytest.warns(UserWarning):
        Morse(mu=5.0)


def test_si_energy_harmonic_ladder():
    omega = 0.7
    chain = ShapeInvarianceChain(
        remainder=lambda a: omega, param_map=lambda a: a, alpha_1=1.0, ground_energy=omega / 2
    )
    assert math.isclose(si_energy(chain, 4), omega / 2 + 4 * omega, rel_tol=1e-15)
    assert si_energy(chain, 0) == omega / 2


@pytest.mark.parametrize("ups", [0.1, 0.33, 1.0])
def test_si_chain_reproduces_quasiharmonic(ups):
    # dimensionless chain: R(a) = 1 + 2 ups^2 a, f(a) = a + 1, a_1 = 1
    chain = ShapeInvarianceChain(
        remainder=lambda a: 1.0 + 2.0 * ups**2 * a,
        param_map=lambda a: a + 1.0,
        alpha_1=1.0,
        ground_energy=0.0,
    )
    qh = QuasiHarmonic(alpha=1.0, upsilon=ups)
    for n in range(101):
        got = si_energy(chain, n)
        want = qh.e_n(n)
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_si_chain_morse():
    mu = 1.7
    chain = ShapeInvarianceChain(
        remainder=lambda a: mu**2, param_map=lambda a: a + 1.0, alpha_1=1.0
    )
    assert math.isclose(si_energy(chain, 6), 6 * mu**2, rel_tol=1e-14)


def test_si_chain_rejects_nonincreasing():
    chain = ShapeInvarianceChain(
        remainder=lambda a: 1.0 - a, param_map=lambda a: a + 1.0, alpha_1=1.0
    )
    with pytest.raises(InvalidChainError):
        si_energy(chain, 2)  # R(alpha_1) = 0 already invalid


@pytest.mark.parametrize(
    "model",
    [
        QuasiHarmonic(alpha=1.3, upsilon=0.25),
        Morse(mu=2.0, alpha=0.5),
        MathewsLakshmanan(alpha=1.0, lambda_tilde=-0.1),
        MathewsLakshmanan(alpha=2.0, lambda_tilde=0.05),
    ],
)
def test_standard_chain_matches_model_energies(model):
    chain = standard_chain(model)
    top = model.n_max_valid if model.n_max_valid is not None else 60
    for n in range(top + 1):
        got = si_energy(chain, n)
        want = model.energy(n)
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want))
