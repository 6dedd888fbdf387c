"""Gazeau-Klauder coherent-state construction.

A state |J, gamma> has coefficients c_n = J^(n/2) e^(-i gamma e_n) /
(N(J) sqrt(rho_n)) with rho_n the running product of the dimensionless
levels e_1 ... e_n and N^2(J) = sum_n J^n / rho_n.  All weights are carried
as logarithms; exponentiation happens once, after a max subtraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateSpectrumError,
    DomainError,
    ModelMismatchError,
    TruncatedSpectrumError,
)
from .specfun import DEFAULT_CONTROL, SeriesControl, log_gamma
from .spectrum import Morse, QuasiHarmonic, SpectrumModel

__all__ = [
    "CoherentState",
    "log_rho",
    "log_rho_sequence",
    "log_rho_closed",
    "log_normalization_sq",
    "build_state",
    "radius_of_convergence",
    "overlap",
    "continuity_gap",
]

# Truncation rule: drop the tail once terms fall below 1e-18 of the peak
# (the probability tail this leaves behind is far below the 1e-15 budget),
# never retaining more than 5000 components.
_TAIL_LOG = 18.0 * math.log(10.0)
_MAX_COMPONENTS = 5000


def _require_constructible(model: SpectrumModel) -> None:
    if model.n_max_valid is not None:
        raise TruncatedSpectrumError(
            f"{model!r} has a truncated spectrum (n_max={model.n_max_valid}); "
            "Gazeau-Klauder states are only built over unbounded spectra"
        )


def log_rho_sequence(model: SpectrumModel, n_max: int) -> np.ndarray:
    """Array of ln rho_n for n = 0 .. n_max (rho_0 = 1)."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    out = np.empty(n_max + 1)
    out[0] = 0.0
    acc = 0.0
    for i in range(1, n_max + 1):
        e = model.e_n(i)
        if not e > 0:
            raise DegenerateSpectrumError(
                f"e_{i} = {e} is not positive; rho_n is undefined"
            )
        acc += math.log(e)
        out[i] = acc
    return out


def log_rho(model: SpectrumModel, n: int) -> float:
    """ln rho_n as the direct sum of ln e_i."""
    return float(log_rho_sequence(model, n)[n])


def log_rho_closed(model: SpectrumModel, n: int) -> float:
    """Closed-form ln rho_n (quasi-harmonic and Morse models only)."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if isinstance(model, QuasiHarmonic):
        u = model.upsilon
        if u == 0.0:
            return log_gamma(n + 1.0)  # Poisson limit: rho_n = n!
        b = 2.0 + 1.0 / u**2
        return log_gamma(n + 1.0) + 2.0 * n * math.log(u) + log_gamma(b + n) - log_gamma(b)
    if isinstance(model, Morse):
        return log_gamma(n + 1.0) + 2.0 * n * math.log(model.mu)
    raise DomainError(f"no closed-form rho_n for model {model!r}")


def _log_series_terms(
    model: SpectrumModel, J: float, ctl: SeriesControl
) -> np.ndarray:
    """Log-terms n ln J - ln rho_n of the normalisation series, truncated."""
    if J < 0:
        raise DomainError(f"J must be >= 0, got {J}")
    if J == 0.0:
        return np.zeros(1)
    log_j = math.log(J)
    terms = [0.0]
    lt = 0.0
    lt_max = 0.0
    cap = min(_MAX_COMPONENTS, ctl.max_terms)
    for n in range(1, cap + 1):
        e = model.e_n(n)
        if not e > 0:
            raise DegenerateSpectrumError(
                f"e_{n} = {e} is not positive; series terms are undefined"
            )
        lt += log_j - math.log(e)
        terms.append(lt)
        lt_max = max(lt_max, lt)
        if J < e and lt < lt_max - _TAIL_LOG:
            return np.asarray(terms)
    if J >= model.e_n(cap):
        raise DomainError(
            f"J={J} appears to lie outside the radius of convergence of {model!r}"
        )
    raise ConvergenceError(
        f"normalisation series for J={J} still above the tail cutoff "
        f"after {cap} terms"
    )


def _logsumexp(values: np.ndarray) -> float:
    m = float(values.max())
    return m + math.log(float(np.sum(np.exp(values - m))))


def log_normalization_sq(
    model: SpectrumModel, J: float, ctl: SeriesControl | None = None
) -> float:
    """ln N^2(J) = ln sum_n J^n / rho_n by direct series summation."""
    _require_constructible(model)
    terms = _log_series_terms(model, J, ctl or DEFAULT_CONTROL)
    return _logsumexp(terms)


@dataclass(frozen=True, eq=False)
class CoherentState:
    """Immutable Gazeau-Klauder state |J, gamma> over a spectrum model.

    log_weights[n] holds ln P_n = ln(J^n / (N^2(J) rho_n)); the phase of the
    n-th coefficient is exp(-i e_n (gamma + omega t)) and is generated on
    demand rather than stored.
    """

    model: SpectrumModel
    J: float
    gamma: float
    log_weights: np.ndarray = field(repr=False)
    e_values: np.ndarray = field(repr=False)
    log_norm_sq: float

    @property
    def truncation_n(self) -> int:
        """Number of retained components."""
        return len(self.log_weights)

    @property
    def weights(self) -> np.ndarray:
        """Probabilities P_n of each retained component."""
        return np.exp(self.log_weights)

    def mean_n(self) -> float:
        """Mean excitation number <n>."""
        return float(np.dot(self.weights, np.arange(self.truncation_n)))

    def coefficients(self, time: float = 0.0) -> np.ndarray:
        """Complex expansion coefficients c_n at evolution time t."""
        mag = np.exp(0.5 * self.log_weights)
        phase = -self.e_values * (self.gamma + self.model.omega * time)
        return mag * np.exp(1j * phase)


def build_state(
    model: SpectrumModel,
    J: float,
    gamma: float = 0.0,
    ctl: SeriesControl | None = None,
) -> CoherentState:
    """Construct |J, gamma>, truncated so the omitted tail mass is < 1e-15."""
    _require_constructible(model)
    if not math.isfinite(gamma):
        raise DomainError(f"gamma must be finite, got {gamma}")
    terms = _log_series_terms(model, J, ctl or DEFAULT_CONTROL)
    lns = _logsumexp(terms)
    n = np.arange(len(terms))
    e_vals = np.array([0.0] + [model.e_n(int(k)) for k in n[1:]])
    return CoherentState(
        model=model,
        J=float(J),
        gamma=float(gamma),
        log_weights=terms - lns,
        e_values=e_vals,
        log_norm_sq=lns,
    )


def radius_of_convergence(model: SpectrumModel) -> float:
    """Estimate R = lim rho_n^(1/n) from the ratio sequence rho_{n+1}/rho_n = e_{n+1}.

    The ratios are followed over the window n in [200, 400] and extended
    geometrically while they keep growing; a sequence still growing past 1e6
    is classified as an infinite radius.
    """
    if model.n_max_valid is not None:
        return math.inf  # finite sum: entire function of J
    prev = model.e_n(200)
    n = 201
    while n <= 10_000_000:
        cur = model.e_n(n)
        if cur > 1e6 and cur > prev:
            return math.inf
        if abs(cur - prev) <= 1e-12 * max(1.0, abs(cur)):
            return cur
        prev = cur
        n = n + 1 if n < 400 else int(math.ceil(n * 1.25))
    return math.inf if cur > prev else cur


def _extended_log_weights(state: CoherentState, n_last: int) -> np.ndarray:
    """State's ln P_n extended (with its own normalisation) out to index n_last."""
    have = state.truncation_n - 1
    if n_last <= have:
        return state.log_weights[: n_last + 1]
    if state.J == 0.0:
        out = np.full(n_last + 1, -math.inf)
        out[0] = state.log_weights[0]
        return out
    log_j = math.log(state.J)
    extra = np.empty(n_last - have)
    lt = state.log_weights[have] + state.log_norm_sq
    for i, n in enumerate(range(have + 1, n_last + 1)):
        lt += log_j - math.log(state.model.e_n(n))
        extra[i] = lt
    return np.concatenate([state.log_weights, extra - state.log_norm_sq])


def overlap(state_a: CoherentState, state_b: CoherentState) -> complex:
    """<b|a> = sum_n sqrt(P_n^a P_n^b) exp(-i (gamma_a - gamma_b) e_n).

    Hermitian in its arguments: overlap(a, b) == conj(overlap(b, a)).
    """
    if state_a.model != state_b.model:
        raise ModelMismatchError(
            f"cannot overlap states on different models: "
            f"{state_a.model!r} vs {state_b.model!r}"
        )
    n_last = max(state_a.truncation_n, state_b.truncation_n) - 1
    lwa = _extended_log_weights(state_a, n_last)
    lwb = _extended_log_weights(state_b, n_last)
    mag = np.exp(0.5 * (lwa + lwb))
    e_vals = (
        state_a.e_values
        if state_a.truncation_n >= state_b.truncation_n
        else state_b.e_values
    )
    dgamma = state_a.gamma - state_b.gamma
    return complex(np.sum(mag * np.exp(-1j * dgamma * e_vals)))


def continuity_gap(state_a: CoherentState, state_b: CoherentState) -> float:
    """Squared state distance 2 (1 - Re <b|a>); vanishes as labels coincide."""
    return 2.0 * (1.0 - overlap(state_a, state_b).real)
