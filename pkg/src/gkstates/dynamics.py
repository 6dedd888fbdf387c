"""Temporal evolution: recurrence timescales, autocorrelation, revival detection.

The autocorrelation is A(t) = <J,gamma,t | J,gamma> = sum_n P_n
exp(+i e_n omega t); its complex conjugate corresponds to the opposite phase
convention and |A| is identical either way.  hbar = 1 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

import numpy as np

from .coherent import CoherentState
from .errors import DomainError, ResolutionError
from .spectrum import SpectrumModel

__all__ = [
    "Timescales",
    "timescales",
    "TimeSeries",
    "default_time_grid",
    "autocorrelation",
    "RevivalEvent",
    "detect_revivals",
    "distinct_fractions",
]


@dataclass(frozen=True)
class Timescales:
    """Recurrence times T_(r) = 2 pi / (omega/r! * d^r e/dn^r).

    A timescale is None when the corresponding spectral derivative vanishes
    (the recurrence is absent; e.g. no revival time for a linear spectrum).
    """

    t_classical: float
    t_revival: float | None
    t_super: float | None


def timescales(model: SpectrumModel, n0: float) -> Timescales:
    """Classical / revival / super-revival periods at wavepacket centre n0."""
    if n0 < 0:
        raise DomainError(f"n0 must be >= 0, got {n0}")
    out = []
    for order in (1, 2, 3):
        d = model.e_n_derivative(n0, order)
        if d == 0.0:
            out.append(None)
        else:
            out.append(2.0 * math.pi * math.factorial(order) / (model.omega * abs(d)))
    if out[0] is None:
        raise DomainError(f"spectrum of {model!r} is flat at n0={n0}")
    return Timescales(t_classical=out[0], t_revival=out[1], t_super=out[2])


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Uniformly sampled complex autocorrelation with its grid metadata."""

    times: np.ndarray
    values: np.ndarray
    model: SpectrumModel
    J: float
    gamma: float
    n0: float
    t_classical: float
    t_revival: float | None

    @property
    def abs2(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def default_time_grid(
    model: SpectrumModel,
    n0: float,
    samples_per_tcl: int = 20,
    horizon_revivals: float = 1.1,
    horizon_classical: float = 10.0,
) -> np.ndarray:
    """Uniform grid: samples_per_tcl points per T_cl out to 1.1 T_rev
    (or horizon_classical T_cl when no revival time exists)."""
    ts = timescales(model, n0)
    dt = ts.t_classical / samples_per_tcl
    horizon = (
        horizon_revivals * ts.t_revival
        if ts.t_revival is not None
        else horizon_classical * ts.t_classical
    )
    n_samples = int(math.floor(horizon / dt)) + 1
    return np.arange(n_samples) * dt


def autocorrelation(state: CoherentState, t_grid: np.ndarray | None = None) -> TimeSeries:
    """Evaluate A(t) over a grid (the default grid when none is given)."""
    n0 = state.mean_n()
    if t_grid is None:
        t_grid = default_time_grid(state.model, n0)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise DomainError("time grid must be a 1-d array with at least 2 samples")
    w = state.weights
    phases = state.e_values * state.model.omega
    values = np.empty(len(t_grid), dtype=complex)
    # chunked matmul keeps the (t, n) phase matrix bounded in memory
    for lo in range(0, len(t_grid), 8192):
        hi = min(lo + 8192, len(t_grid))
        values[lo:hi] = np.exp(1j * np.outer(t_grid[lo:hi], phases)) @ w
    ts = timescales(state.model, n0)
    return TimeSeries(
        times=t_grid,
        values=values,
        model=state.model,
        J=state.J,
        gamma=state.gamma,
        n0=n0,
        t_classical=ts.t_classical,
        t_revival=ts.t_revival,
    )


@dataclass(frozen=True)
class RevivalEvent:
    """A local maximum of |A|^2, optionally identified as p/q of T_rev."""

    time: float
    amplitude_sq: float
    p: int | None = None
    q: int | None = None

    @property
    def label(self) -> str:
        return f"{self.p}/{self.q}" if self.p is not None else ""


def detect_revivals(
    series: TimeSeries, threshold: float, q_max: int
) -> list[RevivalEvent]:
    """Locate |A|^2 peaks above threshold and label fractional revival times.

    Peaks are found on a 5-point moving average (so the classical-period
    carrier cannot mask envelope maxima) and refined on the raw samples.  A
    peak earns the label p/q (coprime, q <= q_max) when it lies within
    max(2 dt, T_cl/3) of p/q * T_rev; the T_cl/3 floor is what admits
    quarter-revival peaks, which physically sit a quarter classical period
    away from the exact fraction.
    """
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must be in (0, 1), got {threshold}")
    if q_max < 1:
        raise DomainError(f"q_max must be >= 1, got {q_max}")
    dt = series.dt
    if dt > series.t_classical / 10.0:
        raise ResolutionError(
            f"grid step {dt:g} gives fewer than 10 samples per classical "
            f"period {series.t_classical:g}"
        )
    a2 = series.abs2
    smooth = np.convolve(a2, np.full(5, 0.2), mode="same")
    peaks: list[int] = []
    # the first/last two smoothed samples are contaminated by zero padding
    for i in range(2, len(smooth) - 2):
        if not (smooth[i] > smooth[i - 1] and smooth[i] >= smooth[i + 1]):
            continue
        lo = max(0, i - 2)
        j = lo + int(np.argmax(a2[lo : min(len(a2), i + 3)]))
        if a2[j] < threshold or j <= 2 or j >= len(a2) - 3:
            continue
        # adjacent smoothed maxima refining into near-identical raw samples
        # are one physical peak; keep the stronger
        if peaks and j - peaks[-1] <= 3:
            if a2[j] > a2[peaks[-1]]:
                peaks[-1] = j
            continue
        peaks.append(j)
    events: list[RevivalEvent] = []
    t_rev = series.t_revival
    tol = max(2.0 * dt, series.t_classical / 3.0)
    horizon = float(series.times[-1])
    for j in peaks:
        t_peak = float(series.times[j])
        p = q = None
        if t_rev is not None:
            best = math.inf
            for qq in range(1, q_max + 1):
                for pp in range(1, int(math.ceil(horizon / t_rev * qq)) + 2):
                    if gcd(pp, qq) != 1:
                        continue
                    d = abs(t_peak - pp / qq * t_rev)
                    if d <= tol and d < best:
                        best, p, q = d, pp, qq
        events.append(RevivalEvent(time=t_peak, amplitude_sq=float(a2[j]), p=p, q=q))
    events.sort(key=lambda ev: ev.time)
    return events


def distinct_fractions(events: list[RevivalEvent]) -> set[tuple[int, int]]:
    """Set of distinct (p, q) labels among detected events."""
    return {(ev.p, ev.q) for ev in events if ev.p is not None}
