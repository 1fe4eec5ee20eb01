"""Sampled decay envelopes, their time-integrated spectrum, and log-log slopes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .band import _as_band
from .errors import ParameterError
from .spectra import FiniteSignalModel


def _strictly_increasing(name, values):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ParameterError(f"{name} must be a non-empty 1-d sequence")
    if not np.isfinite(arr).all():
        raise ParameterError(f"{name} must be finite")
    if arr.size > 1 and not (np.diff(arr) > 0).all():
        raise ParameterError(f"{name} must be strictly increasing")
    return arr


def _check_freqs(freqs):
    arr = _strictly_increasing("freqs", freqs)
    if arr[0] <= 0.0:
        raise ParameterError("freqs must be > 0")
    return arr


def _check_times(times, duration=None):
    arr = _strictly_increasing("times", times)
    if arr.size < 2:
        raise ParameterError("times needs at least 2 points")
    if arr[0] != 0.0:
        raise ParameterError("times must start at 0")
    if duration is not None and arr[-1] != duration:
        raise ParameterError(f"times must end at the duration {duration!r}, got {arr[-1]!r}")
    return arr


def uniform_times(duration, steps):
    """``steps + 1`` evenly spaced times from 0 to exactly ``duration``."""
    steps = int(steps)
    if steps < 1:
        raise ParameterError("steps must be >= 1")
    times = np.linspace(0.0, float(duration), steps + 1)
    times[-1] = float(duration)
    return times


@dataclass(frozen=True, eq=False)
class EnvelopeGrid:
    """Decayed power sampled on ``freqs x times``."""

    freqs: np.ndarray
    times: np.ndarray
    power: np.ndarray
    seed: int | None = None
    noise_level: float = 0.0

    def __post_init__(self):
        freqs = _check_freqs(self.freqs)
        times = _check_times(self.times)
        power = np.asarray(self.power, dtype=np.float64)
        if power.shape != (freqs.size, times.size):
            raise ParameterError(
                f"power has shape {power.shape}, expected {(freqs.size, times.size)}"
            )
        if not (power >= 0).all():
            raise ParameterError("power values must be >= 0")
        if not self.noise_level >= 0:
            raise ParameterError("noise_level must be >= 0")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "power", power)

    @property
    def duration(self):
        return float(self.times[-1])


@dataclass(frozen=True, eq=False)
class SpectrumSamples:
    """Spectrum values at strictly increasing positive frequencies."""

    freqs: np.ndarray
    powers: np.ndarray

    def __post_init__(self):
        freqs = _check_freqs(self.freqs)
        powers = np.asarray(self.powers, dtype=np.float64)
        if powers.shape != freqs.shape:
            raise ParameterError("freqs and powers differ in length")
        if not np.isfinite(powers).all():
            raise ParameterError("powers must be finite")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "powers", powers)

    def __len__(self):
        return self.freqs.size


def lognormal_factors(shape, noise_level, seed):
    """Multiplicative noise ``exp(noise_level * z)`` with z standard normal.

    Drawn from numpy's PCG64 generator seeded with ``seed``; all ones when
    ``noise_level`` is 0 (no draws are made).
    """
    if not (noise_level >= 0 and math.isfinite(noise_level)):
        raise ParameterError(f"noise_level must be finite and >= 0, got {noise_level!r}")
    if noise_level == 0:
        return np.ones(shape)
    rng = np.random.default_rng(seed)
    return np.exp(noise_level * rng.standard_normal(shape))


def synthesize_grid(model: FiniteSignalModel, freqs, times, noise_level=0.0,
                    seed=0) -> EnvelopeGrid:
    """Sample ``i0 * exp(-alpha0 * f**y * t)`` with optional lognormal noise."""
    freqs = _check_freqs(freqs)
    times = _check_times(times, model.duration)
    noise_level = float(noise_level)
    power = kernels.envelope(model.i0, model.alpha0, model.y, freqs, times)
    power *= lognormal_factors(power.shape, noise_level, seed)
    return EnvelopeGrid(freqs, times, power, seed, noise_level)


def estimate_psd(grid: EnvelopeGrid) -> SpectrumSamples:
    """Trapezoidal time integral of each frequency row of ``grid``."""
    if grid.times.size < 2:
        raise ParameterError("time grid needs at least 2 points")
    power = np.ascontiguousarray(grid.power)
    return SpectrumSamples(grid.freqs, kernels.trapezoid_rows(power, grid.times))


def loglog_slope(samples: SpectrumSamples, band) -> float:
    """Least-squares slope of ``log P`` against ``log f`` for samples inside ``band``."""
    band = _as_band(band)
    mask = (samples.freqs >= band.f_lo) & (samples.freqs <= band.f_hi)
    if mask.sum() < 2:
        raise ParameterError(f"need at least 2 samples in [{band.f_lo}, {band.f_hi}]")
    p = samples.powers[mask]
    if not (p > 0).all():
        raise ParameterError("powers must be > 0 for a log-log slope")
    lf = np.log(samples.freqs[mask])
    lp = np.log(p)
    lf_c = lf - lf.mean()
    return float(np.dot(lf_c, lp - lp.mean()) / np.dot(lf_c, lf_c))


__all__ = [
    "EnvelopeGrid",
    "SpectrumSamples",
    "estimate_psd",
    "lognormal_factors",
    "loglog_slope",
    "synthesize_grid",
    "uniform_times",
]
