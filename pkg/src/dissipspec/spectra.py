"""Closed-form power spectra of a dissipative signal.

A signal whose power decays as ``I0 * exp(-alpha(f) * t)`` with the power-law
attenuation ``alpha(f) = alpha0 * f**y`` has, integrated over time,

* infinite duration:  ``P(f) = I0 / (alpha0 * f**y)``
* finite duration T:  ``P_T(f) = I0 * (1 - exp(-alpha0 * f**y * T)) / (alpha0 * f**y)``

and ``R(f) = P_T(f) * f**y`` is the slowly varying prefactor of the
finite-duration spectrum.  ``P_T`` tends to the plateau ``I0 * T`` as
``f -> 0`` whatever ``y`` is.

Frequency arguments may be scalars or arrays; scalars give back a float.
``math.inf`` is the value returned where the infinite-duration spectrum
diverges, not an error.  ``0 ** 0`` is taken as 1, so ``y = 0`` is flat at
every frequency including zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ParameterError

Y_MIN = 0.0
Y_MAX = 2.0


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise ParameterError(f"{name} must be finite and > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class DissipationParams:
    """Initial power ``i0``, attenuation scale ``alpha0`` and exponent ``y``."""

    i0: float
    alpha0: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "i0", _positive("i0", self.i0))
        object.__setattr__(self, "alpha0", _positive("alpha0", self.alpha0))
        y = float(self.y)
        if not Y_MIN <= y <= Y_MAX:
            raise ParameterError(f"y must lie in [0, 2], got {y!r}")
        object.__setattr__(self, "y", y)

    @property
    def amplitude(self):
        """``i0 / alpha0``, the tail prefactor of both spectra."""
        return self.i0 / self.alpha0


@dataclass(frozen=True)
class FiniteSignalModel:
    """A dissipative medium observed for a finite ``duration``."""

    params: DissipationParams
    duration: float

    def __post_init__(self):
        if not isinstance(self.params, DissipationParams):
            raise ParameterError("params must be a DissipationParams")
        object.__setattr__(self, "duration", _positive("duration", self.duration))

    @classmethod
    def from_values(cls, i0, alpha0, y, duration):
        return cls(DissipationParams(i0, alpha0, y), duration)

    @property
    def i0(self):
        return self.params.i0

    @property
    def alpha0(self):
        return self.params.alpha0

    @property
    def y(self):
        return self.params.y


def _nonnegative(name, value):
    """Return ``(array, was_scalar)``; rejects NaN and negatives, allows +inf."""
    arr = np.asarray(value, dtype=np.float64)
    if np.isnan(arr).any() or (arr < 0).any():
        raise ParameterError(f"{name} must be >= 0")
    return arr, arr.ndim == 0


def _unwrap(arr, scalar):
    return float(arr) if scalar else arr


def _kernel_call(fn, f, *head):
    flat = np.ascontiguousarray(f, dtype=np.float64).ravel()
    return fn(*head, flat).reshape(f.shape)


def one_minus_exp_ratio(x):
    """``(1 - exp(-x)) / x`` for ``x >= 0`` with full relative accuracy.

    Equals 1 at ``x = 0`` and 0 at ``x = inf``.
    """
    arr, scalar = _nonnegative("x", x)
    return _unwrap(_kernel_call(kernels.one_minus_exp_ratio, arr), scalar)


def attenuation(params: DissipationParams, f):
    """Attenuation coefficient ``alpha0 * f**y``."""
    arr, scalar = _nonnegative("f", f)
    with np.errstate(over="ignore"):
        out = params.alpha0 * np.power(arr, params.y)
    return _unwrap(out, scalar)


def instantaneous_power(params: DissipationParams, f, t):
    """Decayed power ``i0 * exp(-alpha(f) * t)``; broadcasts ``f`` against ``t``."""
    t_arr, t_scalar = _nonnegative("t", t)
    rate = np.asarray(attenuation(params, f))
    with np.errstate(under="ignore", invalid="ignore"):
        out = params.i0 * np.exp(-rate * t_arr)
    # inf rate at t = 0 still means no decay yet
    out = np.where(t_arr == 0.0, params.i0, out)
    return _unwrap(out, t_scalar and rate.ndim == 0)


def psd_infinite(params: DissipationParams, f):
    """Infinite-duration spectrum ``i0 / (alpha0 * f**y)``.

    Returns ``inf`` at ``f = 0`` when ``y > 0``.
    """
    arr, scalar = _nonnegative("f", f)
    with np.errstate(divide="ignore", over="ignore"):
        out = params.i0 / (params.alpha0 * np.power(arr, params.y))
    return _unwrap(out, scalar)


def psd_finite(model: FiniteSignalModel, f):
    """Finite-duration spectrum, always finite and at most ``i0 * duration``."""
    arr, scalar = _nonnegative("f", f)
    out = _kernel_call(
        kernels.psd_finite, arr, model.i0, model.alpha0, model.y, model.duration
    )
    return _unwrap(out, scalar)


def augmented_r(model: FiniteSignalModel, f):
    """``i0 * (1 - exp(-alpha0 * f**y * T)) / alpha0``.

    Rises from 0 at ``f = 0`` (for ``y > 0``) towards ``i0 / alpha0``.
    """
    arr, scalar = _nonnegative("f", f)
    p = model.params
    with np.errstate(over="ignore"):
        x = p.alpha0 * np.power(arr, p.y) * model.duration
    out = -np.expm1(-x) * (p.i0 / p.alpha0)
    return _unwrap(out, scalar)


def low_freq_limit(model: FiniteSignalModel):
    """Plateau ``i0 * duration`` that ``psd_finite`` approaches as ``f -> 0``."""
    return model.i0 * model.duration
