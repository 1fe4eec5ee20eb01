"""Band-integrated power and infrared-catastrophe classification.

Integrating the infinite-duration spectrum ``A / f**y`` down to ``f = 0``
diverges once ``y >= 1``; the finite-duration spectrum is bounded by its
plateau ``i0 * T`` and integrates to a finite value over every band.
Divergence is decided from the exponent and band edge alone, never by
probing the integral numerically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import kernels
from .errors import ParameterError, QuadratureError
from .spectra import DissipationParams, FiniteSignalModel

DEFAULT_TOL = 1e-9
MAX_PANELS = 1_000_000

# |y - 1| below this uses the logarithmic antiderivative
LOG_BRANCH_WIDTH = 1e-12


@dataclass(frozen=True)
class Band:
    f_lo: float
    f_hi: float

    def __post_init__(self):
        lo, hi = float(self.f_lo), float(self.f_hi)
        if not (0.0 <= lo < hi < math.inf):
            raise ParameterError(f"band needs 0 <= f_lo < f_hi < inf, got [{lo!r}, {hi!r}]")
        object.__setattr__(self, "f_lo", lo)
        object.__setattr__(self, "f_hi", hi)

    @property
    def width(self):
        return self.f_hi - self.f_lo


@dataclass(frozen=True)
class Finite:
    """A finite band power with its absolute error estimate."""

    value: float
    error: float = 0.0


class Divergent:
    """Marker for a band power that is infinite."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Divergent"

    def __reduce__(self):
        return (Divergent, ())


DIVERGENT = Divergent()

BandPower = Union[Finite, Divergent]


class Classification(enum.Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"


def _as_band(band):
    if isinstance(band, Band):
        return band
    lo, hi = band
    return Band(lo, hi)


def _check_tol(tol):
    tol = float(tol)
    if not 0.0 < tol < 1.0:
        raise ParameterError(f"tol must lie in (0, 1), got {tol!r}")
    return tol


def _raise_unconverged(status, value, error, panels):
    reason = "panel budget exhausted" if status == 1 else "roundoff limit reached"
    raise QuadratureError(
        f"quadrature did not converge ({reason}; {panels} panels, "
        f"estimate {value!r} +/- {error!r})",
        value, error, panels,
    )


def quadrature(
    integrand: Callable[[np.ndarray], np.ndarray],
    band,
    tol: float = DEFAULT_TOL,
    max_panels: int = MAX_PANELS,
) -> tuple[float, float]:
    """Integrate ``integrand`` over ``band`` by adaptive Gauss-Kronrod (7/15).

    The panel with the largest error estimate is bisected until the summed
    estimates fall below ``tol * |value|``.  ``integrand`` is called with an
    array of 15 nodes and must return an array of the same shape.

    Raises :class:`QuadratureError` carrying the best estimate when the
    panel budget is exhausted or no panel can be refined further.
    """
    band = _as_band(band)
    tol = _check_tol(tol)

    def wrapped(x, _args):
        return np.asarray(integrand(x), dtype=np.float64)

    value, error, status, panels = kernels.adaptive_gk15_py(
        wrapped, (), band.f_lo, band.f_hi, tol, int(max_panels)
    )
    if status:
        _raise_unconverged(status, value, error, panels)
    return float(value), float(error)


def _power_antiderivative_diff(lo, hi, e):
    """``(hi**e - lo**e) / e`` for ``lo > 0``, accurate as ``e -> 0``."""
    return hi**e * -math.expm1(e * math.log(lo / hi)) / e


def band_power_infinite(params: DissipationParams, band) -> BandPower:
    """Closed-form integral of ``i0 / (alpha0 * f**y)`` over ``band``."""
    band = _as_band(band)
    y = params.y
    lo, hi = band.f_lo, band.f_hi
    if lo == 0.0 and y >= 1.0:
        return DIVERGENT
    e = 1.0 - y
    if lo == 0.0:
        integral = hi**e / e
    elif abs(e) < LOG_BRANCH_WIDTH:
        integral = math.log(hi / lo)
    else:
        integral = _power_antiderivative_diff(lo, hi, e)
    return Finite(params.amplitude * integral, 0.0)


def band_power_finite(model: FiniteSignalModel, band, tol: float = DEFAULT_TOL,
                      max_panels: int = MAX_PANELS) -> Finite:
    """Adaptive-quadrature integral of the finite-duration spectrum over ``band``."""
    band = _as_band(band)
    tol = _check_tol(tol)
    value, error, status, panels = kernels.band_psd_finite(
        model.i0, model.alpha0, model.y, model.duration,
        band.f_lo, band.f_hi, tol, int(max_panels),
    )
    if status:
        _raise_unconverged(status, float(value), float(error), int(panels))
    return Finite(float(value), float(error))


def classify_infrared(params: DissipationParams, duration=None) -> Classification:
    """Whether the power integrated down to ``f = 0`` is finite.

    ``duration`` of ``None`` or ``inf`` means an infinite signal, which
    diverges exactly when ``y >= 1``.  Any finite duration converges.
    """
    if duration is None or duration == math.inf:
        return Classification.DIVERGENT if params.y >= 1.0 else Classification.CONVERGENT
    duration = float(duration)
    if not (math.isfinite(duration) and duration > 0.0):
        raise ParameterError(f"duration must be > 0, got {duration!r}")
    return Classification.CONVERGENT
