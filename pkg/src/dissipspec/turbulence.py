"""Spectral exponent bounds for intermittent turbulence.

The exponent is Kolmogorov's 5/3 plus an intermittency correction ``c >= 0``.
It is admissible when ``0 <= beta <= 2``, i.e. ``c <= 1/3``.  The fractal
dimension ``d`` of the turbulence support gives ``c = (3 - d) / 3`` for
``2 < d <= 3``, which always lands inside the admissible window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

KOLMOGOROV = 5.0 / 3.0
MAX_CORRECTION = 1.0 / 3.0


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    return value


def is_admissible(c):
    return 0.0 <= c <= MAX_CORRECTION


def beta_from_correction(c) -> tuple[float, bool]:
    """Return ``(5/3 + c, admissible)``."""
    c = _finite("c", c)
    if c < 0:
        raise ParameterError(f"correction must be >= 0, got {c!r}")
    return KOLMOGOROV + c, is_admissible(c)


def correction_from_dimension(d) -> float:
    d = _finite("dimension", d)
    if not 2.0 < d <= 3.0:
        raise ParameterError(f"dimension must lie in (2, 3], got {d!r}")
    return (3.0 - d) / 3.0


def dimension_from_correction(c) -> float:
    c = _finite("c", c)
    if not 0.0 <= c < MAX_CORRECTION:
        raise ParameterError(f"correction must lie in [0, 1/3), got {c!r}")
    return 3.0 - 3.0 * c


@dataclass(frozen=True)
class TurbulenceExponent:
    beta: float
    c: float
    d: float | None = None

    @property
    def admissible(self):
        # decided on c: 5/3 + 1/3 rounds, c does not
        return is_admissible(self.c)

    @classmethod
    def from_correction(cls, c):
        beta, _ = beta_from_correction(c)
        c = float(c)
        d = dimension_from_correction(c) if c < MAX_CORRECTION else None
        return cls(beta, c, d)

    @classmethod
    def from_dimension(cls, d):
        c = correction_from_dimension(d)
        beta, _ = beta_from_correction(c)
        return cls(beta, c, float(d))
