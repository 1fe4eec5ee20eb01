"""Dissipation-based 1/f power spectra.

Closed-form spectra for signals of infinite and finite duration, band power
and infrared-catastrophe classification, envelope synthesis with
time-integrated spectrum estimation and parameter fitting, and turbulence
exponent bounds.
"""

from ._accel import HAS_NUMBA, USE_NUMBA
from .band import (
    DIVERGENT,
    Band,
    BandPower,
    Classification,
    Divergent,
    Finite,
    band_power_finite,
    band_power_infinite,
    classify_infrared,
    quadrature,
)
from .errors import ParameterError, QuadratureError
from .fit import CanonicalParams, FitResult, fit_spectrum, initial_guess
from .spectra import (
    DissipationParams,
    FiniteSignalModel,
    attenuation,
    augmented_r,
    instantaneous_power,
    low_freq_limit,
    one_minus_exp_ratio,
    psd_finite,
    psd_infinite,
)
from .synth import (
    EnvelopeGrid,
    SpectrumSamples,
    estimate_psd,
    loglog_slope,
    lognormal_factors,
    synthesize_grid,
    uniform_times,
)
from .turbulence import (
    TurbulenceExponent,
    beta_from_correction,
    correction_from_dimension,
    dimension_from_correction,
)

__version__ = "0.1.0"

__all__ = [
    "Band",
    "BandPower",
    "CanonicalParams",
    "Classification",
    "DIVERGENT",
    "DissipationParams",
    "Divergent",
    "EnvelopeGrid",
    "Finite",
    "FiniteSignalModel",
    "FitResult",
    "HAS_NUMBA",
    "ParameterError",
    "QuadratureError",
    "SpectrumSamples",
    "TurbulenceExponent",
    "USE_NUMBA",
    "attenuation",
    "augmented_r",
    "band_power_finite",
    "band_power_infinite",
    "beta_from_correction",
    "classify_infrared",
    "correction_from_dimension",
    "dimension_from_correction",
    "estimate_psd",
    "fit_spectrum",
    "initial_guess",
    "instantaneous_power",
    "loglog_slope",
    "lognormal_factors",
    "low_freq_limit",
    "one_minus_exp_ratio",
    "psd_finite",
    "psd_infinite",
    "quadrature",
    "synthesize_grid",
    "uniform_times",
]
