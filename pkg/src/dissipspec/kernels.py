"""Hot numeric kernels.

Each kernel exists twice: a loop version compiled with numba and a
vectorised numpy version.  ``NUMBA`` and ``NUMPY`` expose both sets so tests
and the benchmark can compare them; the module-level names bound at the
bottom of this file are the active set chosen by :data:`USE_NUMBA`.

All kernels take and return float64 arrays; validation happens in the
callers.
"""

import heapq
import math
from types import SimpleNamespace

import numpy as np

from ._accel import HAS_NUMBA, USE_NUMBA, njit

# below this the series of (1 - exp(-x))/x is used instead of expm1
SERIES_THRESHOLD = 1e-5

_EPS = np.finfo(np.float64).eps

# 15-point Kronrod rule with its embedded 7-point Gauss rule on [-1, 1].
# Gauss weights are zero at the Kronrod-only nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

GK_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
GK_KRONROD_WEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
_wg_half = np.zeros(8)
_wg_half[1::2] = _WG
GK_GAUSS_WEIGHTS = np.concatenate((_wg_half[:-1], _wg_half[::-1]))
del _wg_half


# ---------------------------------------------------------------------------
# numba variants


@njit
def _ratio_scalar(x):
    # (1 - exp(-x)) / x with relative accuracy for all x >= 0
    if x < SERIES_THRESHOLD:
        return 1.0 - x * (0.5 - x * (1.0 / 6.0 - x / 24.0))
    return -math.expm1(-x) / x


@njit
def _one_minus_exp_ratio_nb(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out[i] = _ratio_scalar(x[i])
    return out


@njit
def _psd_finite_nb(i0, alpha0, y, duration, f):
    out = np.empty_like(f)
    plateau = i0 * duration
    for i in range(f.size):
        out[i] = plateau * _ratio_scalar(alpha0 * f[i] ** y * duration)
    return out


@njit
def _envelope_nb(i0, alpha0, y, freqs, times):
    out = np.empty((freqs.size, times.size))
    for i in range(freqs.size):
        rate = alpha0 * freqs[i] ** y
        for k in range(times.size):
            out[i, k] = i0 * math.exp(-rate * times[k])
    return out


@njit
def _trapezoid_rows_nb(power, times):
    n_rows, n_t = power.shape
    out = np.zeros(n_rows)
    for i in range(n_rows):
        acc = 0.0
        for k in range(n_t - 1):
            acc += (times[k + 1] - times[k]) * (power[i, k] + power[i, k + 1])
        out[i] = 0.5 * acc
    return out


@njit
def _psd_integrand_nb(x, args):
    i0, alpha0, y, duration = args
    return _psd_finite_nb(i0, alpha0, y, duration, x)


# ---------------------------------------------------------------------------
# numpy variants


def _one_minus_exp_ratio_np(x):
    small = x < SERIES_THRESHOLD
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.expm1(-x) / x
    xs = x[small]
    out[small] = 1.0 - xs * (0.5 - xs * (1.0 / 6.0 - xs / 24.0))
    return out


def _psd_finite_np(i0, alpha0, y, duration, f):
    with np.errstate(over="ignore", under="ignore"):
        x = alpha0 * np.power(f, y) * duration
    return i0 * duration * _one_minus_exp_ratio_np(x)


def _envelope_np(i0, alpha0, y, freqs, times):
    rate = alpha0 * np.power(freqs, y)
    with np.errstate(under="ignore"):
        return i0 * np.exp(-np.multiply.outer(rate, times))


def _trapezoid_rows_np(power, times):
    return np.trapezoid(power, times, axis=1)


def _psd_integrand_np(x, args):
    i0, alpha0, y, duration = args
    return _psd_finite_np(i0, alpha0, y, duration, x)


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod, one source for both paths


def _gk15_panel(func, args, lo, hi):
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fx = func(centre + half * GK_NODES, args)
    kronrod = half * np.sum(GK_KRONROD_WEIGHTS * fx)
    gauss = half * np.sum(GK_GAUSS_WEIGHTS * fx)
    floor = 50.0 * _EPS * half * np.sum(GK_KRONROD_WEIGHTS * np.abs(fx))
    diff = abs(kronrod - gauss)
    if diff <= floor:
        return kronrod, floor, True
    return kronrod, diff, False


def _make_adaptive(panel):
    def adaptive_gk15(func, args, lo, hi, tol, max_panels):
        """Globally adaptive bisection driven by the largest panel error.

        Returns ``(value, error, status, panels)`` where status is 0 when the
        summed error met ``tol * |value|``, 1 when the panel budget ran out and
        2 when the worst panel could not be refined further.  The sequence of
        bisections does not depend on ``tol``.
        """
        val, err, at_floor = panel(func, args, lo, hi)
        heap = [(-err, 0, lo, hi, val, err, at_floor)]
        total_v = val
        total_e = err
        counter = 1
        status = 0
        while total_e > tol * abs(total_v):
            if len(heap) >= max_panels:
                status = 1
                break
            item = heapq.heappop(heap)
            p_lo = item[2]
            p_hi = item[3]
            mid = 0.5 * (p_lo + p_hi)
            if item[6] or not (p_lo < mid < p_hi):
                heapq.heappush(heap, item)
                status = 2
                break
            lv, le, lf = panel(func, args, p_lo, mid)
            rv, re, rf = panel(func, args, mid, p_hi)
            heapq.heappush(heap, (-le, counter, p_lo, mid, lv, le, lf))
            heapq.heappush(heap, (-re, counter + 1, mid, p_hi, rv, re, rf))
            counter += 2
            total_v += lv + rv - item[4]
            total_e += le + re - item[5]
        value = 0.0
        error = 0.0
        for entry in heap:
            value += entry[4]
            error += entry[5]
        return value, error, status, len(heap)

    return adaptive_gk15


adaptive_gk15_py = _make_adaptive(_gk15_panel)
_adaptive_gk15_nb = njit(_make_adaptive(njit(_gk15_panel)))


def _band_psd_finite_nb(i0, alpha0, y, duration, lo, hi, tol, max_panels):
    return _adaptive_gk15_nb(
        _psd_integrand_nb, (i0, alpha0, y, duration), lo, hi, tol, max_panels
    )


def _band_psd_finite_np(i0, alpha0, y, duration, lo, hi, tol, max_panels):
    return adaptive_gk15_py(
        _psd_integrand_np, (i0, alpha0, y, duration), lo, hi, tol, max_panels
    )


NUMBA = SimpleNamespace(
    name="numba",
    one_minus_exp_ratio=_one_minus_exp_ratio_nb,
    psd_finite=_psd_finite_nb,
    envelope=_envelope_nb,
    trapezoid_rows=_trapezoid_rows_nb,
    band_psd_finite=_band_psd_finite_nb,
)

NUMPY = SimpleNamespace(
    name="numpy",
    one_minus_exp_ratio=_one_minus_exp_ratio_np,
    psd_finite=_psd_finite_np,
    envelope=_envelope_np,
    trapezoid_rows=_trapezoid_rows_np,
    band_psd_finite=_band_psd_finite_np,
)

ACTIVE = NUMBA if USE_NUMBA else NUMPY

one_minus_exp_ratio = ACTIVE.one_minus_exp_ratio
psd_finite = ACTIVE.psd_finite
envelope = ACTIVE.envelope
trapezoid_rows = ACTIVE.trapezoid_rows
band_psd_finite = ACTIVE.band_psd_finite

__all__ = [
    "ACTIVE",
    "HAS_NUMBA",
    "NUMBA",
    "NUMPY",
    "USE_NUMBA",
    "adaptive_gk15_py",
    "band_psd_finite",
    "envelope",
    "one_minus_exp_ratio",
    "psd_finite",
    "trapezoid_rows",
]
