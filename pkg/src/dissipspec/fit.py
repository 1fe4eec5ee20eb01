"""Least-squares recovery of finite-duration spectrum parameters.

The finite-duration spectrum depends on ``(i0, alpha0, T)`` only through

    A = i0 / alpha0,   B = alpha0 * T,   P(f) = A * (1 - exp(-B * f**y)) / f**y

so the fit works in ``(log A, log B, y)`` and reports those alone.  Callers
that know ``T`` can recover ``alpha0 = B / T`` and ``i0 = A * B / T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .spectra import Y_MAX, Y_MIN, FiniteSignalModel
from .synth import SpectrumSamples

MAX_ITER = 200
GTOL = 1e-10

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class CanonicalParams:
    A: float
    B: float
    y: float

    def __post_init__(self):
        for name in ("A", "B"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {value!r}")
            object.__setattr__(self, name, value)
        y = float(self.y)
        if not Y_MIN <= y <= Y_MAX:
            raise ParameterError(f"y must lie in [0, 2], got {y!r}")
        object.__setattr__(self, "y", y)

    @classmethod
    def from_model(cls, model: FiniteSignalModel):
        return cls(model.i0 / model.alpha0, model.alpha0 * model.duration, model.y)

    @property
    def plateau(self):
        """Low-frequency limit ``A * B``, equal to ``i0 * T``."""
        return self.A * self.B

    def to_model(self, duration) -> FiniteSignalModel:
        """The ``(i0, alpha0, y)`` model with this shape for a known ``duration``."""
        alpha0 = self.B / duration
        return FiniteSignalModel.from_values(self.A * alpha0, alpha0, self.y, duration)

    def evaluate(self, f):
        theta = np.array([math.log(self.A), math.log(self.B), self.y])
        return np.exp(_log_model(theta, np.log(np.asarray(f, dtype=np.float64))))


@dataclass(frozen=True)
class FitResult:
    params: CanonicalParams
    residual: float
    iterations: int
    converged: bool
    gradient_norm: float


def _log_ratio(log_x):
    """``log((1 - exp(-x)) / x)`` from ``log x``."""
    x = np.exp(log_x)
    out = np.empty_like(x)
    small = x < 1e-5
    xs = x[small]
    out[small] = -xs * (0.5 - xs / 24.0)
    big = ~small
    out[big] = np.log(-np.expm1(-x[big])) - log_x[big]
    return out


def _x_over_expm1(x):
    """``x / (exp(x) - 1)``, equal to 1 at 0 and 0 at inf."""
    out = np.empty_like(x)
    small = x < 1e-5
    xs = x[small]
    out[small] = 1.0 - xs * (0.5 - xs / 12.0)
    big = ~small
    with np.errstate(over="ignore"):
        out[big] = x[big] / np.expm1(x[big])
    return out


def _log_model(theta, log_f):
    log_a, log_b, y = theta
    return log_a + log_b + _log_ratio(log_b + y * log_f)


def _jacobian(theta, log_f):
    _, log_b, y = theta
    with np.errstate(over="ignore"):
        x = np.exp(log_b + y * log_f)
    d_log_b = _x_over_expm1(x)
    jac = np.empty((log_f.size, 3))
    jac[:, 0] = 1.0
    jac[:, 1] = d_log_b
    jac[:, 2] = (d_log_b - 1.0) * log_f
    return jac


def _projected_gradient(grad, y):
    # gradient of 0.5*|r|^2 is -grad; at a bound only the inward part counts
    g = grad.copy()
    if y <= Y_MIN and g[2] < 0:
        g[2] = 0.0
    if y >= Y_MAX and g[2] > 0:
        g[2] = 0.0
    return g


def _gradient_norm(theta, resid, log_f):
    grad = _jacobian(theta, log_f).T @ resid
    return float(np.linalg.norm(_projected_gradient(grad, theta[2])))


def initial_guess(samples: SpectrumSamples) -> CanonicalParams:
    """Starting point from the spectrum's two asymptotes.

    The mean of the lowest-decade samples estimates the plateau ``A * B``;
    a straight-line fit over the highest decade gives ``y`` from its slope
    and ``A`` from its intercept.
    """
    f, p = samples.freqs, samples.powers
    lf, lp = np.log(f), np.log(p)
    plateau = p[f <= f[0] * 10.0].mean()
    top = f >= f[-1] / 10.0
    if top.sum() < 2:
        top = np.zeros(f.size, dtype=bool)
        top[-2:] = True
    slope, intercept = np.polyfit(lf[top], lp[top], 1)
    y = float(np.clip(-slope, Y_MIN, Y_MAX))
    if y != -slope:
        intercept = float(np.mean(lp[top] + y * lf[top]))
    a = math.exp(intercept)
    return CanonicalParams(a, plateau / a, y)


def fit_spectrum(samples: SpectrumSamples, init: CanonicalParams | None = None,
                 max_iter: int = MAX_ITER, gtol: float = GTOL) -> FitResult:
    """Levenberg-Marquardt fit of log-spectrum residuals.

    Minimises ``sum (log P_hat - log P_model)**2`` over ``(log A, log B, y)``
    with ``y`` clamped to [0, 2].  Running out of iterations gives
    ``converged=False`` rather than an exception.
    """
    if len(samples) < 3:
        raise ParameterError("fitting needs at least 3 samples")
    if not (samples.powers > 0).all():
        raise ParameterError("powers must be > 0")
    if init is None:
        init = initial_guess(samples)

    log_f = np.log(samples.freqs)
    target = np.log(samples.powers)
    theta = np.array([math.log(init.A), math.log(init.B), init.y])
    # rounding in the residuals (differences of O(|log P|) numbers)
    # bounds how finely the cost can be compared
    log_scale = np.abs(target).sum() + 1.0

    resid = target - _log_model(theta, log_f)
    cost = float(resid @ resid)
    damping = 1e-3
    converged = False
    iterations = 0
    gnorm = math.inf

    for iterations in range(1, max_iter + 1):
        jac = _jacobian(theta, log_f)
        grad = jac.T @ resid
        gnorm = float(np.linalg.norm(_projected_gradient(grad, theta[2])))
        if gnorm < gtol:
            converged = True
            break
        cost_noise = 16 * _EPS * np.abs(resid).max() * log_scale
        jtj = jac.T @ jac
        scale = np.maximum(np.diag(jtj), 1e-12)
        improved = False
        while damping < 1e16:
            step = np.linalg.solve(jtj + damping * np.diag(scale), grad)
            trial = theta + step
            trial[2] = min(max(trial[2], Y_MIN), Y_MAX)
            trial_resid = target - _log_model(trial, log_f)
            trial_cost = float(trial_resid @ trial_resid)
            # near the optimum the cost change falls below its own rounding,
            # so a tie that shrinks the gradient also counts as progress
            if trial_cost < cost or (
                trial_cost <= cost + cost_noise
                and _gradient_norm(trial, trial_resid, log_f) < gnorm
            ):
                theta, resid, cost = trial, trial_resid, trial_cost
                damping = max(damping / 10.0, 1e-12)
                improved = True
                break
            damping *= 10.0
        if not improved:
            # no step lowers the cost; stationary up to roundoff or stuck
            break

    if not converged:
        gnorm = _gradient_norm(theta, resid, log_f)
        converged = gnorm < gtol

    params = CanonicalParams(math.exp(theta[0]), math.exp(theta[1]), float(theta[2]))
    rms = math.sqrt(cost / target.size)
    return FitResult(params, rms, iterations, converged, gnorm)
