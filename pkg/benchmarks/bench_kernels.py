"""Time the numba kernels against the pure-numpy fallback.

Run: python3 benchmarks/bench_kernels.py [--runs N]

Both paths are imported side by side, so the environment flag does not
matter here.  Each case checks that the two paths agree before timing.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from dissipspec import kernels
from dissipspec._accel import HAS_NUMBA


def _best_of(func, args, n_warmup, n_runs):
    for _ in range(n_warmup):
        func(*args)
    best = float("inf")
    for _ in range(n_runs):
        t0 = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _cases():
    freqs = np.geomspace(1e-3, 1e2, 200_000)
    yield "psd_finite (2e5 freqs)", "psd_finite", (1.3, 0.7, 1.2, 5.0, freqs)

    env_f = np.geomspace(1e-3, 1e1, 40)
    env_t = np.linspace(0.0, 5.0, 2**15 + 1)
    yield "envelope (40 x 32769)", "envelope", (1.3, 0.7, 1.2, env_f, env_t)

    power = kernels.NUMPY.envelope(1.3, 0.7, 1.2, env_f, env_t)
    yield "trapezoid_rows (40 x 32769)", "trapezoid_rows", (power, env_t)

    yield ("band_psd_finite (y=0.5, T=1e3)", "band_psd_finite",
           (1.0, 1.0, 0.5, 1e3, 0.0, 10.0, 1e-12, 10**6))


def _check(name, a, b):
    a = np.asarray(a[0] if isinstance(a, tuple) else a)
    b = np.asarray(b[0] if isinstance(b, tuple) else b)
    if not np.allclose(a, b, rtol=1e-12, atol=0):
        raise SystemExit(f"{name}: paths disagree")


def run_benchmark(n_warmup: int = 2, n_runs: int = 7) -> None:
    if not HAS_NUMBA:
        print("numba not installed; nothing to compare")
        return
    print(f"warmup {n_warmup}, best of {n_runs}")
    print(f"{'kernel':34s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for label, attr, args in _cases():
        fast = getattr(kernels.NUMBA, attr)
        slow = getattr(kernels.NUMPY, attr)
        _check(label, fast(*args), slow(*args))
        t_nb = _best_of(fast, args, n_warmup, n_runs)
        t_np = _best_of(slow, args, n_warmup, n_runs)
        print(f"{label:34s} {t_nb * 1e3:10.3f} {t_np * 1e3:10.3f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--warmup", type=int, default=2)
    parser.add_argument("--runs", type=int, default=7)
    ns = parser.parse_args()
    run_benchmark(ns.warmup, ns.runs)
