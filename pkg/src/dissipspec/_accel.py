"""Numba availability and the switch between compiled and pure-numpy kernels.

Set ``DISSIPSPEC_DISABLE_NUMBA=1`` before import to force the numpy path.
"""

import os

ENV_FLAG = "DISSIPSPEC_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAS_NUMBA = numba is not None


def _env_disabled():
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAS_NUMBA and not _env_disabled()


def njit(func):
    """Compile ``func`` in nopython mode when numba is importable.

    Without numba the plain function is returned, so the compiled variants
    remain callable (slowly) and tests can still compare both paths.
    """
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
