"""Numba switch.

Set ``QUFTI_DISABLE_NUMBA=1`` to run every kernel through its pure-numpy
path. The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("QUFTI_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(func):
    """Compile ``func`` with numba when available, else return it untouched."""
    if numba is None:  # pragma: no cover
        return func
    return numba.njit(cache=True, nogil=True)(func)
