"""Numba compilation toggle.

Hot kernels are written as plain functions and compiled with @njit unless
numba is unavailable or BOARDGEN_NO_NUMBA is set, in which case the same
functions run as pure Python/numpy.  `benchmarks/bench_kernels.py` compares
the two paths.
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("BOARDGEN_NO_NUMBA", "") not in ("1", "true", "yes")


def njit_maybe(**kwargs):
    def wrap(fn):
        if USE_NUMBA:
            return numba.njit(**kwargs)(fn)
        return fn

    return wrap
