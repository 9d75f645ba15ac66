"""Optional numba acceleration.

Kernels are written twice: a scalar-loop version that numba compiles and a
vectorized numpy version.  ``WEBFLAT_DISABLE_NUMBA=1`` (or numba missing)
selects the numpy path everywhere.
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("WEBFLAT_DISABLE_NUMBA", "").strip().lower()
    return HAVE_NUMBA and flag in ("", "0", "false", "no")


def njit(func):
    """Compile with numba when available; the plain function stays reachable as ``.py_func``."""
    if HAVE_NUMBA:
        return numba.njit(cache=True, fastmath=False)(func)
    func.py_func = func
    return func


def pick(jit_impl, numpy_impl):
    """Return the kernel for the current backend setting."""
    return jit_impl if numba_enabled() else numpy_impl


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"
