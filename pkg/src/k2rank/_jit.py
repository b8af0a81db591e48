"""Optional numba acceleration.

Set ``K2RANK_NO_JIT=1`` to run every kernel as plain Python over numpy
arrays.  The same source is used for both paths, so results must agree
bit for bit; ``benchmarks/bench_kernels.py`` times them side by side.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("K2RANK_NO_JIT", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _numba_njit

    HAS_NUMBA = True
except ImportError:
    _numba_njit = None
    HAS_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available and enabled, identity otherwise."""
    if HAS_NUMBA:
        kwargs.setdefault("cache", True)
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(fn):
        return fn

    return wrap


def backend() -> str:
    return "numba" if HAS_NUMBA else "python"
