"""Compiled kernels for the two scan-heavy inner loops.

Each kernel exists in two interchangeable flavors: a loop body compiled
with numba when it is installed, and a vectorized numpy form.  Setting
the environment variable LEXSHIFT_DISABLE_NUMBA to anything other than
"" or "0" forces the numpy flavor; so does a missing numba.  The
module-level names bind the selected flavor at import time and BACKEND
records the choice.  Results are identical either way, only speed
differs.

Both flavors work in machine integers, so callers must keep every
intermediate product below 2**63: `fits_int64` is the guard for the
orbit scan, and the caller falls back to exact big-integer code when it
fails.
"""

import os

import numpy as np

try:
    from numba import njit
except ImportError:
    njit = None

__all__ = ["BACKEND", "fits_int64", "full_period_scan", "reverse_step"]


def fits_int64(num_a: int, den_a: int, num_b: int, den_b: int, n: int) -> bool:
    """True when the orbit scan at period n stays inside int64 arithmetic."""
    modulus = (1 << n) - 1
    return modulus * max(num_a, den_a, num_b, den_b, 2) < 2**62


def _full_period_scan_loop(num_a, den_a, num_b, den_b, n):
    """True iff every orbit of full period n meets the open hole.

    Doubling permutes the residues mod 2**n - 1, so each residue is
    visited once and the whole scan is linear in the modulus.
    """
    modulus = (1 << n) - 1
    lo = num_a * modulus
    hi = num_b * modulus
    seen = np.zeros(modulus, dtype=np.uint8)
    cycle = np.zeros(n, dtype=np.int64)
    for k in range(1, modulus):
        if seen[k]:
            continue
        length = 0
        j = k
        while seen[j] == 0:
            seen[j] = 1
            if length < n:
                cycle[length] = j
            length += 1
            j = j * 2 % modulus
        if length != n:
            continue
        meets = False
        for t in range(n):
            p = cycle[t]
            if lo < p * den_a and p * den_b < hi:
                meets = True
                break
        if not meets:
            return False
    return True


def _numpy_full_period_scan(num_a, den_a, num_b, den_b, n):
    modulus = (1 << n) - 1
    lo = num_a * modulus
    hi = num_b * modulus
    start = np.arange(1, modulus, dtype=np.int64)
    orbit = start.copy()
    full = np.ones(start.shape, dtype=np.bool_)
    inside = (orbit * den_a > lo) & (orbit * den_b < hi)
    for _ in range(n - 1):
        orbit = orbit * 2 % modulus
        full &= orbit != start
        inside |= (orbit * den_a > lo) & (orbit * den_b < hi)
    return not bool(np.any(full & ~inside))


def _reverse_step_loop(masks, d0, d1):
    """One backward step of every state-set row along both symbol maps.

    d0[i] and d1[i] are the successor indices of state i, -1 when the
    symbol is forbidden there.
    """
    rows, states = masks.shape
    out = np.zeros((rows, states), dtype=np.bool_)
    for r in range(rows):
        for i in range(states):
            t = d0[i]
            if t >= 0 and masks[r, t]:
                out[r, i] = True
                continue
            t = d1[i]
            if t >= 0 and masks[r, t]:
                out[r, i] = True
    return out


def _numpy_reverse_step(masks, d0, d1):
    out = np.zeros(masks.shape, dtype=np.bool_)
    for det in (d0, d1):
        live = det >= 0
        out |= live & masks[:, np.where(live, det, 0)]
    return out


def _numba_requested() -> bool:
    return os.environ.get("LEXSHIFT_DISABLE_NUMBA", "0").strip().lower() in ("", "0")


if njit is not None:
    _numba_full_period_scan = njit(cache=True, nogil=True)(_full_period_scan_loop)
    _numba_reverse_step = njit(cache=True, nogil=True)(_reverse_step_loop)
else:
    _numba_full_period_scan = None
    _numba_reverse_step = None

if _numba_requested() and njit is not None:
    BACKEND = "numba"
    full_period_scan = _numba_full_period_scan
    reverse_step = _numba_reverse_step
else:
    BACKEND = "numpy"
    full_period_scan = _numpy_full_period_scan
    reverse_step = _numpy_reverse_step
