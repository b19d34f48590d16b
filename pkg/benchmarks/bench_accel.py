"""Timing comparison of the compiled kernels against their numpy twins.

Run as a script:

    python3 benchmarks/bench_accel.py

The orbit-scan rows time one full-period sweep per modulus 2**n - 1.
The backward-step rows time repeated applications on state sets sized
like the largest staged family automaton.  The final rows time a whole
specification-number stabilization sweep in a fresh interpreter per
flavor, so they include import and, for numba, any compile time not
already cached.
"""

import os
import subprocess
import sys
import time

import numpy as np

from lexshift import _accel

SWEEP = (
    "from lexshift.lexworld import LexPair; "
    "from lexshift.specprop import spec_number; "
    "from lexshift.words import pow_word, seq, shift; "
    "om = '01110010010' + '10001101101' * 2 + '101'; "
    "nu = '10001101101' + '01110010010' * 2 + '010'; "
    "p = LexPair(shift(pow_word(om), 1), shift(pow_word(nu), 1)); "
    "assert spec_number(p, window=12, nmax=40) == 24"
)


def clock(fn, *args, repeat: int = 1) -> float:
    return min(_timed(fn, args, repeat) for _ in range(3))


def _timed(fn, args, repeat: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def row(label: str, numba_s: float | None, numpy_s: float) -> None:
    if numba_s is None:
        print(f"{label:<34}{'-':>12}{numpy_s:>12.3g}{'-':>9}")
    else:
        print(f"{label:<34}{numba_s:>12.3g}{numpy_s:>12.3g}{numpy_s / numba_s:>8.1f}x")


def bench_orbit_scan() -> None:
    hole = (1, 3, 2, 3)
    if _accel._numba_full_period_scan is not None:
        _accel._numba_full_period_scan(*hole, 8)
    for n in (16, 18, 20, 22):
        numba_s = None
        if _accel._numba_full_period_scan is not None:
            numba_s = clock(_accel._numba_full_period_scan, *hole, n)
        numpy_s = clock(_accel._numpy_full_period_scan, *hole, n)
        row(f"orbit scan, n={n}", numba_s, numpy_s)


def bench_reverse_step() -> None:
    rng = np.random.default_rng(7)
    states, rows, repeat = 71, 70, 2000
    masks = rng.random((rows, states)) < 0.4
    d0 = rng.integers(-1, states, size=states, dtype=np.int64)
    d1 = rng.integers(-1, states, size=states, dtype=np.int64)
    numba_s = None
    if _accel._numba_reverse_step is not None:
        _accel._numba_reverse_step(masks, d0, d1)
        numba_s = clock(_accel._numba_reverse_step, masks, d0, d1, repeat=repeat)
    numpy_s = clock(_accel._numpy_reverse_step, masks, d0, d1, repeat=repeat)
    row(f"backward step, {rows}x{states}", numba_s, numpy_s)


def bench_sweep() -> None:
    times = {}
    for flavor, flag in (("numba", "0"), ("numpy", "1")):
        if flavor == "numba" and _accel._numba_reverse_step is None:
            times[flavor] = None
            continue
        env = dict(os.environ, LEXSHIFT_DISABLE_NUMBA=flag)
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-c", SWEEP], env=env, check=True)
        times[flavor] = time.perf_counter() - t0
    row("stabilization sweep (subprocess)", times["numba"], times["numpy"])


def main() -> None:
    print(f"installed backend: {_accel.BACKEND}")
    print(f"{'kernel':<34}{'numba s':>12}{'numpy s':>12}{'speedup':>9}")
    bench_orbit_scan()
    bench_reverse_step()
    bench_sweep()


if __name__ == "__main__":
    main()
