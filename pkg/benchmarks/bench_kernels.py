#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

The workload is the one that dominates real runs: infidelity of a pb1
sequence over a dense g grid, as used by the threshold scans.

    python3 benchmarks/bench_kernels.py [--samples N] [--repeats R]

Run with CPSEQ_NO_NUMBA=1 to check what the fallback costs end to end.
"""

import argparse
import math
import time

import numpy as np

from cpseq import _kernels
from cpseq.rotor_core import quat_from_pulse
from cpseq.sequences import build_pb1


def best_time(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=2_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    seq = build_pb1(math.pi / 2)
    angles, phases = seq.angles, seq.phases
    gs = np.linspace(-1.5, 0.5, args.samples)
    ref = quat_from_pulse(math.pi / 2, 0.0).as_array()

    print(f"active backend: {_kernels.BACKEND}")
    print(f"grid: {args.samples} points x {len(angles)} pulses, best of {args.repeats}")

    t_numpy = best_time(
        lambda: _kernels._infidelity_grid_numpy(angles, phases, gs, ref), args.repeats
    )
    print(f"numpy fallback : {t_numpy * 1e3:9.2f} ms")

    if _kernels.BACKEND == "numba":
        _kernels._infidelity_grid_numba(angles, phases, gs[:16], ref)  # JIT warm-up
        t_numba = best_time(
            lambda: _kernels._infidelity_grid_numba(angles, phases, gs, ref), args.repeats
        )
        print(f"numba kernels  : {t_numba * 1e3:9.2f} ms")
        print(f"speedup        : {t_numpy / t_numba:9.2f}x")
        diff = np.max(
            np.abs(
                _kernels._infidelity_grid_numba(angles, phases, gs, ref)
                - _kernels._infidelity_grid_numpy(angles, phases, gs, ref)
            )
        )
        print(f"max |numba - numpy|: {diff:.3e}")
    else:
        print("numba backend inactive (CPSEQ_NO_NUMBA set or numba missing)")


if __name__ == "__main__":
    main()
