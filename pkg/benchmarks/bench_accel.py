#!/usr/bin/env python3
"""Benchmark the numba lane against the pure-numpy lane of tsineq.accel.

Times the three hot kernels on representative shapes and, when numba is
importable, an end-to-end dense bound evaluation under each lane.  Run::

    python benchmarks/bench_accel.py

Force the package itself onto the numpy lane with TSINEQ_NO_NUMBA=1; the
comparison below calls both implementations directly and needs no env.
"""

import time

import numpy as np

from tsineq import accel


def _time(fn, *args, repeat=200):
    fn(*args)  # warm (JIT compile on first call)
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def main():
    rng = np.random.default_rng(0)
    cases = [
        (
            "panel_reduce (4096x15)",
            "panel_reduce",
            (rng.random((4096, 15)), rng.random(15), rng.random(4096)),
        ),
        (
            "piecewise_kernel (1e6)",
            "piecewise_kernel",
            (
                np.sort(rng.random(1_000_000)),
                rng.random(1_000_000),
                0.5,
                0.2,
                0.8,
            ),
        ),
        (
            "double_moment_discrete (5000)",
            "double_moment_discrete",
            (
                np.sort(rng.random(5000)),
                rng.random(5000),
                np.sort(rng.random(5000)),
                rng.random(5000),
                0.3,
                0.7,
            ),
        ),
    ]
    lanes = sorted(accel.IMPLS)
    print(f"active lane: {accel.LANE} (numba available: {accel.HAVE_NUMBA})")
    header = f"{'kernel':36s}" + "".join(f"{lane:>14s}" for lane in lanes) + f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for name, key, args in cases:
        times = {}
        for lane in lanes:
            times[lane] = _time(accel.IMPLS[lane][key], *args)
        row = f"{name:36s}" + "".join(f"{times[lane] * 1e6:11.1f} us" for lane in lanes)
        if "numba" in times:
            row += f"{times['numpy'] / times['numba']:9.2f}x"
        print(row)

    # sanity: the lanes agree
    for name, key, args in cases:
        ref = np.asarray(accel.IMPLS["numpy"][key](*args), dtype=float)
        for lane in lanes:
            got = np.asarray(accel.IMPLS[lane][key](*args), dtype=float)
            assert np.allclose(ref, got, rtol=1e-12, atol=1e-12), (name, lane)
    print("lane agreement: OK")

    print()
    print("end-to-end dense bound evaluation (current lane):")
    from fractions import Fraction

    from tsineq import (
        KernelSpec,
        Scenario,
        TimeScale,
        eval_weighted_ostrowski,
        poly_function,
        psi_identity,
        unit_weight,
    )

    ts = TimeScale.reals(0, 1)
    spec = KernelSpec(weight=unit_weight(), psi=psi_identity(), lam=Fraction(1, 2), a=0, b=1, ts=ts)
    scn = Scenario(ts=ts, a=0, b=1, f=poly_function([0, 0, 1]), spec=spec, x=Fraction(1, 3))
    t = _time(lambda: eval_weighted_ostrowski(scn), repeat=20)
    print(f"  eval_weighted_ostrowski on R[0,1]: {t * 1e3:.2f} ms")


if __name__ == "__main__":
    main()
