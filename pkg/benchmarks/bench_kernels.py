"""Benchmark the JIT-compiled distance kernels against the numpy fallbacks.

The clustering loop runs one nearest-centroid scan per ingested realization
and a full pairwise centroid scan whenever a fusion candidate is evaluated,
so these two kernels dominate long monitoring runs.  Both backends live in
shellmon._kernels: the active one (numba unless SHELLMON_NO_NUMBA is set)
and the ``*_numpy`` fallbacks, which stay importable either way, so a single
process can time them side by side.

Run:  python3 benchmarks/bench_kernels.py [--repeats 200]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from shellmon._kernels import (
    min_weighted_pair,
    min_weighted_pair_numpy,
    nearest_weighted,
    nearest_weighted_numpy,
    numba_enabled,
)


def best_of(fn, repeats: int, number: int) -> float:
    """Best per-call seconds over `repeats` timing runs of `number` calls."""
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(number):
            fn()
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def bench_case(name, active_fn, numpy_fn, repeats: int, number: int) -> None:
    active_fn()  # trigger JIT compilation outside the timed region
    t_active = best_of(active_fn, repeats, number)
    t_numpy = best_of(numpy_fn, repeats, number)
    label = "numba" if numba_enabled() else "numpy(active)"
    print(
        f"{name:<38} {label}: {t_active * 1e6:8.2f} us   "
        f"numpy: {t_numpy * 1e6:8.2f} us   ratio: {t_numpy / t_active:6.2f}x"
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--repeats", type=int, default=200, help="timing runs per case (default 200)"
    )
    args = parser.parse_args(argv)

    rng = np.random.default_rng(0)
    backend = "numba JIT" if numba_enabled() else "pure numpy (numba disabled)"
    print(f"active backend: {backend}\n")

    # nearest-centroid scan: one call per ingested realization
    for kmax, n_dims in ((50, 22), (200, 24), (500, 64)):
        points = rng.normal(size=(kmax, n_dims))
        x = rng.normal(size=n_dims)
        w = rng.uniform(0.5, 2.0, size=n_dims)
        bench_case(
            f"nearest_weighted   k={kmax:<4} n={n_dims:<3}",
            lambda: nearest_weighted(points, x, w),
            lambda: nearest_weighted_numpy(points, x, w),
            args.repeats,
            number=10,
        )

    # pairwise centroid scan: one call per fusion-candidate evaluation
    for kmax, n_dims in ((50, 22), (200, 24)):
        points = rng.normal(size=(kmax, n_dims))
        w = rng.uniform(0.5, 2.0, size=n_dims)
        bench_case(
            f"min_weighted_pair  k={kmax:<4} n={n_dims:<3}",
            lambda: min_weighted_pair(points, w),
            lambda: min_weighted_pair_numpy(points, w),
            args.repeats,
            number=2,
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
