"""Benchmark the numba kernels against the pure-numpy fallbacks.

Usage: python benchmarks/bench_kernels.py [--points 200000] [--repeats 5]

The first numba call includes JIT compilation; a warmup pass is timed
separately so the steady-state comparison is fair.
"""

import argparse
import time

import numpy as np

from bubble_correction import kernels
from bubble_correction.polynomials import Polynomial


def timeit(func, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if kernels.BACKEND != "numba":
        print(
            "numba backend inactive (BUBBLE_CORRECTION_NO_NUMBA set or numba "
            "missing); nothing to compare"
        )
        return

    rng = np.random.default_rng(0)
    n = 6
    m = args.points
    points = rng.standard_normal((m, n))

    poly = Polynomial(
        n,
        {
            (2, 1, 0, 0, 0, 1): 3,
            (0, 4, 0, 0, 0, 0): -1,
            (1, 1, 1, 1, 0, 0): 2,
            (0, 0, 0, 0, 6, 0): 1,
        },
    )
    exps, coeffs = kernels.poly_arrays(poly)
    center = np.zeros(n)
    sources = rng.standard_normal((8, n)) * 4.0
    weights = np.abs(rng.standard_normal(8)) + 0.5

    cases = [
        (
            "eval_poly",
            lambda: kernels.eval_poly_numba(points, exps, coeffs),
            lambda: kernels.eval_poly_numpy(points, exps, coeffs),
        ),
        (
            "bubble_values",
            lambda: kernels.bubble_values_numba(points, 0.5, center, (n - 2) / 2.0),
            lambda: kernels.bubble_values_numpy(points, 0.5, center, (n - 2) / 2.0),
        ),
        (
            "tail_values",
            lambda: kernels.tail_values_numba(points, sources, weights, float(n - 2)),
            lambda: kernels.tail_values_numpy(points, sources, weights, n - 2),
        ),
    ]

    print(f"{m} points, dimension {n}, best of {args.repeats}")
    print(f"{'kernel':<16}{'warmup (s)':>12}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name, jit_call, numpy_call in cases:
        warmup = timeit(jit_call, repeats=1)
        jit = timeit(jit_call, repeats=args.repeats)
        plain = timeit(numpy_call, repeats=args.repeats)
        a, b = jit_call(), numpy_call()
        assert np.allclose(a, b, rtol=1e-10, atol=1e-12), name
        print(
            f"{name:<16}{warmup:>12.4f}{jit:>12.4f}{plain:>12.4f}"
            f"{plain / jit:>9.1f}x"
        )


if __name__ == "__main__":
    main()
