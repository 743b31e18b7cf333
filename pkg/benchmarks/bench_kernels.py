#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each kernel on realistic workloads (window encoding over long class
series, row-wise and cross pattern distances), checks that both paths
return identical arrays, and prints the timings with speedups.

Usage:
    python3 benchmarks/bench_kernels.py
    ORDPAT_NO_NUMBA=1 python3 benchmarks/bench_kernels.py   # fallback only
"""

import time

import numpy as np

from ordpat import _kernels


def bench(func, *args, repeat=5, warmup=True):
    if warmup:
        func(*args)
    start = time.perf_counter()
    for _ in range(repeat):
        result = func(*args)
    return (time.perf_counter() - start) / repeat, result


def main():
    rng = np.random.default_rng(0)
    series = rng.integers(0, 5, size=200_000)
    print(f"active backend: {_kernels.backend()}")
    print(f"{'kernel':<28} {'numpy':>10} {'numba':>10} {'speedup':>8}")

    workloads = []
    for n in (4, 8):
        workloads.append((f"encode_windows n={n}", "encode_windows", (series, n, 1)))
    codes6a = _kernels.encode_windows_numpy(rng.integers(0, 4, size=100_000), 6, 1)
    codes6b = _kernels.encode_windows_numpy(rng.integers(0, 4, size=100_000), 6, 1)
    workloads.append(("df_rows n=6", "df_rows", (codes6a, codes6b)))
    workloads.append(("l1_rows n=6", "l1_rows", (codes6a, codes6b)))
    cross_a, cross_b = codes6a[:1500], codes6b[:1500]
    workloads.append(("df_cross 1500x1500 n=6", "df_cross", (cross_a, cross_b)))

    for label, name, args in workloads:
        np_time, np_result = bench(getattr(_kernels, f"{name}_numpy"), *args)
        numba_fn = getattr(_kernels, f"{name}_numba", None)
        if numba_fn is None:
            print(f"{label:<28} {np_time * 1e3:9.1f}ms {'-':>10} {'-':>8}")
            continue
        nb_time, nb_result = bench(numba_fn, *args)
        assert np.array_equal(np_result, nb_result), f"{label}: backends disagree"
        print(
            f"{label:<28} {np_time * 1e3:9.1f}ms {nb_time * 1e3:9.1f}ms "
            f"{np_time / nb_time:7.1f}x"
        )


if __name__ == "__main__":
    main()
