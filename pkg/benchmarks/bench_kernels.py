#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--size 1024] [--repeats 5]
"""

import argparse
import time

import numpy as np

from printproof import kernels
from printproof.kernels import _fallback

try:
    from printproof.kernels import _core
except ImportError:
    _core = None


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_backend(impl, name, plane, radius, repeats):
    h, w = plane.shape
    padded1 = np.pad(plane, 1, mode="edge")
    gx = np.empty_like(plane)
    gy = np.empty_like(plane)
    t_sobel = _time(lambda: impl.sobel_band(padded1, gx, gy, 0, h), repeats)

    padded_r = np.pad(plane, radius, mode="edge")
    out = np.empty_like(plane)
    t_median = _time(lambda: impl.median_band(padded_r, out, radius, 0, h), repeats)
    print(f"{name:>10s}   sobel {t_sobel * 1e3:8.2f} ms   "
          f"median(r={radius}) {t_median * 1e3:8.2f} ms")
    return t_sobel, t_median


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=1024)
    ap.add_argument("--radius", type=int, default=1)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    plane = rng.random((args.size, args.size))
    print(f"plane {args.size}x{args.size}, best of {args.repeats}, "
          f"active backend: {kernels.backend_name()}")

    ts_np = bench_backend(_fallback, "numpy", plane, args.radius, args.repeats)
    if _core is not None:
        ts_c = bench_backend(_core, "compiled", plane, args.radius, args.repeats)
        print(f"{'speedup':>10s}   sobel {ts_np[0] / ts_c[0]:7.2f}x    "
              f"median       {ts_np[1] / ts_c[1]:7.2f}x")
    else:
        print("compiled core not available (build it with pip install -e .)")

    # sanity: dispatcher output matches the direct backend calls
    gx, gy = kernels.sobel_gradients(plane)
    med = kernels.median_filter(plane, args.radius)
    padded = np.pad(plane, 1, mode="edge")
    fx, fy = np.empty_like(plane), np.empty_like(plane)
    _fallback.sobel_band(padded, fx, fy, 0, plane.shape[0])
    assert np.array_equal(gx, fx) and np.array_equal(gy, fy)
    padded_r = np.pad(plane, args.radius, mode="edge")
    fm = np.empty_like(plane)
    _fallback.median_band(padded_r, fm, args.radius, 0, plane.shape[0])
    assert np.array_equal(med, fm)
    print("backends agree bit-for-bit")


if __name__ == "__main__":
    main()
