#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy fallback.

Workloads mirror the two hot paths: the polygon edge sum over a full
detector grid, and Bessel J1 over a large magnitude array.

Usage: python benchmarks/bench_kernels.py [--res 512] [--repeats 5]
"""

import argparse
import time

import numpy as np

from shapeft import _kernels_py


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--res", type=int, default=512, help="detector grid edge length")
    parser.add_argument("--n-vertices", type=int, default=12)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    try:
        from shapeft import _kernels
    except ImportError:
        _kernels = None
        print("compiled extension not built; timing the fallback only\n")

    rng = np.random.default_rng(42)
    theta = np.sort(rng.uniform(0, 2 * np.pi, args.n_vertices))
    radii = rng.uniform(0.5, 1.5, args.n_vertices)
    verts = np.stack([radii * np.cos(theta), radii * np.sin(theta)], axis=1)

    axis = np.linspace(-40.0, 40.0, args.res)
    bx, by = np.meshgrid(axis, axis)
    betas = np.stack([bx.ravel(), by.ravel()], axis=1)
    betas[np.hypot(betas[:, 0], betas[:, 1]) == 0] = 1e-6  # kernels take nonzero rows

    xs = rng.uniform(0.0, 200.0, 1_000_000)

    workloads = [
        (
            f"edge sum: {args.n_vertices}-gon x {args.res}x{args.res} grid",
            lambda mod: mod.edge_sum_many(verts, betas),
        ),
        ("bessel j1: 1e6 points", lambda mod: mod.j1_many(xs)),
    ]

    print(f"{'workload':<42} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, call in workloads:
        t_py = best_of(lambda: call(_kernels_py), args.repeats)
        if _kernels is not None:
            a = np.asarray(call(_kernels))
            b = np.asarray(call(_kernels_py))
            assert np.allclose(a, b, rtol=1e-12, atol=1e-14), "backends disagree"
            t_c = best_of(lambda: call(_kernels), args.repeats)
            print(f"{name:<42} {t_py:>9.4f}s {t_c:>9.4f}s {t_py / t_c:>7.1f}x")
        else:
            print(f"{name:<42} {t_py:>9.4f}s {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
