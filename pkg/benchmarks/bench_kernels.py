"""Benchmark the compiled discrete-Lagrangian kernels against the pure-Python
fallback.

Usage: python benchmarks/bench_kernels.py [--n 3] [--reps 200000]
"""

import argparse
import time

import numpy as np

from diracmech.kernels import BACKEND, get_backend, make_kmp_kernels


def bench(backend, potential_id, rule, h, n, reps):
    value, d1, d2 = make_kmp_kernels(potential_id, rule, h, backend=backend)
    rng = np.random.default_rng(0)
    q0 = rng.uniform(-1, 1, n)
    q1 = rng.uniform(-1, 1, n)
    # warm up and sanity-evaluate once
    acc = value(q0, q1) + float(np.sum(d1(q0, q1))) + float(np.sum(d2(q0, q1)))
    t0 = time.perf_counter()
    for _ in range(reps):
        d1(q0, q1)
        d2(q0, q1)
    elapsed = time.perf_counter() - t0
    return elapsed, acc


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--reps", type=int, default=200000)
    args = parser.parse_args()

    print(f"default backend: {BACKEND}")
    try:
        get_backend("compiled")
        backends = ["python", "compiled"]
    except ImportError:
        print("compiled backend not available; benchmarking python only")
        backends = ["python"]

    results = {}
    for potential, pid in (("harmonic", 1), ("pendulum", 2)):
        for rule in ("midpoint", "trapezoidal"):
            for backend in backends:
                elapsed, _ = bench(backend, pid, rule, 0.1, args.n, args.reps)
                results[(potential, rule, backend)] = elapsed
                rate = args.reps / elapsed
                print(f"{potential:10s} {rule:12s} {backend:9s} "
                      f"{elapsed:8.3f} s  {rate:12.0f} slot-pairs/s")
            if len(backends) == 2:
                speedup = (results[(potential, rule, "python")]
                           / results[(potential, rule, "compiled")])
                print(f"{potential:10s} {rule:12s} speedup   {speedup:8.2f}x")


if __name__ == "__main__":
    main()
