#!/usr/bin/env python3
"""Benchmark the two kernel backends against each other.

Times the hot kernels on representative workloads:

* ``rref_mod_p`` driving a full elementary-sequence sweep (every symmetric
  polygon with g <= 6, three primes);
* ``scan_intertwiners`` on exhaustive endomorphism enumerations of sizes
  2^12 .. 2^18.

Run:  python benchmarks/bench_kernels.py

The numba numbers include neither import nor compilation: every kernel is
warmed before timing.  Select a single backend for library use with the
environment variable NEWTONSTRATA_BACKEND (auto | numba | numpy).
"""

import time

import numpy as np

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from newtonstrata import _kernels  # noqa: E402
from newtonstrata import enumerate_symmetric, minimal_of_polygon, parse_polygon  # noqa: E402


def bench_rref(impl, repeats=3):
    rng = np.random.default_rng(0)
    mats = [
        np.ascontiguousarray(rng.integers(0, p, size=(12, 12)).astype(np.int64))
        for p in (2, 3, 5)
        for _ in range(400)
    ]
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for k, m in enumerate(mats):
            impl["rref_mod_p"](m, np.int64((2, 3, 5)[k // 400]))
        best = min(best, time.perf_counter() - t0)
    return best


def bench_es_sweep(backend, repeats=2):
    # end-to-end: the subspace closure for every symmetric polygon, g <= 6
    from newtonstrata import eo

    saved = _kernels._resolved
    _kernels._resolved = backend
    try:
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            for g in range(1, 7):
                for xi in enumerate_symmetric(g):
                    eo.elementary_sequence(eo.bt1_of_xi(xi, 3))
            best = min(best, time.perf_counter() - t0)
        return best
    finally:
        _kernels._resolved = saved


def bench_scan(impl, repeats=3):
    cases = [
        (parse_polygon("(1,1)"), 3),   # q^(h*h) = 2^12
        (parse_polygon("(2,1)"), 2),   # 2^18
        (parse_polygon("(1,0)+(1,1)"), 2),  # 2^18
    ]
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for beta, a in cases:
            M = minimal_of_polygon(beta, a, 2)
            impl["scan_intertwiners"](
                np.ascontiguousarray(M.F),
                np.ascontiguousarray(M.V),
                np.ascontiguousarray(M.F),
                np.ascontiguousarray(M.V),
                np.int64(2**a),
            )
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    backends = _kernels.available_backends()
    print(f"available backends: {', '.join(backends)}")
    rows = []
    for backend in backends:
        impl = _kernels.implementations(backend)
        # warm up (compiles on the numba path)
        impl["rref_mod_p"](np.eye(4, dtype=np.int64), np.int64(2))
        z = np.zeros((1, 1), dtype=np.int64)
        impl["scan_intertwiners"](z, z, z, z, np.int64(2))
        rows.append(
            (
                backend,
                bench_rref(impl),
                bench_es_sweep(backend),
                bench_scan(impl),
            )
        )
    print(f"\n{'backend':<10} {'rref x1200 (s)':>16} {'ES sweep g<=6 (s)':>19} {'scan ~2^18 x3 (s)':>19}")
    for backend, t_rref, t_es, t_scan in rows:
        print(f"{backend:<10} {t_rref:>16.4f} {t_es:>19.4f} {t_scan:>19.4f}")
    if len(rows) == 2:
        print(
            f"\nspeedup (numpy/numba): rref {rows[0][1] / rows[1][1]:.2f}x, "
            f"ES sweep {rows[0][2] / rows[1][2]:.2f}x, scan {rows[0][3] / rows[1][3]:.2f}x"
        )


if __name__ == "__main__":
    main()
