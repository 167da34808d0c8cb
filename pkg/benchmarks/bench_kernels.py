"""Benchmark the compiled kernels against the pure numpy fallback.

Times the three hot entry points (scalar ratio, ratio-with-gradient, batch
ratio) on optimizer-representative shapes and prints per-call times and
the speedup. The compiled backend is skipped if the extension is absent.

Usage: python benchmarks/bench_kernels.py [--repeats 20000] [--batch 20000]
"""

import argparse
import time

import numpy as np

from njconst import _kernels_py
from njconst.hadamard import _entries_float

try:
    from njconst import _kernels
except ImportError:
    _kernels = None

SHAPES = [(2, 2, 1.5), (3, 4, 1.5), (3, 4, 4.0), (4, 8, 3.0)]


def _time(fn, repeats):
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_backend(kernels, repeats, batch):
    rng = np.random.default_rng(0)
    rows = []
    for n, d, p in SHAPES:
        A = np.ascontiguousarray(_entries_float(n))
        X = np.ascontiguousarray(rng.standard_normal((n, d)))
        T = np.ascontiguousarray(rng.standard_normal((batch, n, d)))
        t_val = _time(lambda: kernels.cn_value(A, X, p), repeats)
        t_grad = _time(lambda: kernels.cn_value_grad(A, X, p, 1e-12), repeats)
        t_batch = _time(lambda: kernels.cn_batch(A, T, p), max(1, repeats // 2000))
        rows.append((n, d, p, t_val, t_grad, t_batch / batch))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20000)
    parser.add_argument("--batch", type=int, default=20000)
    args = parser.parse_args()

    results = {"python": bench_backend(_kernels_py, args.repeats, args.batch)}
    if _kernels is not None:
        results["cython"] = bench_backend(_kernels, args.repeats, args.batch)
        parity = []
        rng = np.random.default_rng(1)
        for n, d, p in SHAPES:
            A = np.ascontiguousarray(_entries_float(n))
            X = np.ascontiguousarray(rng.standard_normal((n, d)))
            a = _kernels_py.cn_value(A, X, p)
            b = _kernels.cn_value(A, X, p)
            parity.append(abs(a - b) / max(1.0, abs(a)))
        print(f"backend parity (max rel diff on cn_value): {max(parity):.3e}\n")

    header = f"{'n':>3} {'d':>3} {'p':>4} {'cn_value':>12} {'cn_grad':>12} {'batch/tuple':>12}"
    for name, rows in results.items():
        print(f"[{name}]")
        print(header)
        for n, d, p, tv, tg, tb in rows:
            print(f"{n:>3} {d:>3} {p:>4} {tv * 1e6:>10.2f}us {tg * 1e6:>10.2f}us {tb * 1e9:>10.1f}ns")
        print()

    if _kernels is not None:
        print("speedup (python / cython):")
        print(header)
        for (n, d, p, pv, pg, pb), (_, _, _, cv, cg, cb) in zip(
            results["python"], results["cython"]
        ):
            print(f"{n:>3} {d:>3} {p:>4} {pv / cv:>11.1f}x {pg / cg:>11.1f}x {pb / cb:>11.1f}x")


if __name__ == "__main__":
    main()
