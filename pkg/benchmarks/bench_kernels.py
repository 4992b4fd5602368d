"""Benchmark the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

Both implementations are imported directly (independent of the
``QDEGREE_FORCE_PYTHON`` selection), so the comparison always covers
whichever extension was built.
"""

import time

import numpy as np

from qdegree.kernels import _ref

try:
    from qdegree.kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, *args, repeat=5, min_time=0.05):
    best = float("inf")
    for _ in range(repeat):
        loops = 0
        start = time.perf_counter()
        while True:
            fn(*args)
            loops += 1
            elapsed = time.perf_counter() - start
            if elapsed >= min_time:
                break
        best = min(best, elapsed / loops)
    return best


def bench_transform(impl, name, n, dtype):
    rng = np.random.default_rng(0)
    if dtype is np.int64:
        base = rng.integers(-100, 100, 1 << n).astype(np.int64)
    else:
        base = rng.standard_normal(1 << n).astype(dtype)

    def run():
        work = base.copy()
        getattr(impl, name)(work)

    return timeit(run)


def bench_influence(impl, n):
    rng = np.random.default_rng(1)
    values = rng.integers(0, 2, 1 << n).astype(np.uint8)
    return timeit(lambda: impl.influence_counts(values, n))


def bench_batch(impl, n):
    return timeit(lambda: impl.batch_analyze(n), repeat=3)


def main():
    impls = [("python", _ref)]
    if _fast is not None:
        impls.append(("cython", _fast))
    else:
        print("compiled kernels not available; benchmarking the fallback only\n")

    cases = [
        ("fwht_inplace f64, n=16", lambda impl: bench_transform(impl, "fwht_inplace", 16, np.float64)),
        ("fwht_inplace i64, n=16", lambda impl: bench_transform(impl, "fwht_inplace", 16, np.int64)),
        ("mobius_inplace f64, n=16", lambda impl: bench_transform(impl, "mobius_inplace", 16, np.float64)),
        ("influence_counts, n=16", lambda impl: bench_influence(impl, 16)),
        ("batch_analyze, n=4", lambda impl: bench_batch(impl, 4)),
    ]

    header = f"{'kernel':32s}" + "".join(f"{name:>14s}" for name, _ in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for label, runner in cases:
        times = [runner(impl) for _, impl in impls]
        row = f"{label:32s}" + "".join(f"{t * 1e3:11.3f} ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
