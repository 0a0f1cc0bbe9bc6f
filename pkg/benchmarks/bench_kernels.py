"""Compare the compiled and pure-numpy kernel backends.

Run with `python benchmarks/bench_kernels.py`. Both backends are imported
directly so one process covers them regardless of NOTE_FORGE_PURE_NUMPY;
the jit functions are warmed once so compilation cost stays out of the
timings. Results are wall-clock medians over repeated calls.
"""

import argparse
import statistics
import time

import numpy as np

from note_forge.metrics._kernels import (
    USING_NUMBA,
    lcs_length_numba,
    lcs_length_numpy,
    pairwise_max_numba,
    pairwise_max_numpy,
)


def timed(fn, args, repeats):
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def bench_lcs(rng, repeats):
    rows = []
    for size in (64, 256, 1024):
        a = rng.integers(0, 50, size=size)
        b = rng.integers(0, 50, size=size)
        impls = [("numpy", lcs_length_numpy)]
        if lcs_length_numba is not None:
            assert lcs_length_numba(a, b) == lcs_length_numpy(a, b)
            impls.append(("numba", lcs_length_numba))
        rows.append((f"lcs_length {size}x{size}",
                     {name: timed(fn, (a, b), repeats) for name, fn in impls}))
    return rows


def bench_pairwise(rng, repeats):
    rows = []
    for tokens in (32, 128, 512):
        ref = rng.standard_normal((tokens, 32))
        hyp = rng.standard_normal((tokens, 32))
        impls = [("numpy", pairwise_max_numpy)]
        if pairwise_max_numba is not None:
            got = pairwise_max_numba(ref, hyp)
            want = pairwise_max_numpy(ref, hyp)
            assert np.allclose(got[0], want[0]) and np.allclose(got[1], want[1])
            impls.append(("numba", pairwise_max_numba))
        rows.append((f"pairwise_max {tokens}x{tokens} dim=32",
                     {name: timed(fn, (ref, hyp), repeats)
                      for name, fn in impls}))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=9,
                        help="timed calls per case; the median is reported")
    parser.add_argument("--seed", type=int, default=7)
    options = parser.parse_args()

    rng = np.random.default_rng(options.seed)
    if lcs_length_numba is not None:
        # first call pays the jit compile; keep it out of the timings
        lcs_length_numba(np.arange(4), np.arange(4))
        pairwise_max_numba(np.ones((2, 3)), np.ones((2, 3)))

    print(f"default backend: {'numba' if USING_NUMBA else 'numpy'}")
    header = f"{'case':34} {'numpy':>12} {'numba':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, results in (bench_lcs(rng, options.repeats)
                          + bench_pairwise(rng, options.repeats)):
        base = results["numpy"]
        if "numba" in results:
            ratio = base / results["numba"] if results["numba"] > 0 else float("inf")
            print(f"{name:34} {base * 1e3:10.3f}ms {results['numba'] * 1e3:10.3f}ms "
                  f"{ratio:8.1f}x")
        else:
            print(f"{name:34} {base * 1e3:10.3f}ms {'n/a':>12} {'':>9}")


if __name__ == "__main__":
    main()
