"""Hot numeric kernels with two interchangeable backends.

The compiled (numba) backend is the default; setting NOTE_FORGE_PURE_NUMPY=1
before import forces the vectorized numpy path instead. Both backends are
importable directly so the benchmark and the equivalence tests can compare
them in one process; the module-level names dispatch per the flag, recorded
in USING_NUMBA.
"""

from __future__ import annotations

import os

import numpy as np

PURE_NUMPY_ENV = "NOTE_FORGE_PURE_NUMPY"


def pure_numpy_requested() -> bool:
    return os.environ.get(PURE_NUMPY_ENV, "").strip().lower() in ("1", "true", "yes")


def lcs_length_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """LCS length via the row recurrence.

    Each DP row is non-decreasing, so the in-row dependency collapses to a
    running maximum: cur[j] = max(prev[j], prev[j-1]+eq[j], cur[j-1]) is a
    prefix-max over the first two terms.
    """
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return 0
    prev = np.zeros(b.size + 1, dtype=np.int64)
    cur = np.zeros(b.size + 1, dtype=np.int64)
    for i in range(a.size):
        np.maximum(prev[1:], prev[:-1] + (b == a[i]), out=cur[1:])
        np.maximum.accumulate(cur[1:], out=cur[1:])
        prev, cur = cur, prev
    return int(prev[-1])


def pairwise_max_numpy(ref: np.ndarray, hyp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row and column maxima of the ref x hyp dot-product matrix."""
    sim = ref @ hyp.T
    return sim.max(axis=1), sim.max(axis=0)


_NUMBA_IMPORT_ERROR = None
lcs_length_numba = None
pairwise_max_numba = None

try:
    from numba import njit
except ImportError as exc:        # pragma: no cover - numba is a hard dep
    _NUMBA_IMPORT_ERROR = exc
else:
    @njit(cache=True)
    def _lcs_length_jit(a, b):
        n, m = a.shape[0], b.shape[0]
        prev = np.zeros(m + 1, dtype=np.int64)
        cur = np.zeros(m + 1, dtype=np.int64)
        for i in range(n):
            for j in range(1, m + 1):
                best = prev[j]
                if cur[j - 1] > best:
                    best = cur[j - 1]
                if a[i] == b[j - 1] and prev[j - 1] + 1 > best:
                    best = prev[j - 1] + 1
                cur[j] = best
            prev, cur = cur, prev
        return prev[m]

    @njit(cache=True)
    def _pairwise_max_jit(ref, hyp):
        n, m, width = ref.shape[0], hyp.shape[0], ref.shape[1]
        row_max = np.full(n, -np.inf)
        col_max = np.full(m, -np.inf)
        for i in range(n):
            for j in range(m):
                total = 0.0
                for k in range(width):
                    total += ref[i, k] * hyp[j, k]
                if total > row_max[i]:
                    row_max[i] = total
                if total > col_max[j]:
                    col_max[j] = total
        return row_max, col_max

    def lcs_length_numba(a, b):
        a = np.ascontiguousarray(a, dtype=np.int64)
        b = np.ascontiguousarray(b, dtype=np.int64)
        if a.size == 0 or b.size == 0:
            return 0
        return int(_lcs_length_jit(a, b))

    def pairwise_max_numba(ref, hyp):
        ref = np.ascontiguousarray(ref, dtype=np.float64)
        hyp = np.ascontiguousarray(hyp, dtype=np.float64)
        return _pairwise_max_jit(ref, hyp)


if pure_numpy_requested() or lcs_length_numba is None:
    USING_NUMBA = False
    lcs_length = lcs_length_numpy
    pairwise_max = pairwise_max_numpy
else:
    USING_NUMBA = True
    lcs_length = lcs_length_numba
    pairwise_max = pairwise_max_numba
