"""Pure-Python (numpy) implementations of the hot array kernels.

Selected when the compiled extension is unavailable or when
``QDEGREE_FORCE_PYTHON=1`` is set.  Semantics are identical to
``qdegree.kernels._fast``; see ``tests/test_kernels.py`` for the
agreement suite and ``benchmarks/bench_kernels.py`` for timings.

Index conventions (shared with the rest of the package):

* arrays of length ``2**n`` are indexed by the truth-table row ``r``,
  where variable ``i`` (1-based) is bit ``n - i`` of ``r`` (``x_1`` is
  the most significant bit);
* coefficient vectors are indexed by the subset mask with the same bit
  placement.
"""

import numpy as np

BACKEND = "python"


def fwht_inplace(a):
    """In-place unnormalized Walsh-Hadamard transform.

    Computes ``out[m] = sum_r (-1)^popcount(m & r) * a[r]``.  The
    transform is an involution up to the factor ``len(a)``.
    """
    size = a.shape[0]
    h = 1
    while h < size:
        blocks = a.reshape(-1, 2 * h)
        left = blocks[:, :h].copy()
        right = blocks[:, h:].copy()
        blocks[:, :h] = left + right
        blocks[:, h:] = left - right
        h *= 2


def zeta_inplace(a):
    """In-place subset-sum transform: ``out[r] = sum_{s subset of r} a[s]``."""
    size = a.shape[0]
    h = 1
    while h < size:
        blocks = a.reshape(-1, 2 * h)
        blocks[:, h:] += blocks[:, :h]
        h *= 2


def mobius_inplace(a):
    """Inverse of :func:`zeta_inplace` (inclusion-exclusion over subsets)."""
    size = a.shape[0]
    h = 1
    while h < size:
        blocks = a.reshape(-1, 2 * h)
        blocks[:, h:] -= blocks[:, :h]
        h *= 2


def influence_counts(values, n):
    """Per-variable flip-disagreement counts for a truth table.

    ``out[i-1]`` is the number of rows ``r`` with
    ``values[r] != values[r ^ (1 << (n - i))]``, for ``i = 1..n``.
    """
    idx = np.arange(values.shape[0])
    out = np.empty(n, dtype=np.int64)
    for i in range(1, n + 1):
        out[i - 1] = np.count_nonzero(values != values[idx ^ (1 << (n - i))])
    return out


def sensitivity_profile(values, n):
    """Number of output-changing single-bit flips at every input row."""
    idx = np.arange(values.shape[0])
    prof = np.zeros(values.shape[0], dtype=np.int64)
    for b in range(n):
        prof += values != values[idx ^ (1 << b)]
    return prof


def batch_analyze(n):
    """Degree, sensitivity, and influence counts for *all* functions on n bits.

    Functions are encoded as integers ``code`` in ``[0, 2**2**n)`` with
    ``f(r) = (code >> r) & 1``.  Returns ``(deg, sens, inf)`` where
    ``deg`` and ``sens`` are int64 arrays of length ``2**2**n`` and
    ``inf`` has shape ``(2**2**n, n)``; all entries are exact integers
    (influences are counts out of ``2**n``).  Supports ``n <= 4``.
    """
    if n > 4:
        raise ValueError(f"batch_analyze supports n <= 4, got n={n}")
    size = 1 << n
    count = 1 << size
    codes = np.arange(count, dtype=np.uint32)
    vals = ((codes[:, None] >> np.arange(size, dtype=np.uint32)[None, :]) & 1).astype(np.int8)

    cols = np.arange(size)
    inf = np.empty((count, n), dtype=np.int64)
    sens_acc = np.zeros((count, size), dtype=np.int8)
    for i in range(1, n + 1):
        diff = vals != vals[:, cols ^ (1 << (n - i))]
        inf[:, i - 1] = diff.sum(axis=1)
        sens_acc += diff
    sens = sens_acc.max(axis=1).astype(np.int64)

    # real multilinear degree via the integer Moebius transform of the 0/1 values
    coeff = vals.astype(np.int32)
    h = 1
    while h < size:
        blocks = coeff.reshape(count, -1, 2 * h)
        blocks[:, :, h:] -= blocks[:, :, :h]
        h *= 2
    popcnt = np.array([bin(m).count("1") for m in range(size)], dtype=np.int64)
    deg = np.where(coeff != 0, popcnt[None, :], -1).max(axis=1)
    deg = np.maximum(deg, 0).astype(np.int64)
    return deg, sens, inf
