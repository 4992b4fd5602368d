"""Backend equivalence: the compiled kernels and the numpy fallback must
produce bit-identical results (all kernel arithmetic is exact)."""

import numpy as np
import pytest

from qdegree.kernels import _ref

try:
    from qdegree.kernels import _fast
    BACKENDS = [_ref, _fast]
except ImportError:
    _fast = None
    BACKENDS = [_ref]

needs_fast = pytest.mark.skipif(_fast is None, reason="compiled kernels not built")


@pytest.mark.parametrize("impl", BACKENDS)
def test_fwht_involution(impl):
    rng = np.random.default_rng(1)
    for n in (1, 3, 6):
        a = rng.standard_normal(1 << n)
        b = a.copy()
        impl.fwht_inplace(b)
        impl.fwht_inplace(b)
        assert np.allclose(b, a * (1 << n), atol=1e-12)


@pytest.mark.parametrize("impl", BACKENDS)
def test_fwht_matches_direct_sum(impl):
    rng = np.random.default_rng(2)
    n = 4
    a = rng.integers(-5, 6, 1 << n).astype(np.int64)
    expected = np.array([sum(int(a[r]) * (-1 if (m & r).bit_count() & 1 else 1)
                             for r in range(1 << n)) for m in range(1 << n)])
    b = a.copy()
    impl.fwht_inplace(b)
    assert np.array_equal(b, expected)


@pytest.mark.parametrize("impl", BACKENDS)
def test_zeta_mobius_roundtrip_and_direct(impl):
    rng = np.random.default_rng(3)
    n = 5
    a = rng.integers(-9, 10, 1 << n).astype(np.int64)
    z = a.copy()
    impl.zeta_inplace(z)
    expected = np.array([sum(int(a[s]) for s in range(1 << n) if (s & r) == s)
                         for r in range(1 << n)])
    assert np.array_equal(z, expected)
    impl.mobius_inplace(z)
    assert np.array_equal(z, a)


@needs_fast
def test_backends_agree_on_random_inputs():
    rng = np.random.default_rng(4)
    for _ in range(25):
        n = int(rng.integers(1, 9))
        for dtype in (np.float64, np.int64, np.complex128):
            if dtype is np.complex128:
                a = (rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n))
            elif dtype is np.float64:
                a = rng.standard_normal(1 << n)
            else:
                a = rng.integers(-100, 100, 1 << n).astype(np.int64)
            b = a.copy()
            _ref.fwht_inplace(a)
            _fast.fwht_inplace(b)
            assert np.array_equal(a, b)
        vals = rng.integers(0, 2, 1 << n).astype(np.uint8)
        assert np.array_equal(_ref.influence_counts(vals, n), _fast.influence_counts(vals, n))
        assert np.array_equal(_ref.sensitivity_profile(vals, n),
                              _fast.sensitivity_profile(vals, n))


@needs_fast
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_batch_analyze_backend_agreement(n):
    for left, right in zip(_ref.batch_analyze(n), _fast.batch_analyze(n)):
        assert np.array_equal(left, right)


@pytest.mark.parametrize("impl", BACKENDS)
def test_batch_analyze_matches_per_function_ops(impl):
    from qdegree import boolfn

    n = 3
    deg, sens, inf = impl.batch_analyze(n)
    for code in range(1 << (1 << n)):
        tt = boolfn.truth_table_from_code(code, n)
        assert deg[code] == boolfn.truth_table_degree(tt)
        assert sens[code] == boolfn.sensitivity(tt)
        expected = [int(f * (1 << n)) for f in boolfn.influences(tt)]
        assert list(inf[code]) == expected


@pytest.mark.parametrize("impl", BACKENDS)
def test_batch_analyze_rejects_large_n(impl):
    with pytest.raises(ValueError):
        impl.batch_analyze(5)
