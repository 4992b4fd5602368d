"""Minimax LP, approximate degree, and sign-margin checks."""

from fractions import Fraction

import numpy as np
import pytest

from qdegree import approxdeg, boolfn
from qdegree.boolfn import Basis, MultilinearPolynomial, TruthTable

from tests import naive


def test_or2_minimax_quarter():
    res = approxdeg.minimax_error(boolfn.or_fn(2), 1)
    assert res.epsilon_exact == Fraction(1, 4)
    # the optimal approximant equioscillates over the three Hamming levels:
    # value 1/4 at 00, 3/4 at weight-1 inputs, 5/4 at 11
    values = res.approximant.evaluate_cube()
    assert values[0] == pytest.approx(0.25, abs=1e-9)
    assert values[1] == pytest.approx(0.75, abs=1e-9)
    assert values[2] == pytest.approx(0.75, abs=1e-9)
    assert values[3] == pytest.approx(1.25, abs=1e-9)


def test_xor2_minimax_half_constant():
    res = approxdeg.minimax_error(boolfn.parity(2), 1)
    assert res.epsilon_exact == Fraction(1, 2)
    # parity is orthogonal to every degree-<=1 character, so the constant
    # 1/2 is optimal
    values = res.approximant.evaluate_cube()
    assert np.allclose(values, 0.5, atol=1e-9)


def test_exact_degree_gives_zero_error():
    rng = np.random.default_rng(13)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        tt = TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
        d = boolfn.truth_table_degree(tt)
        assert approxdeg.minimax_error(tt, d).epsilon_exact == 0


def test_achieved_error_matches_reported():
    rng = np.random.default_rng(14)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        tt = TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
        d = int(rng.integers(0, n + 1))
        res = approxdeg.minimax_error(tt, d)
        values = res.approximant.evaluate_cube()
        achieved = float(np.max(np.abs(values - tt.values.astype(float))))
        assert achieved == pytest.approx(res.epsilon, abs=1e-6)


def test_agrees_with_scipy_lp_oracle():
    rng = np.random.default_rng(15)
    for _ in range(12):
        n = int(rng.integers(1, 5))
        tt = TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
        d = int(rng.integers(0, n + 1))
        ours = approxdeg.minimax_error(tt, d).epsilon
        theirs = naive.minimax_scipy(tt, d)
        assert ours == pytest.approx(theirs, abs=1e-7)


def test_monotone_in_degree():
    rng = np.random.default_rng(16)
    for _ in range(5):
        tt = TruthTable(4, rng.integers(0, 2, 16, dtype=np.uint8))
        errors = [approxdeg.minimax_error(tt, d).epsilon_exact for d in range(5)]
        assert all(a >= b for a, b in zip(errors, errors[1:]))
        assert errors[-1] == 0 or boolfn.truth_table_degree(tt) < 4


def test_approx_degree_examples():
    assert approxdeg.approx_degree(boolfn.or_fn(2)) == 1
    const = TruthTable(3, np.ones(8, dtype=np.uint8))
    assert approxdeg.approx_degree(const) == 0
    for n in (1, 2, 3, 4):
        assert approxdeg.approx_degree(boolfn.parity(n)) == n


def test_approx_degree_complement_invariant():
    rng = np.random.default_rng(17)
    for _ in range(15):
        n = int(rng.integers(1, 4))
        tt = TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
        assert approxdeg.approx_degree(tt) == approxdeg.approx_degree(tt.complement())


def test_approx_degree_monotone_in_eps():
    rng = np.random.default_rng(18)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        tt = TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
        degrees = [approxdeg.approx_degree(tt, eps) for eps in (0.05, 0.2, 1 / 3, 0.45)]
        assert all(a >= b for a, b in zip(degrees, degrees[1:]))


def test_approx_at_most_degree_sampled_n4():
    rng = np.random.default_rng(19)
    for _ in range(15):
        tt = TruthTable(4, rng.integers(0, 2, 16, dtype=np.uint8))
        assert approxdeg.approx_degree(tt) <= boolfn.truth_table_degree(tt)


def test_capacity_and_validation():
    with pytest.raises(boolfn.CapacityError):
        approxdeg.minimax_error(boolfn.or_fn(6), 1)
    with pytest.raises(ValueError):
        approxdeg.minimax_error(boolfn.or_fn(2), 3)
    with pytest.raises(ValueError):
        approxdeg.approx_degree(boolfn.or_fn(2), 0.6)


# ---------------------------------------------------------------------------
# sign margin


def _scaled_vote_sum(n):
    return MultilinearPolynomial(
        n, Basis.FOURIER_PM1, {frozenset({i}): 1.0 / n for i in range(1, n + 1)})


def test_vote_sum_sign_represents_majority():
    # under the 0 -> +1 encoding, a majority of ones means the vote sum
    # is negative, matching the -1 output value
    maj = boolfn.majority(5)
    p = _scaled_vote_sum(5)
    assert approxdeg.sign_margin_check(p, maj, gamma=1.0)
    # a one-vote margin gives |p| = 1/5 < 5^(-1/2)
    assert not approxdeg.sign_margin_check(p, maj, gamma=0.5)


def test_sign_margin_function_itself():
    rng = np.random.default_rng(20)
    tt = TruthTable(3, rng.integers(0, 2, 8, dtype=np.uint8))
    p = boolfn.fourier_transform(tt)
    for gamma in (0.0, 0.5, 2.0):
        assert approxdeg.sign_margin_check(p, tt, gamma)


def test_sign_margin_zero_value_fails():
    p = MultilinearPolynomial(2, Basis.FOURIER_PM1,
                              {frozenset({1}): 0.5, frozenset({2}): 0.5})
    tt = boolfn.parity(2)
    assert not approxdeg.sign_margin_check(p, tt, gamma=1.0)
