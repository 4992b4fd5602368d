"""Moment growth, tail bounds, and the derivative-variance pipeline."""

import math

import numpy as np
import pytest

from qdegree import boolfn, tails
from qdegree.boolfn import Basis, MultilinearPolynomial


def test_tail_bound_values():
    assert tails.tail_bound(2, 2 * math.e) == pytest.approx(math.exp(-2), abs=1e-12)
    assert tails.tail_bound(1, math.sqrt(2 * math.e)) == pytest.approx(
        math.exp(-1), abs=1e-12)


def test_tail_bound_strictly_decreasing_in_t():
    for d in (1, 2, 3):
        grid = tails.default_t_grid(d)
        bounds = [tails.tail_bound(d, float(t)) for t in grid]
        assert all(a > b for a, b in zip(bounds, bounds[1:]))
        assert all(float(t) >= tails.hypothesis_threshold(d) - 1e-12 for t in grid)
        assert len(grid) == 16


def test_tail_bound_rejects_small_t():
    with pytest.raises(ValueError):
        tails.tail_bound(2, 1.0)
    with pytest.raises(ValueError):
        tails.tail_bound(0, 10.0)


def test_empirical_tail_single_character():
    p = MultilinearPolynomial(4, Basis.FOURIER_PM1, {frozenset({1}): 1.0})
    assert tails.empirical_tail(p, 2.0) == 0.0
    assert tails.empirical_tail(p, 1.0) == 1.0


def test_empirical_tail_binomial_counting():
    # |sum of 8 signs| reaches 8 only at the two all-equal inputs
    p = MultilinearPolynomial(
        8, Basis.FOURIER_PM1,
        {frozenset({i}): 1.0 / math.sqrt(8) for i in range(1, 9)})
    assert tails.empirical_tail(p, math.sqrt(8)) == 2 / 256


def test_empirical_tail_rejects_nonzero_mean():
    p = MultilinearPolynomial(3, Basis.FOURIER_PM1,
                              {frozenset(): 0.5, frozenset({1}): 1.0})
    with pytest.raises(ValueError):
        tails.empirical_tail(p, 2.0)


def test_moment_bound_character_case():
    p = MultilinearPolynomial(5, Basis.FOURIER_PM1, {frozenset({2, 4}): 1.0})
    for q in (2, 4, 7.5):
        assert tails.moment_bound_check(p, q)


def test_degree_one_fourth_moment_closed_form():
    # E[(sum a_i y_i)^4] = 3 (sum a_i^2)^2 - 2 sum a_i^4 for independent signs
    rng = np.random.default_rng(21)
    a = rng.standard_normal(6)
    p = MultilinearPolynomial(
        6, Basis.FOURIER_PM1, {frozenset({i + 1}): float(a[i]) for i in range(6)})
    values = p.evaluate_cube()
    fourth = float(np.mean(values ** 4))
    closed = 3 * (a @ a) ** 2 - 2 * float(np.sum(a ** 4))
    assert fourth == pytest.approx(closed, rel=1e-12)
    assert fourth <= 3 ** 2 * (a @ a) ** 2 * (1 + 1e-9)
    assert tails.moment_bound_check(p, 4)


def test_hypercontractive_examples():
    const = MultilinearPolynomial(3, Basis.FOURIER_PM1, {frozenset(): 1.7})
    assert tails.hypercontractive_check(const, 4)
    pair = MultilinearPolynomial(3, Basis.FOURIER_PM1, {frozenset({1, 2}): 1.0})
    assert boolfn.p_norm(pair, 4) == pytest.approx(1.0)
    assert tails.hypercontractive_check(pair, 4)


def test_random_suite_small():
    rng = np.random.default_rng(22)
    for d in (1, 2, 3):
        for _ in range(15):
            n = int(rng.integers(d + 3, 13))
            p = tails.random_centered_polynomial(n, d, rng)
            report = tails.make_tail_report(p)
            assert report.ok
            assert report.sigma == pytest.approx(1.0, abs=1e-9)
            for q in (4, 6):
                assert tails.moment_bound_check(p, q)
                assert tails.hypercontractive_check(p, q)
            norms = [boolfn.p_norm(p, q) for q in (2, 3, 4, 6)]
            assert all(x <= y + 1e-12 for x, y in zip(norms, norms[1:]))
            for t in tails.default_t_grid(d)[::5]:
                assert tails.markov_chain_check(p, float(t))


def test_random_polynomial_shape():
    rng = np.random.default_rng(23)
    p = tails.random_centered_polynomial(9, 3, rng)
    assert boolfn.degree(p) == 3
    assert frozenset() not in p.coeffs
    assert sum(v * v for v in p.coeffs.values()) == pytest.approx(1.0, abs=1e-12)
    assert tails.boolfn.expectation(p) == pytest.approx(0.0, abs=1e-12)


def test_empirical_never_exceeds_bound_is_enforced_identity():
    # a direct mini-sweep at modest n, all grid points
    rng = np.random.default_rng(24)
    for _ in range(10):
        p = tails.random_centered_polynomial(10, 2, rng)
        for point in tails.make_tail_report(p).grid:
            assert point.empirical <= point.bound


# ---------------------------------------------------------------------------
# pipeline


def test_pipeline_or3():
    rep = tails.lower_bound_pipeline(boolfn.or_fn(3))
    assert rep.mass_bound_ok
    assert rep.min_norm_sq <= rep.poly_degree * rep.norm_sq / 3 + 1e-12
    assert rep.influence_bound_ok in (True, None)


def test_pipeline_dictator_zero_derivative():
    rep = tails.lower_bound_pipeline(boolfn.dictator(3, 1))
    assert rep.min_index in (2, 3)
    assert rep.min_norm_sq == pytest.approx(0.0, abs=1e-12)
    assert not rep.min_index_influential
    assert rep.influence_bound_ok is None


def test_pipeline_parity2_tie_to_smallest():
    rep = tails.lower_bound_pipeline(boolfn.parity(2))
    assert rep.min_index == 1
    assert rep.derivative_norms_sq[0] == pytest.approx(rep.derivative_norms_sq[1])
    assert rep.influence_bound_ok


def test_pipeline_capacity():
    with pytest.raises(boolfn.CapacityError):
        tails.lower_bound_pipeline(boolfn.or_fn(6))
