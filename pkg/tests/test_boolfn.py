"""Truth tables, Fourier spectra, influences, sensitivity, and builders."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdegree import boolfn
from qdegree.boolfn import Basis, MultilinearPolynomial, TruthTable

from tests import naive


def random_table(rng, n):
    return TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))


def random_poly(rng, n, basis, max_coeffs=10):
    coeffs = {}
    for _ in range(max_coeffs):
        size = int(rng.integers(0, n + 1))
        subset = frozenset(rng.choice(np.arange(1, n + 1), size=size, replace=False).tolist())
        coeffs[subset] = float(rng.standard_normal())
    return MultilinearPolynomial(n, basis, coeffs)


# ---------------------------------------------------------------------------
# conventions


def test_bit_order_x1_is_most_significant():
    tt = boolfn.dictator(3, 1)
    assert list(tt.values) == [0, 0, 0, 0, 1, 1, 1, 1]
    tt3 = boolfn.dictator(3, 3)
    assert list(tt3.values) == [0, 1, 0, 1, 0, 1, 0, 1]


def test_truth_table_validation():
    with pytest.raises(ValueError):
        TruthTable(2, np.array([0, 1, 0], dtype=np.uint8))
    with pytest.raises(ValueError):
        TruthTable(1, np.array([0, 2], dtype=np.uint8))
    with pytest.raises(boolfn.CapacityError):
        TruthTable(25, np.zeros(2, dtype=np.uint8))


# ---------------------------------------------------------------------------
# fourier_transform


def test_fourier_parity_single_character():
    p = boolfn.fourier_transform(boolfn.parity(2, [1, 2]))
    assert p.coeffs == {frozenset({1, 2}): 1.0}


def test_fourier_constant_zero():
    tt = TruthTable(2, np.zeros(4, dtype=np.uint8))
    p = boolfn.fourier_transform(tt)
    assert p.coeffs == {frozenset(): 1.0}


def test_fourier_majority3_matches_direct_summation():
    tt = boolfn.majority(3)
    p = boolfn.fourier_transform(tt)
    # frozen from the direct-summation oracle: singletons 1/2, top set -1/2
    for i in (1, 2, 3):
        assert p.coeff([i]) == pytest.approx(0.5, abs=1e-12)
    assert p.coeff([1, 2, 3]) == pytest.approx(-0.5, abs=1e-12)
    for subset in (frozenset(), frozenset({1, 2})):
        assert p.coeff(subset) == pytest.approx(0.0, abs=1e-12)
    for subset in p.coeffs:
        assert p.coeff(subset) == pytest.approx(
            naive.naive_fourier_coefficient(tt, subset), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_parseval_all_boolean_functions(n, data):
    values = data.draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
    tt = TruthTable(n, np.array(values, dtype=np.uint8))
    p = boolfn.fourier_transform(tt)
    assert sum(v * v for v in p.coeffs.values()) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# convert_basis


def test_convert_or2_roundtrip():
    or2 = MultilinearPolynomial(2, Basis.MONOMIAL_01,
                                {frozenset({1}): 1.0, frozenset({2}): 1.0,
                                 frozenset({1, 2}): -1.0})
    over_pm = boolfn.convert_basis(or2, Basis.FOURIER_PM1)
    back = boolfn.convert_basis(over_pm, Basis.MONOMIAL_01)
    for subset in set(or2.coeffs) | set(back.coeffs):
        assert back.coeff(subset) == pytest.approx(or2.coeff(subset), abs=1e-12)


def test_convert_constant():
    p = MultilinearPolynomial(3, Basis.MONOMIAL_01, {frozenset(): 2.5})
    q = boolfn.convert_basis(p, Basis.FOURIER_PM1)
    assert q.coeffs == {frozenset(): 2.5}


def test_convert_random_pointwise_agreement():
    rng = np.random.default_rng(11)
    for _ in range(10):
        p = random_poly(rng, 5, Basis.MONOMIAL_01)
        q = boolfn.convert_basis(p, Basis.FOURIER_PM1)
        for r in range(32):
            bits = boolfn.row_bits(r, 5)
            assert naive.naive_eval(q, bits) == pytest.approx(
                naive.naive_eval(p, bits), abs=1e-12)
        assert boolfn.degree(q) == boolfn.degree(p)


# ---------------------------------------------------------------------------
# degree


def test_degree_of_address_function():
    for k in (2, 4, 8):
        tt = boolfn.address_function(k)
        assert boolfn.truth_table_degree(tt) == int(math.log2(k)) + 1
        assert boolfn.degree(boolfn.fourier_transform(tt)) == int(math.log2(k)) + 1


def test_degree_parity_and_constant():
    assert boolfn.truth_table_degree(boolfn.parity(4)) == 4
    assert boolfn.degree(boolfn.fourier_transform(boolfn.parity(4))) == 4
    const = TruthTable(3, np.ones(8, dtype=np.uint8))
    assert boolfn.truth_table_degree(const) == 0


def test_degree_matches_inclusion_exclusion_oracle():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n = int(rng.integers(1, 5))
        tt = random_table(rng, n)
        assert boolfn.truth_table_degree(tt) == naive.naive_degree(tt)


# ---------------------------------------------------------------------------
# influence / sensitivity


def test_influence_dictator_and_parity():
    tt = boolfn.dictator(3, 1)
    assert boolfn.influence(tt, 1) == 1
    assert boolfn.influence(tt, 2) == 0
    for i in (1, 2, 3):
        assert boolfn.influence(boolfn.parity(3), i) == 1


def test_influence_or3_exact_quarter():
    # flipping bit i matters only at the two inputs where all other bits are
    # zero, so each variable of OR_n has influence exactly 2^(1-n)
    tt = boolfn.or_fn(3)
    for i in (1, 2, 3):
        assert boolfn.influence(tt, i) == Fraction(1, 4)
        assert naive.naive_influence(tt, i) == Fraction(1, 4)


def test_influence_index_validation():
    with pytest.raises(ValueError):
        boolfn.influence(boolfn.or_fn(2), 3)


def test_influences_match_naive_enumeration():
    rng = np.random.default_rng(6)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        tt = random_table(rng, n)
        assert boolfn.influences(tt) == tuple(naive.naive_influence(tt, i)
                                              for i in range(1, n + 1))


def test_sensitivity_examples():
    assert boolfn.sensitivity_at(boolfn.or_fn(4), 0) == 4
    assert boolfn.sensitivity(boolfn.or_fn(4)) == 4
    assert boolfn.sensitivity(boolfn.parity(3)) == 3
    assert boolfn.sensitivity(TruthTable(3, np.zeros(8, dtype=np.uint8))) == 0
    assert boolfn.sensitivity_at(boolfn.parity(2), (0, 1)) == 2


def test_sensitivity_matches_naive():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        tt = random_table(rng, n)
        assert boolfn.sensitivity(tt) == naive.naive_sensitivity(tt)


def test_significant_variables():
    assert boolfn.significant_variables(boolfn.dictator(3, 1)) == {1}
    assert boolfn.significant_variables(boolfn.parity(4)) == {1, 2, 3, 4}
    assert boolfn.significant_variables(boolfn.address_function(4)) == {1, 2, 3, 4, 5, 6}


# ---------------------------------------------------------------------------
# derivatives


def test_discrete_derivative_membership_cases():
    p = MultilinearPolynomial(3, Basis.FOURIER_PM1, {frozenset({1, 2}): 1.0})
    assert boolfn.discrete_derivative(p, 1).coeffs == {frozenset({1, 2}): 1.0}
    q = MultilinearPolynomial(3, Basis.FOURIER_PM1, {frozenset({2}): 1.0})
    assert boolfn.discrete_derivative(q, 1).coeffs == {}


def test_discrete_derivative_pointwise_oracle():
    rng = np.random.default_rng(8)
    p = random_poly(rng, 5, Basis.FOURIER_PM1)
    for i in (1, 3, 5):
        deriv = boolfn.discrete_derivative(p, i)
        assert boolfn.expectation(deriv) == pytest.approx(0.0, abs=1e-12)
        for r in range(32):
            bits = boolfn.row_bits(r, 5)
            flipped = boolfn.row_bits(r ^ (1 << (5 - i)), 5)
            expected = (naive.naive_eval(p, bits) - naive.naive_eval(p, flipped)) / 2
            assert naive.naive_eval(deriv, bits) == pytest.approx(expected, abs=1e-12)


def test_derivative_mass_examples():
    top = MultilinearPolynomial(3, Basis.FOURIER_PM1, {frozenset({1, 2, 3}): 1.0})
    assert boolfn.derivative_mass(top) == pytest.approx(3.0)
    const = MultilinearPolynomial(3, Basis.FOURIER_PM1, {frozenset(): 1.0})
    assert boolfn.derivative_mass(const) == 0.0


def test_derivative_mass_equals_sum_of_derivative_norms():
    rng = np.random.default_rng(9)
    for _ in range(10):
        tt = random_table(rng, 4)
        p = boolfn.fourier_transform(tt)
        mass = boolfn.derivative_mass(p)
        # independent route: mean of the squared pointwise derivative values
        total = 0.0
        signed = tt.signed()
        for i in range(1, 5):
            idx = np.arange(16)
            deriv_values = (signed - signed[idx ^ (1 << (4 - i))]) / 2.0
            total += float(np.mean(deriv_values ** 2))
        assert mass == pytest.approx(total, abs=1e-12)
        assert mass <= boolfn.degree(p) * sum(v * v for v in p.coeffs.values()) + 1e-12


# ---------------------------------------------------------------------------
# norms


def test_norm_examples():
    chi = MultilinearPolynomial(3, Basis.FOURIER_PM1, {frozenset({1, 3}): 1.0})
    for q in (1, 2, 3.5, 6):
        assert boolfn.p_norm(chi, q) == pytest.approx(1.0)
    rng = np.random.default_rng(10)
    tt = random_table(rng, 4)
    p = boolfn.fourier_transform(tt)
    assert boolfn.expectation(p) == pytest.approx(p.coeff(frozenset()), abs=1e-12)
    half_sum = MultilinearPolynomial(
        2, Basis.FOURIER_PM1, {frozenset({1}): 0.5, frozenset({2}): 0.5})
    # values over the 4 inputs are (1, 0, 0, -1), so E|p|^4 = 1/2
    assert boolfn.p_norm(half_sum, 4) ** 4 == pytest.approx(0.5, abs=1e-12)


def test_norms_monotone_in_q():
    rng = np.random.default_rng(12)
    p = random_poly(rng, 6, Basis.FOURIER_PM1)
    norms = [boolfn.p_norm(p, q) for q in (1, 2, 3, 4, 6, 8)]
    assert all(a <= b + 1e-12 for a, b in zip(norms, norms[1:]))


def test_p_norm_rejects_q_below_one():
    p = MultilinearPolynomial(2, Basis.FOURIER_PM1, {frozenset({1}): 1.0})
    with pytest.raises(ValueError):
        boolfn.p_norm(p, 0.5)


# ---------------------------------------------------------------------------
# builders


def test_or_and_majority_builders():
    assert list(boolfn.or_fn(1).values) == list(boolfn.dictator(1, 1).values)
    or3 = boolfn.or_fn(3)
    assert or3.value_at(0) == 0 and all(or3.value_at(r) == 1 for r in range(1, 8))
    and2 = boolfn.and_fn(2)
    assert list(and2.values) == [0, 0, 0, 1]
    maj = boolfn.majority(3)
    for r in range(8):
        bits = boolfn.row_bits(r, 3)
        assert maj.value_at(r) == (1 if sum(bits) >= 2 else 0)
    with pytest.raises(ValueError):
        boolfn.majority(4)


def test_address_function_semantics():
    tt = boolfn.address_function(2)
    for r in range(8):
        x1, x2, y = boolfn.row_bits(r, 3)
        assert tt.value_at(r) == (x1 if y == 0 else x2)
    with pytest.raises(ValueError):
        boolfn.address_function(3)
    with pytest.raises(ValueError):
        boolfn.address_function(1)


# ---------------------------------------------------------------------------
# exhaustive sweep


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exhaustive_sweep_small(n):
    result = boolfn.exhaustive_inequality_sweep(n)
    assert result.ok
    assert result.functions == 1 << (1 << n)


def test_sweep_rejects_big_n():
    with pytest.raises(boolfn.CapacityError):
        boolfn.exhaustive_inequality_sweep(5)


# ---------------------------------------------------------------------------
# stats


def test_stats_fields_consistent():
    tt = boolfn.majority(3)
    st_ = boolfn.stats(tt)
    p = boolfn.fourier_transform(tt)
    assert st_.expectation == pytest.approx(p.coeff(frozenset()), abs=1e-12)
    assert st_.variance == pytest.approx(
        sum(v * v for s, v in p.coeffs.items() if s), abs=1e-12)
    assert st_.degree == 3
    assert st_.sensitivity == 2
    assert st_.influences == (Fraction(1, 2),) * 3


# ---------------------------------------------------------------------------
# text format


def test_text_roundtrip():
    tt = boolfn.majority(3)
    text = boolfn.format_truth_table(tt)
    parsed = boolfn.parse_truth_table_text(text)
    assert parsed.n == tt.n and np.array_equal(parsed.values, tt.values)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("x\n0101\n", 1),
    ("2\n010\n", 2),
    ("2\n01012\n", 2),
    ("2\n0a01\n", 2),
    ("2\n0101\nmore\n", 3),
])
def test_text_rejections(text, line):
    with pytest.raises(boolfn.TruthTableParseError) as err:
        boolfn.parse_truth_table_text(text)
    assert err.value.line == line
