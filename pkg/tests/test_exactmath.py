from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import member_dp, member_table
from wphyper.exactmath import (
    SYLVESTER_MAX_INDEX,
    BudgetExceeded,
    apery_set,
    approx,
    exceeds_double_exponential,
    floor_log2,
    representation_count,
    semigroup_member,
    sylvester,
)

gens_st = st.lists(st.integers(1, 50), min_size=1, max_size=5)


def test_sylvester_prefix():
    assert [sylvester(m) for m in range(6)] == [2, 3, 7, 43, 1807, 3263443]


@pytest.mark.parametrize("m", range(1, 9))
def test_sylvester_product_and_reciprocals(m):
    prod = 1
    for j in range(m):
        prod *= sylvester(j)
    assert sylvester(m) == prod + 1
    # 1/s_0 + ... + 1/s_{m-1} = 1 - 1/(s_m - 1)
    assert sum(Fraction(1, sylvester(j)) for j in range(m)) == 1 - Fraction(1, sylvester(m) - 1)


def test_sylvester_range():
    with pytest.raises(ValueError):
        sylvester(-1)
    with pytest.raises(ValueError):
        sylvester(SYLVESTER_MAX_INDEX + 1)
    # s_m has roughly 2^(m-1) bits
    assert sylvester(20).bit_length() > 1 << 18


@settings(max_examples=400)
@given(st.integers(0, 500), gens_st)
def test_semigroup_member_matches_dp(t, gens):
    assert semigroup_member(t, gens) == member_dp(t, gens)


@settings(max_examples=150)
@given(st.integers(0, 500), gens_st, st.sampled_from(["apery", "dp", "branch"]))
def test_each_strategy_matches_dp(t, gens, strategy):
    assert semigroup_member(t, gens, strategy=strategy) == member_dp(t, gens)


@settings(max_examples=150)
@given(st.lists(st.integers(2, 30), min_size=2, max_size=4))
def test_apery_set_is_least_element_per_residue(gens):
    gens = tuple(sorted(set(gens)))
    m = gens[0]
    w = apery_set(gens)
    assert len(w) == m
    top = 2 * m * gens[-1]
    table = member_table(top, gens)
    for k in range(m):
        hits = [t for t in range(k, top + 1, m) if table[t]]
        if w[k] == -1:
            assert not hits
        else:
            assert hits and hits[0] == w[k]


def test_large_member_with_two_generators():
    a, b = 10**20, 10**20 + 1
    frobenius = a * b - a - b
    assert semigroup_member(frobenius, [a, b]) is False
    assert semigroup_member(frobenius + 1, [a, b])
    assert semigroup_member(frobenius + a, [a, b])


def test_budget_exceeded():
    gens = [10**9 + 7, 10**9 + 9, 10**9 + 21]
    with pytest.raises(BudgetExceeded):
        semigroup_member(10**12 + 3, gens, apery_limit=10, dp_limit=10, branch_limit=10)


@settings(max_examples=200)
@given(st.integers(0, 80), st.lists(st.integers(1, 12), min_size=1, max_size=4))
def test_representation_count(t, gens):
    from oracles import monomials

    exact = len(monomials(gens, t))
    assert representation_count(t, gens, cap=2) == min(2, exact)


@given(st.fractions(min_value=Fraction(1, 10**30), max_value=10**30))
def test_floor_log2(x):
    k = floor_log2(x)
    assert Fraction(2) ** k <= x < Fraction(2) ** (k + 1)


def test_exceeds_double_exponential_even_is_exact():
    assert exceeds_double_exponential(17, 4)
    assert not exceeds_double_exponential(16, 4)
    assert exceeds_double_exponential(16, 4, strict=False)
    assert not exceeds_double_exponential(Fraction(1, 2), 0)


@settings(max_examples=300)
@given(st.integers(2, 10**12), st.sampled_from([1, 3, 5, 7]))
def test_exceeds_double_exponential_odd_is_sound(v, n):
    # claimed v > 2^(2^(n/2)), i.e. log2(v)^2 > 2^n
    if exceeds_double_exponential(v, n):
        k = floor_log2(v)
        assert k * k >= 1 << n and (1 << k) <= v


def test_approx():
    assert approx(Fraction(759, 10**7)) == "7.59e-5"
    assert approx(Fraction(1, 330), 2) == "3.0e-3"
    assert approx(10**400 + 1, 2) == "1.0e+400"
    assert approx(-Fraction(3, 2)) == "-1.50e+0"
