from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hugegames.nonstd import (
    NEG_INF,
    POS_INF,
    ExtReal,
    NonStdNum,
    Residue,
    TAU,
    ZERO,
    collapse,
    compact_nonstd,
    format_nonstd,
    format_rational,
    geometric_sum,
    geometric_tail,
    indiscernible,
    nsn_cmp,
    parse_extreal,
    parse_nonstd,
    parse_rational,
)

rationals = st.builds(Fraction, st.integers(-60, 60), st.integers(1, 12))
residues = st.sampled_from(list(Residue))
nums = st.builds(NonStdNum, rationals, rationals, residues)
plain = st.builds(NonStdNum, rationals, rationals)
extreals = st.one_of(st.just(NEG_INF), st.just(POS_INF), rationals.map(ExtReal.finite))

MANY = settings(max_examples=300, deadline=None)
SOME = settings(max_examples=200, deadline=None)


def check_order_and_indiscernibility(x, y, z):
    # order: total, antisymmetric, transitive
    assert (x < y) + (x == y) + (y < x) == 1
    assert nsn_cmp(x, y) == -nsn_cmp(y, x)
    if x <= y and y <= z:
        assert x <= z
    # indiscernibility: an equivalence that the order respects
    assert indiscernible(x, x)
    assert indiscernible(x, y) == indiscernible(y, x)
    if indiscernible(x, y) and indiscernible(y, z):
        assert indiscernible(x, z)
    if x <= y:
        assert not collapse(y) < collapse(x)


LAW_ARGS = (nums, nums, nums)
test_order_and_indiscernibility_laws = MANY(given(*LAW_ARGS)(check_order_and_indiscernibility))


@SOME
@given(plain, plain, plain)
def test_addition_is_a_commutative_group_compatible_with_order(x, y, z):
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert x + ZERO == x
    assert x - x == ZERO
    if x < y:
        assert x + z < y + z


@SOME
@given(nums, st.builds(Fraction, st.integers(1, 100), st.integers(1, 10)))
def test_positive_scaling_preserves_order(x, c):
    assert (x.scale(c) < ZERO) == (x < ZERO)


@SOME
@given(nums)
def test_text_round_trips(x):
    assert parse_nonstd(format_nonstd(x)) == x
    assert parse_nonstd(compact_nonstd(x)) == x


@SOME
@given(extreals, extreals, extreals)
def test_extended_reals_are_totally_ordered(a, b, c):
    assert (a < b) + (a == b) + (b < a) == 1
    if a < b and b < c:
        assert a < c
    assert NEG_INF <= a <= POS_INF
    assert parse_extreal(str(a)) == a


def test_collapse_examples():
    assert collapse(TAU) == POS_INF
    assert collapse(-TAU + 10**6) == NEG_INF
    assert collapse(NonStdNum.of(Fraction(3, 4))) == ExtReal.finite(Fraction(3, 4))
    assert collapse(NonStdNum(0, 2, Residue.POS)) == ExtReal.finite(2)
    assert NonStdNum(0, 2, Residue.NEG) < NonStdNum.of(2) < NonStdNum(0, 2, Residue.POS)


def test_huge_dominates_every_finite():
    assert NonStdNum.of(10**9) < TAU.scale(Fraction(1, 10**9))
    assert TAU - 1 < TAU
    assert TAU.scale(Fraction(1, 2)) < TAU - 10**9


@pytest.mark.parametrize("text", ["0.5", "1e3", "abc", "1/0"])
def test_rationals_must_be_exact(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_rational_text():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert compact_nonstd(TAU) == "tau"
    assert compact_nonstd(TAU - 1) == "tau-1"
    assert compact_nonstd(NonStdNum.tau(Fraction(1, 2), 3)) == "1/2*tau+3"


@given(st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=20), st.integers(0, 5), st.integers(0, 12))
def test_geometric_closed_forms_match_direct_sums(delta, first, count):
    assert geometric_sum(delta, first, count) == sum(delta ** (first + j) for j in range(count))
    assert geometric_tail(delta, first) == delta**first / (1 - delta)
