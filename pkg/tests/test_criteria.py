from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hugegames.criteria import (
    DiscountedSum,
    LimitOfMeans,
    Overtaking,
    PayoffModel,
    SimpleSum,
    compare,
    criterion_flags,
    discounted_value,
    evaluate,
    eval_limit_means,
    parse_criterion,
    simple_value,
)
from hugegames.game import StrategicGame, strategic_as_extensive
from hugegames.nonstd import NEG_INF, ONE, POS_INF, ExtReal, NonStdNum, TAU
from hugegames.repeated import RepeatedGameSpec, lift_preferences
from hugegames.views import FiniteHorizon, Segment, SegmentedWholeHistory, ViewKind

A, B, C = ("a",), ("b",), ("c",)
TABLE = {A: {"1": 3}, B: {"1": -1}, C: {"1": 0}}
MODEL = PayoffModel(TABLE)


def run(*pieces, view=ViewKind.PERSPECTIVE):
    return SegmentedWholeHistory.of(pieces, view)


small = st.integers(-5, 5)
deltas = st.builds(Fraction, st.integers(1, 9), st.just(10))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([A, B, C]), min_size=1, max_size=7), deltas)
def test_finite_values_match_direct_sums(comps, delta):
    h = SegmentedWholeHistory.explicit(comps, len(comps))
    u = [TABLE[c]["1"] for c in comps]
    assert evaluate(SimpleSum(), h, MODEL, "1") == ExtReal.finite(sum(u))
    assert evaluate(DiscountedSum(delta), h, MODEL, "1") == ExtReal.finite(sum(delta**t * x for t, x in enumerate(u)))
    assert evaluate(LimitOfMeans(), h, MODEL, "1") == ExtReal.finite(Fraction(sum(u), len(u)))
    assert evaluate(Overtaking(), h, MODEL, "1") == ExtReal.finite(sum(u))


def test_simple_sum_collapses_huge_runs():
    assert evaluate(SimpleSum(), run((TAU, A)), MODEL, "1") == POS_INF
    assert evaluate(SimpleSum(), run((TAU, B)), MODEL, "1") == NEG_INF
    assert evaluate(SimpleSum(), run((ONE, A), (TAU - 1, C)), MODEL, "1") == ExtReal.finite(3)
    assert simple_value(run((TAU - 2, A), (NonStdNum.of(2), B)), MODEL, "1") == TAU.scale(3) - 8


def test_discounted_sum_of_a_huge_constant_run():
    value = discounted_value(run((TAU, A)), MODEL, "1", Fraction(1, 2))
    # 3 * (1 - (1/2)^tau) / (1/2): exactly 6 less an infinitesimal
    assert value.unit_coef == 6 and value.residue < 0
    assert evaluate(DiscountedSum(Fraction(1, 2)), run((TAU, A)), MODEL, "1") == ExtReal.finite(6)
    near = run((NonStdNum.of(2), C), (TAU - 2, A))
    assert evaluate(DiscountedSum(Fraction(1, 2)), near, MODEL, "1") == ExtReal.finite(Fraction(3, 2))


def test_overtaking_needs_no_value():
    h1 = run((TAU - 1, A), (ONE, B))
    h2 = run((TAU, A))
    assert evaluate(Overtaking(), h1, MODEL, "1") is None
    assert compare(Overtaking(), h1, h2, MODEL, "1") == -1
    assert compare(SimpleSum(), h1, h2, MODEL, "1") == 0


def test_limit_of_means_weighs_fractions():
    half = TAU.scale(Fraction(1, 2))
    h = run((half, A), (half, B), view=ViewKind.BIRDSEYE)
    assert eval_limit_means(h, MODEL, "1") == 1


@st.composite
def birdseye_runs(draw):
    cuts = sorted(set(draw(st.lists(st.builds(Fraction, st.integers(1, 7), st.just(8)), max_size=3))))
    bounds = [Fraction(0), *cuts, Fraction(1)]
    return [(TAU.scale(hi - lo), draw(st.sampled_from([A, B, C]))) for lo, hi in zip(bounds, bounds[1:])]


@settings(max_examples=200, deadline=None)
@given(birdseye_runs(), st.lists(st.sampled_from([A, B, C]), min_size=1, max_size=3), st.data())
def test_monad_patches_leave_the_mean_unchanged(runs, patch, data):
    """Replacing finitely many single periods changes nothing under limit of means."""
    base = SegmentedWholeHistory.of(runs, ViewKind.BIRDSEYE)
    k = data.draw(st.integers(0, len(runs) - 1))
    length, payload = runs[k]
    pieces = runs[:k] + [(length - len(patch), payload)] + [(ONE, p) for p in patch] + runs[k + 1:]
    patched = SegmentedWholeHistory.of(pieces, ViewKind.BIRDSEYE)
    assert eval_limit_means(patched, MODEL, "1") - eval_limit_means(base, MODEL, "1") == 0


def pd_spec(table):
    labels = [("S", "S"), ("S", "C"), ("C", "S"), ("C", "C")]
    sg = StrategicGame(("1", "2"), {"1": ("S", "C"), "2": ("S", "C")}, {k: {"1": v, "2": w} for k, (v, w) in zip(labels, table)})
    g = strategic_as_extensive(sg)
    return RepeatedGameSpec(g, frozenset(g.terminals), FiniteHorizon(3)), PayoffModel(g.payoffs)


tables = st.lists(st.tuples(small, small), min_size=4, max_size=4)


def check_sooner_better_and_commutativity(table, delta, i, j):
    labels = ("SS", "SC", "CS", "CC")
    model = PayoffModel({(k,): {"1": v, "2": w} for k, (v, w) in zip(labels, table)})
    x, y = (labels[i],), (labels[j],)

    def whole(w):
        return SegmentedWholeHistory.explicit(w, 3)

    for p in ("1", "2"):
        if model.table[x][p] > model.table[y][p]:
            # the better outcome first is strictly better under discounting
            assert compare(DiscountedSum(delta), whole((x, y, y)), whole((y, x, y)), model, p) == 1
            assert compare(DiscountedSum(delta), whole((y, x, y)), whole((y, y, x)), model, p) == 1
        for c in (SimpleSum(), LimitOfMeans(), Overtaking()):
            assert compare(c, whole((x, y, x)), whole((y, x, x)), model, p) == 0


LEMMA_ARGS = (tables, deltas, st.integers(0, 3), st.integers(0, 3))
test_sooner_the_better_and_commutativity = settings(max_examples=100, deadline=None)(given(*LEMMA_ARGS)(check_sooner_better_and_commutativity))


def lifted_pairs_respected(spec, model, criterion, **lift):
    rel = lift_preferences(spec, players=["1"], **lift)["1"]
    n = spec.n
    return all(
        compare(criterion, SegmentedWholeHistory.explicit(a, n), SegmentedWholeHistory.explicit(b, n), model, "1") >= 0
        for a, b in rel.generators
    )


@settings(max_examples=20, deadline=None)
@given(tables)
def test_lifted_generators_agree_with_criteria(table):
    spec, model = pd_spec(table)
    spec = spec.with_horizon(FiniteHorizon(2))
    for c in (SimpleSum(), DiscountedSum(Fraction(1, 2)), LimitOfMeans()):
        assert lifted_pairs_respected(spec, model, c)
    assert lifted_pairs_respected(spec, model, DiscountedSum(Fraction(1, 3)), sooner_better=True)
    assert lifted_pairs_respected(spec, model, SimpleSum(), commutativity=True)


def test_flags():
    assert criterion_flags(DiscountedSum(Fraction(1, 2))).sooner_better
    assert not criterion_flags(DiscountedSum(Fraction(1, 2))).commutativity
    assert criterion_flags(SimpleSum()).commutativity
    assert not criterion_flags(LimitOfMeans()).huge_transitivity
    assert criterion_flags(Overtaking()).strict_separability


@pytest.mark.parametrize("text", ["simple", "overtaking", "limit-of-means", "discounted:1/3"])
def test_criterion_text_round_trips(text):
    assert str(parse_criterion(text)) == text


def test_bad_inputs():
    with pytest.raises(ValueError):
        parse_criterion("discounted:0.5")
    with pytest.raises(ValueError):
        discounted_value(run((TAU, A)), MODEL, "1", 1)
    with pytest.raises(ValueError):
        PayoffModel({A: {"1": TAU}})
    with pytest.raises(ValueError):
        evaluate(SimpleSum(), run((TAU, A), view=ViewKind.BIRDSEYE), MODEL, "1")
