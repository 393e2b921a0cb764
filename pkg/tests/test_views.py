from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hugegames.nonstd import NonStdNum, POS_INF, TAU, ExtReal
from hugegames.views import (
    Cycle,
    DistantFuture,
    FiniteHorizon,
    FractionInterval,
    HugeHorizon,
    MonadPoint,
    NearEnd,
    NearFuture,
    Segment,
    SegmentedWholeHistory,
    ViewKind,
    birdseye_choice_point,
    birdseye_measure,
    canonicalize,
    classify_period,
    consistent_with_view,
    perspective_choice_point,
    perspective_measure,
    period_of,
)

A, B = ("a",), ("b",)


def test_perspective_choice_points_alternate():
    assert [str(perspective_choice_point(i)) for i in range(5)] == [
        "distant-future",
        "near-end(0)",
        "near-future(0)",
        "near-end(1)",
        "near-future(1)",
    ]


def test_birdseye_choice_points_are_dyadic_midpoints():
    assert birdseye_choice_point(0, 0) == 0
    assert birdseye_choice_point(1, 0) == 1
    assert birdseye_choice_point(2, 0) == Fraction(1, 2)
    assert [birdseye_choice_point(3, j) for j in range(2)] == [Fraction(1, 4), Fraction(3, 4)]
    with pytest.raises(ValueError):
        MonadPoint(3, 2)
    with pytest.raises(ValueError):
        birdseye_choice_point(1, 1)


@given(st.integers(2, 9))
def test_each_level_covers_new_midpoints(i):
    level = {birdseye_choice_point(i, j) for j in range(2 ** (i - 2))}
    earlier = {birdseye_choice_point(k, j) for k in range(i) for j in range(2 ** max(k - 2, 0))}
    assert len(level) == 2 ** (i - 2)
    assert not level & earlier
    assert all(0 < f < 1 and f.denominator == 2 ** (i - 1) for f in level)


def test_measures():
    assert perspective_measure([NearFuture(0), NearEnd(3)]) == ExtReal.finite(2)
    assert perspective_measure([NearFuture(0), DistantFuture()]) == POS_INF
    assert birdseye_measure(MonadPoint(2, 0)) == 0
    assert birdseye_measure(FractionInterval(Fraction(1, 4), Fraction(3, 4))) == Fraction(1, 2)
    with pytest.raises(ValueError):
        FractionInterval(Fraction(1, 2), Fraction(1, 2))


def test_representative_periods():
    huge = HugeHorizon()
    assert period_of(NearFuture(2), huge) == NonStdNum.of(3)
    assert period_of(NearEnd(0), huge) == TAU
    assert period_of(DistantFuture(), huge) == TAU.scale(Fraction(1, 2))
    assert period_of(NearEnd(1), FiniteHorizon(7)) == NonStdNum.of(6)


@given(st.integers(1, 40), st.integers(0, 6), st.data())
def test_classify_period_partitions_a_concrete_horizon(total, cutoff, data):
    t = data.draw(st.integers(1, total))
    cls = classify_period(t, total, cutoff)
    if isinstance(cls, NearFuture):
        assert cls.n == t - 1 < cutoff
    elif isinstance(cls, NearEnd):
        assert cls.n == total - t < cutoff and t - 1 >= cutoff
    else:
        assert t - 1 >= cutoff and total - t >= cutoff


payloads = st.sampled_from([A, B, (), Cycle((A, B))])


@st.composite
def finite_runs(draw):
    runs = draw(st.lists(st.tuples(st.integers(1, 4), payloads), min_size=1, max_size=6))
    return SegmentedWholeHistory(tuple(Segment(NonStdNum.of(k), p) for k, p in runs), horizon=sum(k for k, _ in runs))


@settings(max_examples=200, deadline=None)
@given(finite_runs())
def test_canonicalize_is_idempotent_and_keeps_periods(h):
    c = canonicalize(h)
    assert canonicalize(c) == c
    assert c.components() == h.components()
    for x, y in zip(c.segments, c.segments[1:]):
        # equal neighbours survive only when a finite cycle ends mid-unit
        if x.payload == y.payload:
            assert isinstance(x.payload, Cycle) and x.length.unit_coef % len(x.payload.unit)


@settings(max_examples=200, deadline=None)
@given(finite_runs())
def test_count_matches_expanded_periods(h):
    expected = sum(1 for comp in h.components() if comp == A)
    assert h.count(lambda x: x == A) == NonStdNum.of(expected)


def test_segment_invariants():
    with pytest.raises(ValueError):
        Segment(NonStdNum.of(0), A)
    with pytest.raises(ValueError):
        Segment(TAU.scale(2), A)
    with pytest.raises(ValueError):
        SegmentedWholeHistory((Segment(TAU, A), Segment(NonStdNum.of(1), B)))


def test_view_consistency():
    perspective = SegmentedWholeHistory((Segment(NonStdNum.of(2), A), Segment(TAU - 2, B)))
    assert consistent_with_view(perspective, ViewKind.PERSPECTIVE)
    assert not consistent_with_view(perspective, ViewKind.BIRDSEYE)
    halves = SegmentedWholeHistory((Segment(TAU.scale(Fraction(1, 2)), A), Segment(TAU.scale(Fraction(1, 2)), B)), ViewKind.BIRDSEYE)
    assert consistent_with_view(halves, ViewKind.BIRDSEYE)
    assert not consistent_with_view(halves, ViewKind.PERSPECTIVE)


def test_payload_lookup_and_rendering():
    h = SegmentedWholeHistory((Segment(NonStdNum.of(2), A), Segment(TAU - 2, B)))
    assert h.payload_at(NonStdNum.of(2)) == A
    assert h.payload_at(TAU.scale(Fraction(1, 2))) == B
    assert h.render() == "a*2, b*tau-2"
    explicit = SegmentedWholeHistory.explicit([A, A, B], 5)
    assert explicit.components() == [A, A, B, (), ()]
    assert explicit.played() == [A, A, B]


def test_interval_monad_count_endpoints():
    from hugegames.views import interval_monad_count

    # level-k monads sit at tau*j/2^(k-1); the lower endpoint is excluded, the upper included
    assert interval_monad_count(3, 0, 100, 100) == 3
    assert interval_monad_count(3, 25, 50, 100) == 1
    assert interval_monad_count(3, 24, 49, 100) == 1
    assert interval_monad_count(1, 0, 100, 100) == 0
