from fractions import Fraction

import pytest

from hugegames import catalog
from hugegames.criteria import DiscountedSum, LimitOfMeans, Overtaking, PayoffModel, SimpleSum
from hugegames.equilibria import (
    ONE_SHOT,
    TAIL,
    WHOLE,
    FamilyPreconditionError,
    default_suite,
    exhaustive_check,
    expected_payoffs,
    family_discount,
    family_mixed,
    family_simple_sum,
    family_spe,
    is_mixed_nash,
    mixed_unit,
    verify_symbolic_spe,
)
from hugegames.nonstd import TAU
from hugegames.repeated import build_finite_repeated, criterion_preferences
from hugegames.views import DistantFuture, FiniteHorizon, HugeHorizon, NearEnd, NearFuture, ViewKind

PERSPECTIVE = HugeHorizon(ViewKind.PERSPECTIVE)
BIRDSEYE = HugeHorizon(ViewKind.BIRDSEYE)
CRITERIA = [SimpleSum(), DiscountedSum(Fraction(1, 2)), Overtaking(), LimitOfMeans()]


def applicable_families(entry, spec):
    for name in entry.families:
        try:
            yield name, entry.family(name, spec)
        except FamilyPreconditionError:
            continue


def cross_validate(identifier, n):
    """Compare suite and brute-force verdicts; return (comparisons, disagreements)."""
    entry = catalog.get(identifier)
    spec = entry.spec(FiniteHorizon(n))
    model = entry.model()
    families = list(applicable_families(entry, spec))
    assert families
    disagreements = []
    comparisons = 0
    for criterion in CRITERIA:
        expanded = build_finite_repeated(spec, criterion_preferences(spec, criterion, model))
        for name, fam in families:
            suite = verify_symbolic_spe(spec, fam, criterion, model, with_variants=False).verified
            exact = exhaustive_check(spec, fam, criterion, model, expanded=expanded).ok
            comparisons += 1
            if suite != exact:
                disagreements.append((name, str(criterion), suite, exact))
    return comparisons, disagreements


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("identifier", catalog.IDS)
def test_suite_agrees_with_exhaustive_check(identifier, n):
    # longer horizons are covered by the acceptance suite
    comparisons, disagreements = cross_validate(identifier, n)
    assert comparisons and disagreements == []


def test_suite_positions_cover_both_ends():
    entry = catalog.get("centipede")
    spec = entry.spec(PERSPECTIVE)
    suite = default_suite(spec, family_spe(spec), SimpleSum(), depth=2)
    positions = {str(d.position) for d in suite}
    assert {str(p) for p in (NearFuture(0), NearFuture(2), DistantFuture(), NearEnd(0), NearEnd(2))} <= positions
    assert {d.scope for d in suite} == {ONE_SHOT, WHOLE, TAIL}
    order = [d.scope for d in suite]
    assert order.index(WHOLE) > max(i for i, s in enumerate(order) if s == ONE_SHOT)


def test_simple_sum_family_needs_positive_payoffs():
    entry = catalog.get("pd-negative")
    spec = entry.spec(PERSPECTIVE)
    with pytest.raises(FamilyPreconditionError):
        family_simple_sum(spec, ("SS",), entry.model())
    forced = family_simple_sum(spec, ("SS",), entry.model(), force=True)
    report = verify_symbolic_spe(spec, forced, SimpleSum(), entry.model())
    assert report.verdict == "refuted"
    assert (report.witness.baseline_value, report.witness.deviation_value) == ("-inf", "0")


def test_discount_family_is_verified_and_continuation_is_not():
    entry = catalog.get("centipede")
    spec = entry.spec(PERSPECTIVE)
    # stopping pays player 2 three now; continuing forever pays 2/(1-delta), less when delta < 1/3
    delta = DiscountedSum(Fraction(1, 5))
    assert verify_symbolic_spe(spec, family_discount(spec, Fraction(1, 5)), delta, entry.model()).verified
    cont = verify_symbolic_spe(spec, family_simple_sum(spec, ("R", "r"), entry.model()), delta, entry.model())
    assert not cont.verified
    assert cont.witness.deviation.scope == ONE_SHOT
    assert str(cont.witness.deviation.position).startswith("near-future")


def test_criterion_must_match_the_view():
    entry = catalog.get("centipede")
    spec = entry.spec(BIRDSEYE)
    with pytest.raises(ValueError):
        verify_symbolic_spe(spec, family_spe(spec), SimpleSum(), entry.model())


def test_mixed_unit_matches_the_distribution():
    sigma = catalog.BOS_SIGMA
    unit = mixed_unit(sigma)
    assert len(unit) == 9
    for player, dist in enumerate(sigma):
        for k, prob in enumerate(dist):
            assert Fraction(sum(1 for combo in unit if combo[player] == k), len(unit)) == prob


def test_bos_mixed_equilibrium():
    entry = catalog.get("bos")
    g = entry.spec().constituent
    assert is_mixed_nash(g, entry.model(), catalog.BOS_SIGMA)[0]
    assert expected_payoffs(g, entry.model(), catalog.BOS_SIGMA) == {"1": Fraction(2, 3), "2": Fraction(2, 3)}
    uniform = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2)))
    ok, reason = is_mixed_nash(g, entry.model(), uniform)
    assert not ok and reason
    spec = entry.spec(BIRDSEYE)
    report = verify_symbolic_spe(spec, family_mixed(spec, catalog.BOS_SIGMA, entry.model()), LimitOfMeans(), entry.model())
    assert report.verified
    assert report.path_values == {"1": "2/3", "2": "2/3"}


def test_mixed_family_rejects_sequential_games():
    entry = catalog.get("centipede")
    spec = entry.spec(BIRDSEYE)
    with pytest.raises(FamilyPreconditionError):
        family_mixed(spec, catalog.BOS_SIGMA, entry.model())


def test_report_lines_are_deterministic():
    entry = catalog.get("chain-store")
    spec = entry.spec(PERSPECTIVE)
    fam = entry.family("discount", spec)
    first = verify_symbolic_spe(spec, fam, DiscountedSum(Fraction(1, 2)), entry.model())
    second = verify_symbolic_spe(spec, fam, DiscountedSum(Fraction(1, 2)), entry.model())
    assert [r.line() for r in first.results] == [r.line() for r in second.results]
    assert first.path.horizon == TAU
