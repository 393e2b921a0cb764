from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hugegames import catalog
from hugegames.criteria import DiscountedSum, LimitOfMeans, SimpleSum
from hugegames.game import STRICT, outcome, spe_profiles
from hugegames.nonstd import NonStdNum, TAU
from hugegames.repeated import (
    DC_EXACT,
    HasseError,
    HypothesesNotMet,
    RepeatedGameSpec,
    SymbolicChain,
    build_finite_repeated,
    check_dynamic_consistency,
    check_huge_transitivity,
    check_weak_separability,
    criterion_preferences,
    hasse,
    lift_preferences,
    repeat_profile,
    split_flat,
    verify_prop_ext,
    whole_histories,
)
from hugegames.views import FiniteHorizon, HugeHorizon, ViewKind

CHAIN = catalog.get("chain-store")
CENTIPEDE = catalog.get("centipede")
PD = catalog.get("pd-positive")


def count_wholes(terminals, connected, n):
    # oracle: terminal whole histories stop at an unconnected outcome or at n
    if n == 1:
        return terminals
    return (terminals - connected) + connected * count_wholes(terminals, connected, n - 1)


@pytest.mark.parametrize("entry", [CHAIN, CENTIPEDE, PD], ids=lambda e: e.identifier)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_expansion_has_the_expected_terminals(entry, n):
    spec = entry.spec(FiniteHorizon(n))
    g = spec.constituent
    expanded = build_finite_repeated(spec, criterion_preferences(spec, SimpleSum(), entry.model()))
    assert len(expanded.game.terminals) == count_wholes(len(g.terminals), len(spec.connected), n)
    for z in expanded.game.terminals:
        assert expanded.flat(expanded.whole(z)) == z


def test_outside_players_are_copied_per_period():
    spec = CHAIN.spec(FiniteHorizon(3))
    expanded = build_finite_repeated(spec)
    assert set(expanded.game.players) == {"CS", "LS@1", "LS@2", "LS@3"}
    assert expanded.game.outside == frozenset({"LS@1", "LS@2", "LS@3"})


def test_split_flat():
    spec = CENTIPEDE.spec(FiniteHorizon(3))
    assert split_flat(spec, ("R", "r", "R")) == ([("R", "r")], ("R",))
    with pytest.raises(ValueError):
        split_flat(spec, ("D", "R"))


def test_whole_histories_count():
    spec = CHAIN.spec(FiniteHorizon(2))
    assert len(whole_histories(spec)) == 3 + 3 * 3


@pytest.mark.parametrize("n", [2, 3, 4])
def test_repeating_the_constituent_spe_is_subgame_perfect(n):
    for entry in (CHAIN, CENTIPEDE):
        spec = entry.spec(FiniteHorizon(n))
        report = verify_prop_ext(spec, SimpleSum(), entry.model(), STRICT)
        assert report.verified, report.witness


def test_prop_ext_refuses_without_hypotheses():
    with pytest.raises(HypothesesNotMet):
        verify_prop_ext(CENTIPEDE.spec(HugeHorizon(ViewKind.BIRDSEYE)), LimitOfMeans(), CENTIPEDE.model())


def test_centipede_repeated_spe_is_unique_stop():
    spec = CENTIPEDE.spec(FiniteHorizon(3))
    expanded = build_finite_repeated(spec, criterion_preferences(spec, SimpleSum(), CENTIPEDE.model()))
    found = spe_profiles(expanded.game, STRICT)
    assert len(found) == 1
    assert found[0] == repeat_profile(expanded, spec.constituent_spe())
    assert outcome(expanded.game, found[0]) == ("D",)


def test_dynamic_consistency_classes():
    spec = CENTIPEDE.spec(FiniteHorizon(2))
    assert check_dynamic_consistency(spec, SimpleSum(), CENTIPEDE.model()) == {"1": DC_EXACT, "2": DC_EXACT}
    pd = PD.spec(FiniteHorizon(2))
    classes = check_dynamic_consistency(pd, SimpleSum(), PD.model())
    assert set(classes.values()) <= {"exact", "relaxed_weakly_better", "relaxed_weakly_worse", "fails"}


def test_hasse_goldens():
    assert catalog.hasse_edges(CHAIN, "CS") == catalog.CHAIN_STORE_CS_EDGES
    assert catalog.hasse_edges(CHAIN, "LS") == catalog.CHAIN_STORE_LS_EDGES
    assert catalog.hasse_edges(CENTIPEDE, "1", use_dynamic_consistency=True) == catalog.CENTIPEDE_P1_EDGES
    assert catalog.hasse_edges(CENTIPEDE, "2", use_dynamic_consistency=True) == catalog.CENTIPEDE_P2_EDGES
    assert catalog.hasse_edges(PD, "1", commutativity=True) == catalog.PD_COMMUTATIVE_EDGES_1


def test_hasse_is_a_transitive_reduction():
    import networkx as nx

    spec = PD.spec(FiniteHorizon(2))
    rel = lift_preferences(spec, players=["1"])["1"]
    diagram = hasse(rel)
    graph = nx.DiGraph(diagram.edges)
    assert nx.is_directed_acyclic_graph(graph)
    assert sorted(nx.transitive_reduction(graph).edges) == sorted(graph.edges)
    dot = diagram.to_dot("pd")
    assert dot.startswith('digraph "pd"') and dot.count("dir=none") == len(diagram.edges)


def test_hasse_rejects_non_antisymmetric_input():
    from hugegames.game import RelationPreference

    rel = RelationPreference([("a", "b"), ("b", "c"), ("c", "a")])
    diagram = hasse(rel)
    assert len(diagram.classes) == 1 and not diagram.edges
    assert issubclass(HasseError, ValueError)


def test_criterion_preferences_are_weakly_separable():
    spec = PD.spec(FiniteHorizon(2))
    for c in (SimpleSum(), DiscountedSum(Fraction(1, 2)), LimitOfMeans()):
        assert check_weak_separability(criterion_preferences(spec, c, PD.model()), spec)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=10))
def test_transitivity_on_finite_chains(steps):
    values = [sum(steps[:k]) for k in range(len(steps) + 1)]
    chain = sorted(values)
    assert check_huge_transitivity(chain, lambda a, b: a >= b)


def test_symbolic_chains():
    samples = [NonStdNum.of(1), NonStdNum.of(2), TAU.scale(Fraction(1, 2)), TAU - 1, TAU]
    assert check_huge_transitivity(SymbolicChain(TAU, lambda k: k, samples), lambda a, b: a >= b)
    with pytest.raises(ValueError, match="not a chain"):
        check_huge_transitivity(SymbolicChain(TAU, lambda k: -k, samples), lambda a, b: a >= b)
