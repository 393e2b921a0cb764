"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run alone with ``pytest -s tests/test_acceptance.py`` or
``python tests/test_acceptance.py``.
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings

sys.path.insert(0, str(Path(__file__).parent))

from hugegames import catalog  # noqa: E402
from hugegames.criteria import (  # noqa: E402
    DiscountedSum,
    LimitOfMeans,
    Overtaking,
    SimpleSum,
    discounted_value,
    eval_limit_means,
    eval_simple,
)
from hugegames.equilibria import (  # noqa: E402
    FamilyPreconditionError,
    ONE_SHOT,
    family_discount,
    family_simple_sum,
    mixed_unit,
    verify_symbolic_spe,
)
from hugegames.game import STRICT, spe_profiles  # noqa: E402
from hugegames.nonstd import ONE, POS_INF, TAU  # noqa: E402
from hugegames.repeated import (  # noqa: E402
    DC_EXACT,
    build_finite_repeated,
    check_dynamic_consistency,
    criterion_preferences,
    hasse,
    lift_preferences,
)
from hugegames.views import FiniteHorizon, HugeHorizon, SegmentedWholeHistory, ViewKind  # noqa: E402

PERSPECTIVE = HugeHorizon(ViewKind.PERSPECTIVE)
BIRDSEYE = HugeHorizon(ViewKind.BIRDSEYE)


def criterion_1():
    start = time.perf_counter()
    entry = catalog.get("chain-store")
    spec = entry.spec(FiniteHorizon(2))
    expanded = build_finite_repeated(spec)
    found = spe_profiles(expanded.game, STRICT)
    unique = len(found) == 1
    cooperative = unique and all(
        a == ("C" if player == "CS" else "in") for player, choices in found[0].items() for a in choices.values()
    )
    edges = {}
    for player, golden in (("CS", catalog.CHAIN_STORE_CS_EDGES), ("LS", catalog.CHAIN_STORE_LS_EDGES)):
        diagram = hasse(lift_preferences(spec, players=[player])[player])
        edges[player] = len(diagram.classes) == 9 and frozenset(diagram.edges) == golden
    elapsed = time.perf_counter() - start
    ok = unique and cooperative and all(edges.values()) and elapsed < 1
    return ok, f"spe={len(found)} in/C={cooperative} hasse={edges} {elapsed:.2f}s"


CENTIPEDE_LEAVES = [(0, 0), (-1, 3), (2, 2), (1, 5), (4, 4), (3, 7), (6, 6), (5, 9), (8, 8), (7, 11), (10, 10)]


def criterion_2():
    start = time.perf_counter()
    entry = catalog.get("centipede")
    spec = entry.spec(FiniteHorizon(5))
    model = entry.model()
    expanded = build_finite_repeated(spec, criterion_preferences(spec, SimpleSum(), model))
    leaves = sorted(expanded.game.terminals, key=lambda z: (len(z), z))
    values = []
    for z in leaves:
        whole = SegmentedWholeHistory.explicit(expanded.whole(z), 5)
        values.append(tuple(int(eval_simple(whole, model, p).value) for p in ("1", "2")))
    dc = check_dynamic_consistency(spec, SimpleSum(), model)
    found = spe_profiles(expanded.game, STRICT)
    stops = len(found) == 1 and all(a in ("D", "d") for choices in found[0].values() for a in choices.values())
    elapsed = time.perf_counter() - start
    ok = values == CENTIPEDE_LEAVES and set(dc.values()) == {DC_EXACT} and stops and elapsed < 1
    return ok, f"leaves={values == CENTIPEDE_LEAVES} dc={dc} spe={len(found)} stop={stops} {elapsed:.2f}s"


def criterion_3():
    entry = catalog.get("pd-positive")
    delta = Fraction(1, 5)

    def value(variant, *periods):
        whole = SegmentedWholeHistory.explicit([(p,) for p in periods], 2)
        v = discounted_value(whole, entry.model(variant), "1", delta)
        assert v.is_finite and not v.residue
        return v.unit_coef

    a, b = value("prison", "CS", "SC"), value("prison", "CC", "CS")
    a25, b25 = value("prison-25", "CS", "SC"), value("prison-25", "CC", "CS")
    ok = (a, b, a25, b25) == (-1, -3, -5, -3) and a > b and a25 < b25
    return ok, f"U(CS,SC)={a} U(CC,CS)={b}; with SC=-25: {a25} vs {b25}"


def criterion_4():
    entry = catalog.get("centipede")
    model = entry.model()
    rr, d, rd = ("R", "r"), ("D",), ("R", "d")
    wholes = [
        SegmentedWholeHistory.of([(TAU, rr)]),
        SegmentedWholeHistory.of([(TAU - 1, rr), (ONE, d)]),
        SegmentedWholeHistory.of([(TAU - 1, rr), (ONE, rd)]),
    ]
    values = [[eval_simple(w, model, p) for p in ("1", "2")] for w in wholes]
    infinite = all(v == POS_INF for row in values for v in row)
    spec = entry.spec(PERSPECTIVE)
    report = verify_symbolic_spe(spec, family_simple_sum(spec, rr, model), SimpleSum(), model)
    return infinite and report.verified, f"values={[[str(v) for v in row] for row in values]} family={report.verdict}"


def criterion_5():
    pos = catalog.get("pd-positive")
    spec = pos.spec(PERSPECTIVE)
    report = verify_symbolic_spe(spec, family_simple_sum(spec, ("SS",), pos.model()), SimpleSum(), pos.model())
    path_ok = [(seg.length, seg.payload) for seg in report.path.segments] == [(TAU, ("SS",))]
    neg = catalog.get("pd-negative")
    nspec = neg.spec(PERSPECTIVE)
    try:
        family_simple_sum(nspec, ("SS",), neg.model())
        refused = False
    except FamilyPreconditionError:
        refused = True
    forced = verify_symbolic_spe(nspec, family_simple_sum(nspec, ("SS",), neg.model(), force=True), SimpleSum(), neg.model())
    w = forced.witness
    witness_ok = w is not None and (w.baseline_value, w.deviation_value) == ("-inf", "0")
    ok = report.verified and path_ok and refused and not forced.verified and witness_ok
    detail = f"table1={report.verdict} path={report.path.render()} table2 refused={refused} forced={forced.verdict}"
    if w is not None:
        detail += f" witness {w.baseline_value} vs {w.deviation_value}"
    return ok, detail


def criterion_6():
    parts = {}
    for identifier in ("centipede", "chain-store"):
        entry = catalog.get(identifier)
        spec = entry.spec(PERSPECTIVE)
        for delta in (Fraction(1, 5), Fraction(1, 2), Fraction(9, 10)):
            report = verify_symbolic_spe(spec, family_discount(spec, delta), DiscountedSum(delta), entry.model())
            parts[f"{identifier} discount {delta}"] = report.verified
    entry = catalog.get("centipede")
    spec = entry.spec(PERSPECTIVE)
    # continuing forever pays player 2 at most 2/(1-delta); stopping pays 3, so delta < 1/3
    delta = DiscountedSum(Fraction(1, 5))
    cont = verify_symbolic_spe(spec, family_simple_sum(spec, ("R", "r"), entry.model()), delta, entry.model())
    w = cont.witness
    near_one_shot = w is not None and w.deviation.scope == ONE_SHOT and str(w.deviation.position).startswith("near-future")
    ok = all(parts.values()) and not cont.verified and near_one_shot
    return ok, f"{parts} always-continue={cont.verdict} witness={w.deviation.describe() if w else None}"


def criterion_7():
    entry = catalog.get("centipede")
    spec = entry.spec(PERSPECTIVE)
    verdicts = {}
    for name in entry.families:
        verdicts[name] = verify_symbolic_spe(spec, entry.family(name, spec), Overtaking(), entry.model()).verdict
    spe_ok = verdicts.pop("spe") == "verified-on-suite"
    return spe_ok and all(v == "refuted" for v in verdicts.values()), f"spe verified={spe_ok} others={verdicts}"


def criterion_8():
    entry = catalog.get("chain-store")
    model = entry.model()
    spec = entry.spec(BIRDSEYE)
    fam = entry.family("repeat-nash", spec)
    report = verify_symbolic_spe(spec, fam, LimitOfMeans(), model)
    base = SegmentedWholeHistory.of([(TAU, ("out",))], ViewKind.BIRDSEYE)
    diffs = []
    half = TAU.scale(Fraction(1, 2))
    for patch in (("in", "C"), ("in", "A")):
        patched = SegmentedWholeHistory.of(
            [(half - 1, ("out",)), (ONE, patch), (half, ("out",))], ViewKind.BIRDSEYE
        )
        first = SegmentedWholeHistory.of([(ONE, patch), (TAU - 1, ("out",))], ViewKind.BIRDSEYE)
        for h in (patched, first):
            diffs.append(eval_limit_means(h, model, "CS") - eval_limit_means(base, model, "CS"))
    ok = report.verified and all(d == 0 for d in diffs)
    return ok, f"out/A family={report.verdict} path={report.path.render()} patch differences={[str(d) for d in diffs]}"


def criterion_9():
    entry = catalog.get("bos")
    model = entry.model()
    labels = catalog.bos_unit_labels()
    unit_ok = labels == ["BB", "BB", "SB", "BS", "BS", "SS", "BS", "BS", "SS"]
    # oracle: the plain mean of the nine unit periods
    mean = tuple(Fraction(sum(model.table[(x,)][p] for x in labels), len(labels)) for p in ("1", "2"))
    spec = entry.spec(BIRDSEYE)
    fam = entry.family("mixed", spec)
    report = verify_symbolic_spe(spec, fam, LimitOfMeans(), model)
    values = tuple(Fraction(report.path_values[p]) for p in ("1", "2"))
    expected = (Fraction(2, 3), Fraction(2, 3))
    from_sigma = mixed_unit(catalog.BOS_SIGMA)
    ok = unit_ok and len(from_sigma) == 9 and mean == expected and values == expected and report.verified
    return ok, f"unit={labels} mean={mean} path values={values} {report.verdict}"


def criterion_10():
    import test_criteria
    import test_equilibria
    import test_nonstd

    start = time.perf_counter()
    settings(max_examples=1000, deadline=None)(given(*test_nonstd.LAW_ARGS)(test_nonstd.check_order_and_indiscernibility))()
    settings(max_examples=500, deadline=None)(given(*test_criteria.LEMMA_ARGS)(test_criteria.check_sooner_better_and_commutativity))()
    comparisons = 0
    disagreements = []
    for identifier in catalog.IDS:
        for n in (2, 3, 4, 5):
            count, bad = test_equilibria.cross_validate(identifier, n)
            comparisons += count
            disagreements += [(identifier, n, *b) for b in bad]
    elapsed = time.perf_counter() - start
    ok = not disagreements and comparisons > 0
    return ok, (
        f"1000 nonstd law cases, 500 payoff tables, {comparisons} cross-validations, "
        f"{len(disagreements)} disagreements {disagreements[:3]} in {elapsed:.1f}s"
    )


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def evaluate(k: int) -> tuple[bool, str]:
    try:
        return CRITERIA[k - 1]()
    except Exception as err:  # a crash is a failure with its reason
        return False, f"{type(err).__name__}: {err}"


@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(k, capsys):
    ok, detail = evaluate(k)
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for k in range(1, 11):
        ok, detail = evaluate(k)
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
    sys.exit(1 if failures else 0)
