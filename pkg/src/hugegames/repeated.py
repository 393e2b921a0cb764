"""Repeated games built from a constituent game.

A whole history is a tuple of per-period constituent histories.  Play moves
on to the next period only after a *connected* terminal (a member of C);
any other terminal ends the game.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import networkx as nx

from .game import (
    EMPTY,
    Check,
    GameForm,
    History,
    Preference,
    Profile,
    RelationPreference,
    ValuePreference,
    WEAK,
    format_history,
    format_whole,
    is_spe,
    outcome,
    spe_profiles,
)
from .nonstd import NonStdNum, TAU, ZERO, collapse
from .views import (
    FiniteHorizon,
    Horizon,
    HugeHorizon,
    SegmentedWholeHistory,
    ViewKind,
)

Whole = tuple[History, ...]


@dataclass
class RepeatedGameSpec:
    constituent: GameForm
    connected: frozenset[History]
    horizon: Horizon = field(default_factory=lambda: FiniteHorizon(2))
    spe: Optional[Profile] = None  # constituent SPE; computed when absent

    def __post_init__(self) -> None:
        self.connected = frozenset(tuple(h) for h in self.connected)
        terminals = set(self.constituent.terminals)
        bad = [h for h in self.connected if h not in terminals]
        if bad:
            raise ValueError(f"connected history {format_history(bad[0])} is not a terminal of the constituent game")

    def with_horizon(self, horizon: Horizon) -> "RepeatedGameSpec":
        return RepeatedGameSpec(self.constituent, self.connected, horizon, self.spe)

    def constituent_spe(self) -> Profile:
        if self.spe is None:
            found = spe_profiles(self.constituent)
            if not found:
                raise ValueError("the constituent game has no subgame perfect equilibrium")
            self.spe = found[0]
        return self.spe

    def spe_outcome(self) -> History:
        return outcome(self.constituent, self.constituent_spe())

    @property
    def n(self) -> int:
        if not isinstance(self.horizon, FiniteHorizon):
            raise ValueError("the horizon is not finite")
        return self.horizon.n


def outside_instance(player: str, period: int) -> str:
    return f"{player}@{period}"


# ---------------------------------------------------------------- expansion


@dataclass(eq=False)
class ExpandedGame:
    """The explicit finitely repeated game; its histories are flat action tuples."""

    spec: RepeatedGameSpec
    game: GameForm

    def split(self, flat: Sequence[str]) -> tuple[list[History], History]:
        return split_flat(self.spec, flat)

    def whole(self, flat: Sequence[str]) -> Whole:
        done, partial = self.split(flat)
        if partial:
            raise ValueError(f"{flat} does not end a period")
        return tuple(done)

    def flat(self, whole: Iterable[History]) -> History:
        return tuple(a for comp in whole for a in comp)

    def label(self, flat: Sequence[str]) -> str:
        return format_whole(self.whole(flat), self.spec.constituent)

    def terminal_wholes(self) -> list[Whole]:
        return [self.whole(z) for z in self.game.terminals]


def split_flat(spec: RepeatedGameSpec, flat: Sequence[str]) -> tuple[list[History], History]:
    g = spec.constituent
    done: list[History] = []
    partial: History = EMPTY
    for a in flat:
        if g.is_terminal(partial):
            raise ValueError("history continues after the game ended")
        if a not in g.actions[partial]:
            raise ValueError(f"{a} is not legal at {format_history(partial)}")
        partial = partial + (a,)
        if g.is_terminal(partial):
            done.append(partial)
            if partial in spec.connected:
                partial = EMPTY
            else:
                partial = ("<end>",)
    if partial == ("<end>",):
        partial = EMPTY
    return done, partial


def whole_histories(spec: RepeatedGameSpec, n: Optional[int] = None) -> list[Whole]:
    """Every sequence (j_1..j_t), t <= n, with j_1..j_{t-1} connected."""
    n = spec.n if n is None else n
    terminals = spec.constituent.terminals
    connected = [z for z in terminals if z in spec.connected]
    out: list[Whole] = []
    for t in range(1, n + 1):
        for head in itertools.product(connected, repeat=t - 1):
            for last in terminals:
                out.append(tuple(head) + (last,))
    return out


def is_terminal_whole(spec: RepeatedGameSpec, w: Whole, n: Optional[int] = None) -> bool:
    n = spec.n if n is None else n
    return len(w) == n or w[-1] not in spec.connected


class WholePreference(Preference):
    """Adapts a preference over whole histories to the flat histories of an expanded game."""

    def __init__(self, base: Preference, spec: RepeatedGameSpec):
        self.base = base
        self.spec = spec

    def weakly_prefers(self, a: Any, b: Any) -> bool:
        if a == b:
            return True
        return self.base.weakly_prefers(self._whole(tuple(a)), self._whole(tuple(b)))

    @functools.lru_cache(maxsize=None)
    def _whole(self, flat: History) -> Whole:
        return tuple(split_flat(self.spec, flat)[0])


class PeriodComponentPreference(Preference):
    """An outside player's view: the constituent preference on one period's component."""

    def __init__(self, base: Preference, period: int):
        self.base = base
        self.period = period

    def _component(self, w: Whole) -> History:
        return w[self.period - 1] if len(w) >= self.period else EMPTY

    def weakly_prefers(self, a: Any, b: Any) -> bool:
        return self.base.weakly_prefers(self._component(a), self._component(b))


def build_finite_repeated(
    spec: RepeatedGameSpec,
    preferences: Optional[Mapping[str, Preference]] = None,
    max_periods: int = 6,
    max_nodes: int = 10**6,
) -> ExpandedGame:
    """Expand the repeated game into an explicit tree.

    ``preferences`` maps core players to preferences over whole histories
    (tuples of period histories).  By default core players use the lifted
    relation of :func:`lift_preferences`.  Outside players are copied per
    period and judge only their own period.
    """
    n = spec.n
    if n > max_periods:
        raise ValueError(f"expansion guard: {n} periods exceeds {max_periods}")
    g = spec.constituent
    actions: dict[History, tuple[str, ...]] = {}
    movers: dict[History, tuple[str, ...]] = {}
    comps: dict[History, dict[str, tuple[str, ...]]] = {}
    count = 0

    def rename(player: str, period: int) -> str:
        return outside_instance(player, period) if player in g.outside else player

    stack: list[tuple[History, int, History]] = [(EMPTY, 1, EMPTY)]
    while stack:
        flat, period, partial = stack.pop()
        count += 1
        if count > max_nodes:
            raise ValueError(f"expansion guard: more than {max_nodes} nodes")
        if g.is_terminal(partial):
            if partial in spec.connected and period < n:
                stack.append((flat, period + 1, EMPTY))
                count -= 1
            continue
        actions[flat] = g.actions[partial]
        movers[flat] = tuple(rename(m, period) for m in g.movers[partial])
        if partial in g.components:
            comps[flat] = dict(g.components[partial])
        for a in g.actions[partial]:
            stack.append((flat + (a,), period, partial + (a,)))

    players = list(g.core_players)
    for t in range(1, n + 1):
        players.extend(outside_instance(p, t) for p in g.players if p in g.outside)
    if preferences is None:
        lifted = lift_preferences(spec)
        preferences = {p: lifted[p] for p in g.core_players}
    prefs: dict[str, Preference] = {}
    for p in g.core_players:
        prefs[p] = WholePreference(preferences[p], spec)
    for t in range(1, n + 1):
        for p in g.outside:
            prefs[outside_instance(p, t)] = WholePreference(PeriodComponentPreference(g.preferences[p], t), spec)
    expanded = GameForm(tuple(players), actions, movers, prefs, frozenset(players) - set(g.core_players), comps)
    return ExpandedGame(spec, expanded)


def repeat_profile(expanded: ExpandedGame, constituent_profile: Profile) -> Profile:
    """Play the constituent profile in every period regardless of the past."""
    spec = expanded.spec
    g = spec.constituent
    prof: Profile = {p: {} for p in expanded.game.players}
    for flat in expanded.game.actions:
        done, partial = split_flat(spec, flat)
        period = len(done) + 1
        for m in g.movers[partial]:
            name = outside_instance(m, period) if m in g.outside else m
            prof[name][flat] = constituent_profile[m][partial]
    return prof


def criterion_preferences(spec: RepeatedGameSpec, criterion: Any, model: Any) -> dict[str, Preference]:
    """Core-player preferences over whole histories induced by a criterion at finite horizon.

    At a finite horizon every criterion, overtaking included, ranks whole
    histories by a value, so each whole is evaluated once.
    """
    from .criteria import evaluate
    from .game import ComparatorPreference

    n = spec.n
    out: dict[str, Preference] = {}
    for p in spec.constituent.core_players:

        @functools.lru_cache(maxsize=None)
        def value(w: Whole, p: str = p) -> Any:
            return evaluate(criterion, SegmentedWholeHistory.explicit(w, n), model, p)

        def cmp(a: Whole, b: Whole, value=value) -> int:
            va, vb = value(tuple(a)), value(tuple(b))
            return (va > vb) - (va < vb)

        out[p] = ComparatorPreference(cmp)
    return out


# ---------------------------------------------------------------- lifting


class LiftedPreference(RelationPreference):
    """The closure of lifted constituent comparisons over whole histories."""

    def __init__(self, domain: Iterable[Whole], generators: Iterable[tuple[Whole, Whole]], strict: Iterable[tuple[Whole, Whole]], terminals: Iterable[Whole]):
        dom = list(domain)
        gens = set(generators)
        super().__init__(list(gens) + [(w, w) for w in dom])
        self.domain = dom
        self.generators = gens
        self.strict_generators = set(strict)
        self.terminals = list(terminals)
        self.game: Optional[GameForm] = None


def lift_preferences(
    spec: RepeatedGameSpec,
    use_dynamic_consistency: bool = False,
    spe_outcome: Optional[History] = None,
    commutativity: bool = False,
    sooner_better: bool = False,
    players: Optional[Iterable[str]] = None,
) -> dict[str, LiftedPreference]:
    """Lift each constituent preference to whole histories by single-period replacement."""
    n = spec.n
    g = spec.constituent
    domain = whole_histories(spec, n)
    in_domain = set(domain)
    terminals = [w for w in domain if is_terminal_whole(spec, w, n)]
    if use_dynamic_consistency and spe_outcome is None:
        spe_outcome = spec.spe_outcome()
    connected = [z for z in g.terminals if z in spec.connected]
    result: dict[str, LiftedPreference] = {}
    for player in players or g.players:
        base = g.preferences[player]
        gens: set[tuple[Whole, Whole]] = set()
        strict: set[tuple[Whole, Whole]] = set()
        for w in domain:
            t = len(w)
            for k in range(t):
                options = g.terminals if k == t - 1 else connected
                for alt in options:
                    if alt == w[k] or not base.weakly_prefers(w[k], alt):
                        continue
                    other = w[:k] + (alt,) + w[k + 1:]
                    gens.add((w, other))
                    if not base.weakly_prefers(alt, w[k]):
                        strict.add((w, other))
        if use_dynamic_consistency:
            for w in domain:
                if len(w) < n and all(c in spec.connected for c in w):
                    longer = w + (spe_outcome,)
                    if longer in in_domain:
                        gens.add((w, longer))
                        gens.add((longer, w))
        if commutativity or sooner_better:
            for w in domain:
                for k in range(len(w) - 1):
                    swapped = w[:k] + (w[k + 1], w[k]) + w[k + 2:]
                    if swapped not in in_domain or swapped == w:
                        continue
                    if commutativity:
                        gens.add((w, swapped))
                    if sooner_better and base.weakly_prefers(w[k], w[k + 1]):
                        gens.add((w, swapped))
        lifted = LiftedPreference(domain, gens, strict, terminals)
        lifted.game = g
        result[player] = lifted
    return result


# ---------------------------------------------------------------- Hasse diagrams


class HasseError(ValueError):
    pass


@dataclass
class HasseDiagram:
    """Cover graph over indifference classes; edges point from better to worse."""

    classes: dict[str, tuple[Any, ...]]
    edges: list[tuple[str, str]]

    @property
    def nodes(self) -> list[str]:
        return sorted(self.classes)

    def edge_set(self) -> set[tuple[str, str]]:
        return set(self.edges)

    def top(self) -> list[str]:
        lower = {b for _, b in self.edges}
        return sorted(n for n in self.classes if n not in lower)

    def bottom(self) -> list[str]:
        upper = {a for a, _ in self.edges}
        return sorted(n for n in self.classes if n not in upper)

    def depth(self) -> dict[str, int]:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.classes)
        graph.add_edges_from(self.edges)
        depth: dict[str, int] = {}
        for node in nx.topological_sort(graph):
            preds = list(graph.predecessors(node))
            depth[node] = 1 + max(depth[p] for p in preds) if preds else 0
        return depth

    def to_dot(self, name: str = "hasse") -> str:
        depth = self.depth()
        ids = {label: f"n{k}" for k, label in enumerate(sorted(self.classes, key=lambda s: (depth[s], s)))}
        lines = [f'digraph "{name}" {{', "  rankdir=TB;", "  node [shape=plaintext];"]
        for label in sorted(self.classes, key=lambda s: (depth[s], s)):
            lines.append(f'  {ids[label]} [label="{label}"];')
        for level in sorted(set(depth.values())):
            members = " ".join(ids[l] for l in sorted(self.classes, key=lambda s: (depth[s], s)) if depth[l] == level)
            lines.append(f"  {{rank=same; {members}}}")
        for a, b in sorted(self.edges, key=lambda e: (depth[e[0]], e[0], e[1])):
            lines.append(f"  {ids[a]} -> {ids[b]} [dir=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _label(x: Any, g: Optional[GameForm] = None) -> str:
    if isinstance(x, tuple) and x and all(isinstance(c, tuple) for c in x):
        return format_whole(x, g)
    if isinstance(x, tuple):
        return format_history(x, g)
    return str(x)


def hasse(rel: RelationPreference, keep: Optional[Iterable[Any]] = None) -> HasseDiagram:
    """Quotient by indifference, keep classes meeting ``keep`` (default: all), reduce transitively."""
    g = getattr(rel, "game", None)
    graph = nx.DiGraph()
    elements = list(rel.elements)
    graph.add_nodes_from(elements)
    for a, b in rel.pairs():
        if a != b:
            graph.add_edge(a, b)
    strict = getattr(rel, "strict_generators", set())
    comp_of: dict[Any, int] = {}
    components = list(nx.strongly_connected_components(graph))
    for idx, comp in enumerate(components):
        for x in comp:
            comp_of[x] = idx
    for a, b in strict:
        if comp_of.get(a) is not None and comp_of.get(a) == comp_of.get(b):
            cycle = nx.shortest_path(graph, b, a)
            raise HasseError("strict cycle: " + " > ".join(_label(x, g) for x in [a] + cycle))
    wanted = set(keep) if keep is not None else set(elements)
    if keep is None and hasattr(rel, "terminals"):
        wanted = set(rel.terminals)
    kept = [i for i, comp in enumerate(components) if comp & wanted]
    labels = {i: ", ".join(sorted(_label(x, g) for x in components[i])) for i in kept}
    quotient = nx.DiGraph()
    quotient.add_nodes_from(kept)
    for i in kept:
        a = next(iter(components[i]))
        for j in kept:
            if i != j and rel.weakly_prefers(a, next(iter(components[j]))):
                quotient.add_edge(i, j)
    if not nx.is_directed_acyclic_graph(quotient):
        raise HasseError("quotient relation is cyclic")
    reduced = nx.transitive_reduction(quotient)
    classes = {labels[i]: tuple(sorted(components[i], key=lambda x: _label(x, g))) for i in kept}
    edges = sorted((labels[a], labels[b]) for a, b in reduced.edges())
    return HasseDiagram(classes, edges)


# ---------------------------------------------------------------- property checkers


@dataclass(frozen=True)
class PropertyCheck:
    ok: bool
    counterexample: Optional[tuple[Any, ...]] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_weak_separability(rel: Mapping[str, Preference], spec: RepeatedGameSpec) -> PropertyCheck:
    """Every single-period improvement must be weakly preferred, for every player in ``rel``."""
    n = spec.n
    g = spec.constituent
    connected = [z for z in g.terminals if z in spec.connected]
    for player, pref in rel.items():
        base = g.preferences[player]
        for w in whole_histories(spec, n):
            for k in range(len(w)):
                options = g.terminals if k == len(w) - 1 else connected
                for alt in options:
                    if alt == w[k] or not base.weakly_prefers(w[k], alt):
                        continue
                    other = w[:k] + (alt,) + w[k + 1:]
                    if not pref.weakly_prefers(w, other):
                        return PropertyCheck(
                            False,
                            (player, w, other),
                            f"player {player}: {format_whole(w)} should be weakly preferred to {format_whole(other)}",
                        )
    return PropertyCheck(True)


@dataclass
class SymbolicChain:
    """A chain x_1..x_length given by a member function on (possibly huge) indices."""

    length: NonStdNum
    member: Callable[[NonStdNum], Any]
    samples: Optional[list[NonStdNum]] = None

    def sample_indices(self) -> list[NonStdNum]:
        if self.samples is not None:
            picks = list(self.samples)
        elif self.length.tau_coef == 0 and self.length.unit_coef <= 64:
            picks = [NonStdNum.of(k) for k in range(1, int(self.length.unit_coef) + 1)]
        else:
            one = NonStdNum.of(1)
            picks = [one, NonStdNum.of(2), NonStdNum.of(3)]
            picks += [self.length.scale(Fraction(k, 4)) for k in (1, 2, 3)]
            picks += [self.length - 1, self.length]
        return sorted({p for p in picks if NonStdNum.of(1) <= p <= self.length})


def check_huge_transitivity(chain: "Sequence[Any] | SymbolicChain", prefers: Callable[[Any, Any], bool]) -> PropertyCheck:
    """Given consecutive links x_{k+1} >= x_k, check x_l >= x_m for every sampled l >= m."""
    if isinstance(chain, SymbolicChain):
        idx = chain.sample_indices()
        get = chain.member
        for k in idx:
            if k < chain.length and not prefers(get(k + 1), get(k)):
                raise ValueError(f"not a chain at index {k}")
    else:
        items = list(chain)
        idx = [NonStdNum.of(k) for k in range(1, len(items) + 1)]

        def get(k: NonStdNum, items: list = items) -> Any:
            return items[int(k.unit_coef) - 1]

        for k in range(1, len(items)):
            if not prefers(items[k], items[k - 1]):
                raise ValueError(f"not a chain at index {k}")
    for l in sorted(idx, reverse=True):
        for m in idx:
            if m > l:
                break
            if not prefers(get(l), get(m)):
                return PropertyCheck(False, (get(l), get(m)), f"element {l} is not weakly preferred to element {m}")
    return PropertyCheck(True)


DC_EXACT = "exact"
DC_BETTER = "relaxed_weakly_better"
DC_WORSE = "relaxed_weakly_worse"
DC_FAILS = "fails"


def check_dynamic_consistency(spec: RepeatedGameSpec, criterion: Any, model: Any, spe: Optional[Profile] = None) -> dict[str, str]:
    """Classify how appending the constituent SPE outcome to a connected history is valued."""
    from .criteria import compare

    g = spec.constituent
    prof = spe if spe is not None else spec.constituent_spe()
    o = outcome(g, prof)
    result: dict[str, str] = {}
    for player in g.core_players:
        signs = set()
        for hc in sorted(spec.connected):
            longer = SegmentedWholeHistory.explicit((hc, o), 2)
            shorter = SegmentedWholeHistory.explicit((hc,), 2)
            signs.add(compare(criterion, longer, shorter, model, player))
        if signs <= {0}:
            result[player] = DC_EXACT
        elif signs <= {0, 1} and o in spec.connected:
            result[player] = DC_BETTER
        elif signs <= {0, -1} and o not in spec.connected:
            result[player] = DC_WORSE
        else:
            result[player] = DC_FAILS
    return result


class HypothesesNotMet(ValueError):
    pass


@dataclass
class PropExtReport:
    verified: bool
    horizon: str
    dynamic_consistency: dict[str, str]
    spe_count: Optional[int] = None
    witness: Optional[str] = None
    details: dict[str, str] = field(default_factory=dict)


def verify_prop_ext(spec: RepeatedGameSpec, criterion: Any, model: Any, semantics: str = WEAK) -> PropExtReport:
    """Check that repeating the constituent SPE is an SPE of the repeated game."""
    from .criteria import criterion_flags

    flags = criterion_flags(criterion)
    if isinstance(spec.horizon, HugeHorizon):
        if not (flags.weak_separability and flags.huge_transitivity):
            raise HypothesesNotMet(f"hypotheses not met: {criterion} lacks weak separability or huge transitivity")
    elif not flags.weak_separability:
        raise HypothesesNotMet(f"hypotheses not met: {criterion} lacks weak separability")
    dc = check_dynamic_consistency(spec, criterion, model)
    if DC_FAILS in dc.values():
        raise HypothesesNotMet("hypotheses not met: dynamic consistency fails for " + ", ".join(p for p, v in dc.items() if v == DC_FAILS))
    if isinstance(spec.horizon, FiniteHorizon):
        expanded = build_finite_repeated(spec, criterion_preferences(spec, criterion, model))
        prof = repeat_profile(expanded, spec.constituent_spe())
        check = is_spe(expanded.game, prof, semantics)
        count = None
        if not expanded.game.has_simultaneous_nodes():
            count = len(spe_profiles(expanded.game))
        return PropExtReport(check.ok, str(spec.horizon), dc, count, check.witness.describe() if check.witness else None)
    from .equilibria import family_spe, verify_symbolic_spe

    report = verify_symbolic_spe(spec, family_spe(spec), criterion, model)
    return PropExtReport(report.verified, str(spec.horizon), dc, None, report.witness_text())
