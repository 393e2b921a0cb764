"""Finite extensive games with perfect information (plus simultaneous-move nodes).

Histories are tuples of action labels with ``()`` as the root.  A node may
have several movers; such a node encodes a one-shot strategic game, and its
child labels are joint labels built from the movers' individual actions.

Preferences are objects answering ``weakly_prefers(a, b)`` for terminal
histories.  They may be partial.  Two readings of the equilibrium condition
are supported:

* ``WEAK``: the equilibrium outcome must be weakly preferred to every
  deviation outcome, so incomparable deviations break equilibrium;
* ``STRICT``: equilibrium fails only when some deviation is strictly better.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

History = tuple[str, ...]
Strategy = dict[History, str]
Profile = dict[str, Strategy]

EMPTY: History = ()

WEAK = "requires-weak-preference"
STRICT = "no-strict-improvement"
SEMANTICS = (WEAK, STRICT)


def format_history(h: History, g: "Optional[GameForm]" = None) -> str:
    """Render ``("R", "r")`` as ``Rr`` and ``("in", "C")`` as ``(in,C)``.

    With a game at hand, histories made only of joint moves print bare
    (``CS`` rather than ``(CS)``).
    """
    if not h:
        return "()"
    if all(len(a) == 1 for a in h):
        return "".join(h)
    if g is not None and all(h[:k] in g.actions and g.is_simultaneous(h[:k]) for k in range(len(h))):
        return ",".join(h)
    return "(" + ",".join(h) + ")"


def format_whole(components: Iterable[History], g: "Optional[GameForm]" = None) -> str:
    """Render a sequence of per-period histories, e.g. ``((in,C),(out))``."""
    return "(" + ",".join(format_history(c, g) for c in components) + ")"


def joint_label(actions: Iterable[str]) -> str:
    acts = tuple(actions)
    if all(len(a) == 1 for a in acts):
        return "".join(acts)
    return "+".join(acts)


# ---------------------------------------------------------------- preferences


class Preference(ABC):
    """A reflexive, transitive (possibly partial) relation over histories."""

    @abstractmethod
    def weakly_prefers(self, a: Any, b: Any) -> bool: ...

    def strictly_prefers(self, a: Any, b: Any) -> bool:
        return self.weakly_prefers(a, b) and not self.weakly_prefers(b, a)

    def indifferent(self, a: Any, b: Any) -> bool:
        return self.weakly_prefers(a, b) and self.weakly_prefers(b, a)

    def comparable(self, a: Any, b: Any) -> bool:
        return self.weakly_prefers(a, b) or self.weakly_prefers(b, a)


class RelationPreference(Preference):
    """Explicit pairs, stored transitively closed; every element relates to itself."""

    def __init__(self, pairs: Iterable[tuple[Any, Any]]):
        succ: dict[Any, set[Any]] = {}
        for a, b in pairs:
            succ.setdefault(a, set()).add(b)
            succ.setdefault(b, set())
        closed: dict[Any, frozenset[Any]] = {}
        for start in succ:
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in succ[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            closed[start] = frozenset(seen)
        self._below = closed

    @property
    def elements(self) -> frozenset[Any]:
        return frozenset(self._below)

    def pairs(self) -> set[tuple[Any, Any]]:
        return {(a, b) for a, below in self._below.items() for b in below}

    def weakly_prefers(self, a: Any, b: Any) -> bool:
        if a == b:
            return True
        return b in self._below.get(a, ())


class ValuePreference(Preference):
    """Total preorder induced by a key; a key of ``None`` is incomparable to everything else."""

    def __init__(self, key: Callable[[Any], Any] | Mapping[Any, Any]):
        if isinstance(key, Mapping):
            table = dict(key)
            self._key: Callable[[Any], Any] = lambda h: table.get(h)
        else:
            self._key = key

    def value(self, h: Any) -> Any:
        return self._key(h)

    def weakly_prefers(self, a: Any, b: Any) -> bool:
        if a == b:
            return True
        va, vb = self._key(a), self._key(b)
        if va is None or vb is None:
            return False
        return va >= vb


class ComparatorPreference(Preference):
    """Relation given by a three-way comparator returning -1/0/1 (or None when incomparable)."""

    def __init__(self, cmp: Callable[[Any, Any], Optional[int]]):
        self._cmp = cmp

    def weakly_prefers(self, a: Any, b: Any) -> bool:
        if a == b:
            return True
        c = self._cmp(a, b)
        return c is not None and c >= 0


# ---------------------------------------------------------------- game forms


@dataclass(frozen=True)
class Node:
    """Builder node: movers and an ordered mapping from action label to child (None for a leaf)."""

    movers: tuple[str, ...]
    children: tuple[tuple[str, Optional["Node"]], ...]
    components: tuple[tuple[str, tuple[str, ...]], ...] = ()


def move(player: str, children: Mapping[str, Optional[Node]] | Iterable[tuple[str, Optional[Node]]]) -> Node:
    items = tuple(children.items()) if isinstance(children, Mapping) else tuple(children)
    labels = [a for a, _ in items]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate actions at a node of {player}: {labels}")
    return Node((player,), items)


def simultaneous(
    players: Iterable[str],
    action_sets: Iterable[Iterable[str]],
    children: Optional[Mapping[str, Optional[Node]]] = None,
) -> Node:
    """A node where all ``players`` move at once; children are keyed by joint label."""
    ps = tuple(players)
    sets = [tuple(s) for s in action_sets]
    if len(ps) != len(sets):
        raise ValueError("one action set per player is required")
    for s in sets:
        if len(set(s)) != len(s):
            raise ValueError(f"duplicate actions {s}")
    kids = []
    comps = []
    for combo in itertools.product(*sets):
        label = joint_label(combo)
        kids.append((label, None if children is None else children.get(label)))
        comps.append((label, combo))
    return Node(ps, tuple(kids), tuple(comps))


@dataclass(eq=False)
class GameForm:
    """A validated finite game tree with preferences over terminal histories."""

    players: tuple[str, ...]
    actions: dict[History, tuple[str, ...]]
    movers: dict[History, tuple[str, ...]]
    preferences: dict[str, Preference]
    outside: frozenset[str] = frozenset()
    components: dict[History, dict[str, tuple[str, ...]]] = field(default_factory=dict)
    payoffs: Optional[dict[History, dict[str, Fraction]]] = None

    def __post_init__(self) -> None:
        self.players = tuple(self.players)
        self.outside = frozenset(self.outside)
        if not set(self.players) - self.outside:
            raise ValueError("at least one core player is required")
        if not self.outside <= set(self.players):
            raise ValueError("outside players must be players")
        if EMPTY not in self.actions:
            raise ValueError("the root history must be nonterminal")
        for h, acts in self.actions.items():
            if not acts:
                raise ValueError(f"nonterminal history {h} has no actions")
            if len(set(acts)) != len(acts):
                raise ValueError(f"duplicate actions at {h}")
            if h not in self.movers:
                raise ValueError(f"player function undefined at {h}")
            for m in self.movers[h]:
                if m not in self.players:
                    raise ValueError(f"unknown player {m} at {h}")
            if h and h[:-1] not in self.actions:
                raise ValueError(f"history {h} is not prefix-closed")
            if h and h[-1] not in self.actions[h[:-1]]:
                raise ValueError(f"history {h} does not follow a legal action")
        for p in self.players:
            self.preferences.setdefault(p, RelationPreference([]))
        self._terminals = tuple(self._walk_terminals(EMPTY))

    # -- construction -------------------------------------------------------

    @classmethod
    def build(
        cls,
        players: Iterable[str],
        root: Node,
        preferences: Optional[Mapping[str, Preference]] = None,
        outside: Iterable[str] = (),
        payoffs: Optional[Mapping[History, Mapping[str, Any]]] = None,
    ) -> "GameForm":
        """Build from a :class:`Node` tree.

        When ``payoffs`` is given (terminal -> player -> rational) and a player
        has no explicit preference, the preference is the induced total preorder.
        """
        actions: dict[History, tuple[str, ...]] = {}
        movers: dict[History, tuple[str, ...]] = {}
        comps: dict[History, dict[str, tuple[str, ...]]] = {}

        def visit(h: History, node: Node) -> None:
            actions[h] = tuple(a for a, _ in node.children)
            movers[h] = node.movers
            if node.components:
                comps[h] = dict(node.components)
            for a, child in node.children:
                if child is not None:
                    visit(h + (a,), child)

        visit(EMPTY, root)
        prefs = dict(preferences or {})
        table = None
        if payoffs is not None:
            from .nonstd import as_rational

            table = {tuple(h): {p: as_rational(v) for p, v in row.items()} for h, row in payoffs.items()}
            for p in players:
                if p not in prefs:
                    prefs[p] = ValuePreference(
                        lambda h, p=p: table[h][p] if h in table and p in table[h] else None
                    )
        g = cls(tuple(players), actions, movers, prefs, frozenset(outside), comps, table)
        if table is not None:
            missing = [z for z in g.terminals if z not in table]
            if missing:
                raise ValueError(f"payoff missing for terminal {format_history(missing[0])}")
        return g

    # -- structure ----------------------------------------------------------

    def _walk_terminals(self, h: History) -> Iterator[History]:
        if h not in self.actions:
            yield h
            return
        for a in self.actions[h]:
            yield from self._walk_terminals(h + (a,))

    @property
    def terminals(self) -> tuple[History, ...]:
        return self._terminals

    @property
    def core_players(self) -> tuple[str, ...]:
        return tuple(p for p in self.players if p not in self.outside)

    def is_terminal(self, h: History) -> bool:
        return h not in self.actions

    def nonterminals(self) -> list[History]:
        return list(self.actions)

    def histories(self) -> list[History]:
        return list(self.actions) + list(self._terminals)

    def is_simultaneous(self, h: History) -> bool:
        return len(self.movers[h]) > 1 or h in self.components

    def has_simultaneous_nodes(self) -> bool:
        return any(self.is_simultaneous(h) for h in self.actions)

    def player_at(self, h: History) -> str:
        ms = self.movers[h]
        if len(ms) != 1:
            raise ValueError(f"{format_history(h)} is a simultaneous node")
        return ms[0]

    def own_actions(self, h: History, player: str) -> tuple[str, ...]:
        """Actions available to ``player`` at ``h`` (its component at simultaneous nodes)."""
        if player not in self.movers[h]:
            raise ValueError(f"{player} does not move at {format_history(h)}")
        if h not in self.components:
            return self.actions[h]
        idx = self.movers[h].index(player)
        seen: list[str] = []
        for label in self.actions[h]:
            a = self.components[h][label][idx]
            if a not in seen:
                seen.append(a)
        return tuple(seen)

    def label_for(self, h: History, choices: Mapping[str, str]) -> str:
        """Child label at ``h`` produced by each mover's individual choice."""
        ms = self.movers[h]
        if h not in self.components:
            return choices[ms[0]]
        combo = tuple(choices[m] for m in ms)
        for label, comp in self.components[h].items():
            if comp == combo:
                return label
        raise ValueError(f"no joint action {combo} at {format_history(h)}")

    def component(self, h: History, label: str, player: str) -> str:
        if h not in self.components:
            return label
        return self.components[h][label][self.movers[h].index(player)]

    def owned_nodes(self, player: str, root: History = EMPTY) -> list[History]:
        return [h for h in self.actions if h[: len(root)] == root and player in self.movers[h]]

    def subtree_terminals(self, root: History) -> list[History]:
        return list(self._walk_terminals(root))


def legal_actions(g: GameForm, h: History) -> tuple[str, ...]:
    if g.is_terminal(h):
        raise ValueError(f"{format_history(h)} is terminal")
    return g.actions[h]


# ---------------------------------------------------------------- strategies


def profile_from_choices(g: GameForm, choices: Mapping[History, str]) -> Profile:
    """Turn node -> label choices into a per-player profile.

    At simultaneous nodes the label is the joint label and is split into the
    movers' components.
    """
    prof: Profile = {p: {} for p in g.players}
    for h, label in choices.items():
        if label not in g.actions[h]:
            raise ValueError(f"{label} is not legal at {format_history(h)}")
        for m in g.movers[h]:
            prof[m][h] = g.component(h, label, m)
    return prof


def choices_of(g: GameForm, profile: Mapping[str, Mapping[History, str]]) -> dict[History, str]:
    return {h: g.label_for(h, {m: profile[m][h] for m in g.movers[h]}) for h in g.actions if _defined(g, profile, h)}


def _defined(g: GameForm, profile: Mapping[str, Mapping[History, str]], h: History) -> bool:
    return all(h in profile.get(m, {}) for m in g.movers[h])


def step(g: GameForm, profile: Mapping[str, Mapping[History, str]], h: History) -> str:
    return g.label_for(h, {m: profile[m][h] for m in g.movers[h]})


def outcome(g: GameForm, profile: Mapping[str, Mapping[History, str]], start: History = EMPTY) -> History:
    """The terminal history reached by following ``profile`` from ``start``."""
    h = start
    while not g.is_terminal(h):
        h = h + (step(g, profile, h),)
    return h


def pure_strategies(g: GameForm, player: str, root: History = EMPTY) -> Iterator[Strategy]:
    nodes = g.owned_nodes(player, root)
    options = [g.own_actions(h, player) for h in nodes]
    for combo in itertools.product(*options):
        yield dict(zip(nodes, combo))


def all_profiles(g: GameForm) -> Iterator[Profile]:
    per_player = [list(pure_strategies(g, p)) for p in g.players]
    for combo in itertools.product(*per_player):
        yield {p: dict(s) for p, s in zip(g.players, combo)}


# ---------------------------------------------------------------- equilibrium checks


@dataclass(frozen=True)
class Witness:
    """A profitable (or non-dominated) unilateral deviation."""

    player: str
    root: History
    deviation: tuple[tuple[History, str], ...]
    equilibrium_outcome: History
    deviation_outcome: History

    def describe(self) -> str:
        dev = ", ".join(f"{format_history(h)}->{a}" for h, a in self.deviation)
        return (
            f"player {self.player} at {format_history(self.root)} deviates [{dev}]: "
            f"{format_history(self.deviation_outcome)} instead of {format_history(self.equilibrium_outcome)}"
        )


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.ok


def _reachable(g: GameForm, profile: Mapping[str, Mapping[History, str]], player: str, root: History) -> dict[History, tuple[tuple[History, str], ...]]:
    """Terminals reachable from ``root`` when only ``player`` changes choices, with the changes needed."""
    out: dict[History, tuple[tuple[History, str], ...]] = {}

    def visit(h: History, path: tuple[tuple[History, str], ...]) -> None:
        if g.is_terminal(h):
            out.setdefault(h, path)
            return
        ms = g.movers[h]
        if player not in ms:
            visit(h + (step(g, profile, h),), path)
            return
        current = profile[player][h]
        for own in g.own_actions(h, player):
            choices = {m: (own if m == player else profile[m][h]) for m in ms}
            label = g.label_for(h, choices)
            extra = path if own == current else path + ((h, own),)
            visit(h + (label,), extra)

    visit(root, ())
    return out


def _violation(pref: Preference, eq: History, dev: History, semantics: str) -> bool:
    if semantics == WEAK:
        return not pref.weakly_prefers(eq, dev)
    if semantics == STRICT:
        return pref.strictly_prefers(dev, eq)
    raise ValueError(f"unknown semantics {semantics!r}")


def _nash_at(g: GameForm, profile: Profile, root: History, semantics: str) -> Check:
    eq = outcome(g, profile, root)
    for player in g.players:
        pref = g.preferences[player]
        for z, changes in _reachable(g, profile, player, root).items():
            if z != eq and _violation(pref, eq, z, semantics):
                return Check(False, Witness(player, root, changes, eq, z))
    return Check(True)


def is_nash(g: GameForm, profile: Profile, semantics: str = WEAK) -> Check:
    return _nash_at(g, profile, EMPTY, semantics)


def is_spe(g: GameForm, profile: Profile, semantics: str = WEAK) -> Check:
    """Nash condition in every subgame; subgames are visited root first."""
    for h in g.nonterminals():
        check = _nash_at(g, profile, h, semantics)
        if not check.ok:
            return check
    return Check(True)


class NotTotalError(ValueError):
    pass


def backward_induction(g: GameForm, limit: int = 20000) -> list[Profile]:
    """All profiles produced by backward induction, keeping ties."""
    if g.has_simultaneous_nodes():
        raise ValueError("backward induction needs sequential moves; use spe_profiles")

    def solve(h: History) -> list[tuple[dict[History, str], History]]:
        if g.is_terminal(h):
            return [({}, h)]
        player = g.player_at(h)
        pref = g.preferences[player]
        acts = g.actions[h]
        sub = [solve(h + (a,)) for a in acts]
        results: list[tuple[dict[History, str], History]] = []
        # each combination of subgame solutions fixes one outcome per action
        for combo in itertools.product(*sub):
            outcomes = [z for _, z in combo]
            for x in outcomes:
                for y in outcomes:
                    if not pref.comparable(x, y):
                        raise NotTotalError(
                            f"preferences not total on subgame at {format_history(h)}: "
                            f"{format_history(x)} vs {format_history(y)} for player {player}"
                        )
            merged_rest: dict[History, str] = {}
            for frag, _ in combo:
                merged_rest.update(frag)
            for a, z in zip(acts, outcomes):
                if all(pref.weakly_prefers(z, y) for y in outcomes):
                    results.append(({h: a, **merged_rest}, z))
                    if len(results) > limit:
                        raise ValueError("too many tied backward-induction profiles")
        return results

    profiles = []
    seen = set()
    for choices, _ in solve(EMPTY):
        key = tuple(sorted(choices.items()))
        if key not in seen:
            seen.add(key)
            profiles.append(profile_from_choices(g, choices))
    return profiles


def spe_profiles(g: GameForm, semantics: str = WEAK) -> list[Profile]:
    """SPE profiles: backward induction when it applies, enumeration otherwise.

    Enumeration is used for simultaneous moves and for partial preferences,
    where backward induction is undefined.
    """
    if not g.has_simultaneous_nodes():
        try:
            return backward_induction(g)
        except NotTotalError:
            pass
    return [p for p in all_profiles(g) if is_spe(g, p, semantics).ok]


def profile_key(g: GameForm, profile: Mapping[str, Mapping[History, str]]) -> tuple[tuple[History, str], ...]:
    return tuple(sorted(choices_of(g, profile).items()))


def format_profile(g: GameForm, profile: Mapping[str, Mapping[History, str]]) -> str:
    """E.g. ``(.:in; in:C)`` listing the label chosen at each nonterminal."""
    parts = []
    for h, a in sorted(choices_of(g, profile).items(), key=lambda kv: (len(kv[0]), kv[0])):
        node = "." if not h else ",".join(h)
        parts.append(f"{node}:{a}")
    return "(" + "; ".join(parts) + ")"


# ---------------------------------------------------------------- strategic games


@dataclass
class StrategicGame:
    """Players, per-player action lists and a payoff per action profile."""

    players: tuple[str, ...]
    actions: dict[str, tuple[str, ...]]
    payoffs: dict[tuple[str, ...], dict[str, Fraction]]

    def __post_init__(self) -> None:
        from .nonstd import as_rational

        self.players = tuple(self.players)
        for combo in itertools.product(*(self.actions[p] for p in self.players)):
            if combo not in self.payoffs:
                raise ValueError(f"payoff missing for profile {combo}")
        self.payoffs = {k: {p: as_rational(v) for p, v in row.items()} for k, row in self.payoffs.items()}

    def profiles(self) -> list[tuple[str, ...]]:
        return list(itertools.product(*(self.actions[p] for p in self.players)))


def strategic_as_extensive(sg: StrategicGame) -> GameForm:
    root = simultaneous(sg.players, [sg.actions[p] for p in sg.players])
    payoffs = {(joint_label(combo),): sg.payoffs[combo] for combo in sg.profiles()}
    return GameForm.build(sg.players, root, payoffs=payoffs)
