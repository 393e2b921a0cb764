"""Strategy families for repeated games and a deviation-suite verifier.

A :class:`StrategyFamily` decides each player's action from a context: the
runs played in earlier periods, the current period (an exact, possibly huge,
period number) and the partial history inside the current period.

Play over a huge horizon is simulated symbolically.  A finite set of
landmark periods is played one at a time and the spans between them are
filled with a single repeated payload.  The payload is found by playing
the first period of the span and confirming that a representative period
deep inside the span (with the hypothesised payload as its past) plays the
same.  This assumes the family's decisions only change at landmarks, which
holds for every family defined here.  Runs of near-future or near-end periods
beyond the explicit depth merge into the middle block, as in the canonical
segmented form.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Optional

from .criteria import (
    Criterion,
    LimitOfMeans,
    Overtaking,
    PayoffModel,
    compare,
    evaluate,
    overtaking_difference,
)
from .game import (
    EMPTY,
    WEAK,
    GameForm,
    History,
    Profile,
    format_history,
    format_profile,
    is_nash,
    joint_label,
    pure_strategies,
)
from .nonstd import ONE, TAU, ZERO, NonStdNum, as_rational, compact_nonstd
from .repeated import (
    ExpandedGame,
    RepeatedGameSpec,
    outside_instance,
    split_flat,
)
from .views import (
    Cycle,
    DistantFuture,
    FiniteHorizon,
    HugeHorizon,
    MonadPoint,
    NearEnd,
    NearFuture,
    Payload,
    Segment,
    SegmentedWholeHistory,
    ViewKind,
    canonicalize,
    period_of,
    prefix_segments,
    same_runs,
)

DEFAULT_DEPTH = 3
ONE_SHOT = "one-shot"
TAIL = "tail"
WHOLE = "whole"


class SymbolicPlayError(RuntimeError):
    pass


class FamilyPreconditionError(ValueError):
    pass


# ---------------------------------------------------------------- contexts


@dataclass(frozen=True)
class Context:
    """What a decision rule may look at."""

    spec: RepeatedGameSpec
    prefix: tuple[Segment, ...]
    period: NonStdNum
    partial: History
    total: NonStdNum

    @property
    def near_future(self) -> bool:
        return self.period.tau_coef == 0

    @property
    def remaining(self) -> NonStdNum:
        return self.total - self.period

    @property
    def remaining_finite(self) -> bool:
        return self.remaining.tau_coef == 0

    def count(self, predicate: Callable[[History], bool]) -> NonStdNum:
        total = ZERO
        for seg in self.prefix:
            if isinstance(seg.payload, Cycle):
                hits = sum(1 for h in seg.payload.unit if predicate(h))
                total = total + seg.length.scale(Fraction(hits, len(seg.payload.unit)))
            elif predicate(seg.payload):
                total = total + seg.length
        return total


Rule = Callable[[Context, str], str]


@dataclass
class StrategyFamily:
    """A named decision rule with the parameters it was built from."""

    name: str
    spec: RepeatedGameSpec
    rule: Rule
    params: dict[str, str] = field(default_factory=dict)
    cycle: Optional[tuple[str, ...]] = None  # joint labels of a mixed unit
    landmarks: Callable[[NonStdNum], list[NonStdNum]] = lambda total: []
    variants: Callable[[], list["StrategyFamily"]] = lambda: []
    finite_analogue: bool = False

    def decide(self, ctx: Context, player: str) -> str:
        return self.rule(ctx, player)

    def describe(self) -> str:
        if not self.params:
            return self.name
        inner = ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({inner})"


def _spe_rule(spec: RepeatedGameSpec) -> Rule:
    prof = spec.constituent_spe()

    def rule(ctx: Context, player: str) -> str:
        return prof[player][ctx.partial]

    return rule


def _own(g: GameForm, h: History, label: str, player: str) -> str:
    return g.component(h, label, player)


def family_spe(spec: RepeatedGameSpec) -> StrategyFamily:
    """Repeat the constituent SPE in every period."""
    return StrategyFamily("spe", spec, _spe_rule(spec), finite_analogue=True)


def _core_payoffs_positive(spec: RepeatedGameSpec, model: PayoffModel, target: History) -> Optional[str]:
    for p in spec.constituent.core_players:
        if model.u(target, p) <= 0:
            return f"payoffs not positive: player {p} gets {model.u(target, p)} at {format_history(target)}"
    return None


def _target_step(g: GameForm, target: History, partial: History) -> Optional[str]:
    if len(partial) < len(target) and target[: len(partial)] == partial:
        return target[len(partial)]
    return None


def family_simple_sum(spec: RepeatedGameSpec, target: Sequence[str], model: PayoffModel, force: bool = False) -> StrategyFamily:
    """Follow ``target`` each period, falling back to the constituent SPE near the end
    when the target has only been played finitely often."""
    g = spec.constituent
    h = tuple(target)
    if not force:
        problems = []
        if h not in spec.connected:
            problems.append(f"{format_history(h)} is not connected")
        if g.outside:
            problems.append("outside players are not allowed")
        bad = _core_payoffs_positive(spec, model, h)
        if bad:
            problems.append(bad)
        if problems:
            raise FamilyPreconditionError("; ".join(problems))
    spe = spec.constituent_spe()
    simultaneous_root = g.is_simultaneous(EMPTY) and len(h) == 1

    def rule(ctx: Context, player: str) -> str:
        nxt = _target_step(g, h, ctx.partial)
        if nxt is None:
            return spe[player][ctx.partial]
        if simultaneous_root:
            mine = g.component(EMPTY, h[0], player)
            count = ctx.count(lambda c: bool(c) and g.component(EMPTY, c[0], player) == mine)
        else:
            count = ctx.count(lambda c: c == h)
        if ctx.remaining_finite and count.tau_coef == 0:
            return spe[player][ctx.partial]
        return _own(g, ctx.partial, nxt, player)

    return StrategyFamily("simple-sum", spec, rule, {"target": format_history(h, g)})


def family_discount(spec: RepeatedGameSpec, delta: object = Fraction(1, 2), fill: int = 0) -> StrategyFamily:
    """Constituent SPE in the near future; a fixed arbitrary action elsewhere."""
    d = as_rational(delta)
    if not (0 < d < 1):
        raise FamilyPreconditionError("discount factor must lie strictly between 0 and 1")
    g = spec.constituent
    spe = spec.constituent_spe()

    def rule(ctx: Context, player: str) -> str:
        if ctx.near_future:
            return spe[player][ctx.partial]
        options = g.own_actions(ctx.partial, player)
        return options[fill % len(options)]

    fam = StrategyFamily("discount", spec, rule, {"delta": str(d), "fill": str(fill)})
    if fill == 0:
        fam.variants = lambda: [family_discount(spec, d, 1)]
    return fam


def _profile_rule(profile: Profile) -> Rule:
    def rule(ctx: Context, player: str) -> str:
        return profile[player][ctx.partial]

    return rule


def family_repeat_nash(spec: RepeatedGameSpec, profile: Profile, require_total_connection: bool = True) -> StrategyFamily:
    """Play the Nash profile in every period (needs every terminal to be connected)."""
    check = is_nash(spec.constituent, profile)
    if not check.ok:
        raise FamilyPreconditionError(f"not a Nash equilibrium of the constituent game: {check.witness.describe()}")
    if require_total_connection and set(spec.connected) != set(spec.constituent.terminals):
        raise FamilyPreconditionError("every constituent terminal must be connected")
    return StrategyFamily(
        "repeat-nash",
        spec,
        _profile_rule(profile),
        {"profile": format_profile(spec.constituent, profile)},
        finite_analogue=True,
    )


def family_finite_switch(spec: RepeatedGameSpec, base: StrategyFamily, switches: Mapping[MonadPoint, Profile]) -> StrategyFamily:
    """Follow ``base`` except at finitely many bird's-eye points, where another profile is played."""
    points = dict(switches)
    at = {period_of(mp, HugeHorizon(ViewKind.BIRDSEYE)): prof for mp, prof in points.items()}

    def rule(ctx: Context, player: str) -> str:
        prof = at.get(ctx.period)
        if prof is not None and ctx.total.tau_coef > 0:
            return prof[player][ctx.partial]
        return base.decide(ctx, player)

    def marks(total: NonStdNum) -> list[NonStdNum]:
        return sorted({p for q in at for p in (q, q + 1) if p <= total}) + base.landmarks(total)

    label = ",".join(f"{mp.i}.{mp.j}" for mp in sorted(points))
    return StrategyFamily("finite-switch", spec, rule, {"base": base.describe(), "points": label}, landmarks=marks)


def family_by_position(spec: RepeatedGameSpec, near_future: Profile, distant: Profile, near_end: Profile, name: str = "by-position") -> StrategyFamily:
    """One constituent profile per perspective class."""

    def rule(ctx: Context, player: str) -> str:
        if ctx.near_future:
            return near_future[player][ctx.partial]
        if ctx.remaining_finite:
            return near_end[player][ctx.partial]
        return distant[player][ctx.partial]

    g = spec.constituent
    params = {
        "near": format_profile(g, near_future),
        "distant": format_profile(g, distant),
        "end": format_profile(g, near_end),
    }
    return StrategyFamily(name, spec, rule, params)


def family_unbroken(spec: RepeatedGameSpec, target: Sequence[str]) -> StrategyFamily:
    """Play toward ``target`` while every earlier period realised it; otherwise the constituent SPE."""
    g = spec.constituent
    h = tuple(target)
    spe = spec.constituent_spe()

    def rule(ctx: Context, player: str) -> str:
        nxt = _target_step(g, h, ctx.partial)
        if nxt is not None and ctx.count(lambda c: c == h) == ctx.period - 1:
            return _own(g, ctx.partial, nxt, player)
        return spe[player][ctx.partial]

    return StrategyFamily("unbroken", spec, rule, {"target": format_history(h, g)})


def _terminating_action(g: GameForm, spec: RepeatedGameSpec, partial: History, player: str) -> Optional[str]:
    for a in g.own_actions(partial, player):
        for label in g.actions[partial]:
            if g.component(partial, label, player) != a:
                continue
            nxt = partial + (label,)
            if g.is_terminal(nxt) and nxt not in spec.connected:
                return a
    return None


def family_realize_terminal(spec: RepeatedGameSpec, target: SegmentedWholeHistory, model: PayoffModel, fill: int = 0) -> StrategyFamily:
    """Realise a terminal whole history; after it is passed, terminate; elsewhere play the SPE."""
    g = spec.constituent
    if len(spec.connected) != 1:
        raise FamilyPreconditionError("the connected set must be a singleton")
    (c,) = tuple(spec.connected)
    if len(g.core_players) < 2:
        raise FamilyPreconditionError("at least two core players are required")
    for p in g.core_players:
        if not any(_terminating_action(g, spec, c[:k], p) for k in range(len(c)) if p in g.movers[c[:k]]):
            raise FamilyPreconditionError(f"player {p} cannot terminate the game")
    bad = _core_payoffs_positive(spec, model, c)
    if bad:
        raise FamilyPreconditionError(bad)
    segs = canonicalize(target).segments
    played = sum((s.length for s in segs if s.payload != EMPTY), ZERO)
    non_empty = [s for s in segs if s.payload != EMPTY]
    for s in non_empty[:-1]:
        if s.payload != c:
            raise FamilyPreconditionError("the target must repeat the connected history before its last period")
    last = non_empty[-1].payload if non_empty else EMPTY
    if non_empty and last != c and non_empty[-1].length != ONE:
        raise FamilyPreconditionError("the target can end only once")
    if non_empty and last == c and played != target.horizon:
        raise FamilyPreconditionError("a connected run must last until the horizon")
    ends = bool(non_empty) and last != c
    spe = spec.constituent_spe()

    def rule(ctx: Context, player: str) -> str:
        t = ctx.period
        if t <= played:
            expected = prefix_segments(segs, t - 1)
            if same_runs(ctx.prefix, expected):
                here = target.payload_at(t)
                nxt = _target_step(g, here, ctx.partial)
                if nxt is not None:
                    return _own(g, ctx.partial, nxt, player)
        if ends and t >= played:
            head = played - 1
            if head == ZERO or same_runs(prefix_segments(ctx.prefix, head), prefix_segments(segs, head)):
                term = _terminating_action(g, spec, ctx.partial, player)
                if term is not None:
                    return term
                options = g.own_actions(ctx.partial, player)
                return options[fill % len(options)]
        return spe[player][ctx.partial]

    def marks(total: NonStdNum) -> list[NonStdNum]:
        return sorted({p for p in (played, played + 1) if ONE <= p <= total})

    fam = StrategyFamily(
        "realize",
        spec,
        rule,
        {"target": target.render()},
        landmarks=marks,
        finite_analogue=True,
    )
    if fill == 0:
        fam.variants = lambda: [family_realize_terminal(spec, target, model, 1)]
    return fam


# ---------------------------------------------------------------- mixed units


def mixed_unit(sigma: Sequence[Sequence[object]]) -> list[tuple[int, ...]]:
    """Deterministic cycle of action-index profiles replicating independent mixed strategies.

    ``sigma[i][j]`` is the probability that player ``i`` plays its ``j``-th
    action.  Returns, for each period of the unit, the action index of every
    player.
    """
    dists = [[as_rational(p) for p in row] for row in sigma]
    for i, row in enumerate(dists):
        if sum(row) != 1 or any(p < 0 for p in row):
            raise ValueError(f"distribution of player {i + 1} is not normalised")
    m = 1
    for row in dists:
        for p in row:
            m = math.lcm(m, p.denominator)
    length = m ** len(dists)
    unit: list[tuple[int, ...]] = []
    for t in range(1, length + 1):
        profile = []
        for i, row in enumerate(dists, start=1):
            block = m**i
            x = Fraction(t, block) - (t - 1) // block
            cum = Fraction(0)
            chosen = None
            for j, p in enumerate(row):
                if 0 < x - cum <= p:
                    chosen = j
                    break
                cum += p
            if chosen is None:
                raise AssertionError("membership condition selected no action")
            profile.append(chosen)
        unit.append(tuple(profile))
    return unit


def expected_payoffs(g: GameForm, model: PayoffModel, sigma: Sequence[Sequence[object]]) -> dict[str, Fraction]:
    """Exact expected payoffs of independent mixed strategies in a one-shot simultaneous game."""
    players = g.movers[EMPTY]
    acts = [g.own_actions(EMPTY, p) for p in players]
    dists = [[as_rational(x) for x in row] for row in sigma]
    out = {p: Fraction(0) for p in players}
    for combo in itertools.product(*(range(len(a)) for a in acts)):
        prob = Fraction(1)
        for i, j in enumerate(combo):
            prob *= dists[i][j]
        if prob == 0:
            continue
        label = g.label_for(EMPTY, {p: acts[i][combo[i]] for i, p in enumerate(players)})
        for p in players:
            out[p] += prob * model.u((label,), p)
    return out


def is_mixed_nash(g: GameForm, model: PayoffModel, sigma: Sequence[Sequence[object]]) -> tuple[bool, Optional[str]]:
    players = g.movers[EMPTY]
    base = expected_payoffs(g, model, sigma)
    for i, p in enumerate(players):
        for j, a in enumerate(g.own_actions(EMPTY, p)):
            pure = [0] * len(sigma[i])
            pure[j] = 1
            alt = [list(row) for row in sigma]
            alt[i] = pure
            if expected_payoffs(g, model, alt)[p] > base[p]:
                return False, f"player {p} gains by playing {a}"
    return True, None


def family_mixed(spec: RepeatedGameSpec, sigma: Sequence[Sequence[object]], model: PayoffModel) -> StrategyFamily:
    """Cycle through the mixed unit of ``sigma`` by period index."""
    g = spec.constituent
    if not g.is_simultaneous(EMPTY) or any(len(h) != 1 for h in g.terminals):
        raise FamilyPreconditionError("mixed families need a one-shot simultaneous constituent")
    ok, why = is_mixed_nash(g, model, sigma)
    if not ok:
        raise FamilyPreconditionError(f"not a mixed Nash equilibrium: {why}")
    players = g.movers[EMPTY]
    acts = [g.own_actions(EMPTY, p) for p in players]
    unit = mixed_unit(sigma)
    labels = tuple(g.label_for(EMPTY, {p: acts[i][prof[i]] for i, p in enumerate(players)}) for prof in unit)

    def rule(ctx: Context, player: str) -> str:
        phase = int((ctx.period.unit_coef - 1) % len(labels))
        return g.component(EMPTY, labels[phase], player)

    params = {"sigma": "; ".join(f"{p}=" + ",".join(str(as_rational(x)) for x in row) for p, row in zip(players, sigma))}
    return StrategyFamily("mixed", spec, rule, params, cycle=labels)


# ---------------------------------------------------------------- symbolic play


@dataclass(frozen=True)
class Deviation:
    """A unilateral deviation rooted at a node of some period."""

    player: str
    period: NonStdNum
    node: History
    scope: str
    replacement: tuple[tuple[History, str], ...]
    position: str
    prefix: tuple[Segment, ...] = ()
    prefix_kind: str = "on-path"

    def active(self, period: NonStdNum) -> bool:
        if self.scope == WHOLE:
            return True
        if self.scope == TAIL:
            return period >= self.period
        return period == self.period

    def strategy(self) -> dict[History, str]:
        return dict(self.replacement)

    def describe(self, g: Optional[GameForm] = None) -> str:
        moves = ", ".join(f"{'.' if not h else ','.join(h)}:{a}" for h, a in self.replacement)
        return f"{self.position} {self.scope} player={self.player} node={format_history(self.node)} play=[{moves}]"


def _explicit_depth(total: NonStdNum, view: ViewKind, depth: int) -> int:
    return depth + 2 if view is ViewKind.PERSPECTIVE else 1


def base_landmarks(total: NonStdNum, view: ViewKind, depth: int) -> list[NonStdNum]:
    if total.tau_coef == 0:
        return [NonStdNum.of(k) for k in range(1, int(total.unit_coef) + 1)]
    k = _explicit_depth(total, view, depth)
    marks = [NonStdNum.of(t) for t in range(1, k + 1)]
    marks += [total - t for t in range(k)]
    if view is ViewKind.PERSPECTIVE:
        marks.append(total.scale(Fraction(1, 2)))
    return marks


class Simulator:
    def __init__(self, family: StrategyFamily, total: NonStdNum, view: ViewKind, depth: int = DEFAULT_DEPTH):
        self.family = family
        self.spec = family.spec
        self.g = family.spec.constituent
        self.total = total
        self.view = view
        self.depth = depth
        self.connected = family.spec.connected
        self._first_connected = next(z for z in self.g.terminals if z in self.connected) if self.connected else None

    def _choose(self, runs: Sequence[Segment], period: NonStdNum, partial: History, player: str, dev: Optional[Deviation]) -> str:
        if dev is not None and dev.player == player and dev.active(period):
            strat = dev.strategy()
            if partial in strat:
                return strat[partial]
        ctx = Context(self.spec, tuple(runs), period, partial, self.total)
        return self.family.decide(ctx, player)

    def play_period(self, runs: Sequence[Segment], period: NonStdNum, start: History = EMPTY, dev: Optional[Deviation] = None) -> History:
        h = start
        while not self.g.is_terminal(h):
            choices = {m: self._choose(runs, period, h, m, dev) for m in self.g.movers[h]}
            h = h + (self.g.label_for(h, choices),)
        return h

    def _ends(self, o: History) -> bool:
        return o not in self.connected

    def run(
        self,
        prefix: Sequence[Segment] = (),
        period: NonStdNum = ONE,
        start: History = EMPTY,
        dev: Optional[Deviation] = None,
        force_continue: bool = False,
    ) -> SegmentedWholeHistory:
        runs: list[Segment] = list(prefix)
        total = self.total
        marks = set(base_landmarks(total, self.view, self.depth))
        marks.update(self.family.landmarks(total))
        marks.add(period + 1)
        if dev is not None and dev.scope != WHOLE:
            marks.update({dev.period, dev.period + 1})
        ordered = sorted(m for m in marks if period < m <= total)

        def push(length: NonStdNum, payload: Payload) -> None:
            if runs and runs[-1].payload == payload:
                runs[-1] = Segment(runs[-1].length + length, payload)
            else:
                runs.append(Segment(length, payload))

        def finish(q: NonStdNum) -> SegmentedWholeHistory:
            if q <= total:
                push(total - q + 1, EMPTY)
            return SegmentedWholeHistory(tuple(runs), self.view, total)

        def explicit(q: NonStdNum, first: History = EMPTY) -> bool:
            o = self.play_period(runs, q, first, dev)
            if force_continue and self._ends(o):
                o = self._first_connected
            push(ONE, o)
            return self._ends(o)

        if explicit(period, start):
            return finish(period + 1)
        q = period + 1
        idx = 0
        while q <= total:
            while idx < len(ordered) and ordered[idx] < q:
                idx += 1
            nxt = ordered[idx] if idx < len(ordered) else total + 1
            if nxt == q:
                if explicit(q):
                    return finish(q + 1)
                q = q + 1
                continue
            gap = nxt - q
            if gap.tau_coef == 0:
                if gap.unit_coef > 1000:
                    raise SymbolicPlayError(f"finite gap of {gap} periods is too long to play explicitly")
                for _ in range(int(gap.unit_coef)):
                    if explicit(q):
                        return finish(q + 1)
                    q = q + 1
                continue
            ended, q = self._fill(runs, push, q, nxt, dev, force_continue)
            if ended:
                return finish(q)
        return SegmentedWholeHistory(tuple(runs), self.view, total)

    def _representative(self, lo: NonStdNum, hi: NonStdNum) -> NonStdNum:
        tau = (lo.tau_coef + hi.tau_coef) / 2
        unit = (lo.unit_coef + hi.unit_coef) // 2
        return NonStdNum(tau, unit)

    def _fill(self, runs: list[Segment], push, q: NonStdNum, stop: NonStdNum, dev, force_continue: bool) -> tuple[bool, NonStdNum]:
        """Fill periods q..stop-1 (a huge span).  Returns (game ended, next period)."""
        if self.family.cycle is not None:
            unit = []
            for k in range(len(self.family.cycle)):
                o = self.play_period(runs, q + k, EMPTY, dev)
                if self._ends(o):
                    raise SymbolicPlayError("cyclic families must keep the game going")
                unit.append(o)
            payload: Payload = unit[0] if len(set(unit)) == 1 else Cycle(tuple(unit))
            push(stop - q, payload)
            return False, stop
        for _ in range(4):
            o = self.play_period(runs, q, EMPTY, dev)
            if force_continue and self._ends(o):
                o = self._first_connected
            if self._ends(o):
                push(ONE, o)
                return True, q + 1
            rep = self._representative(q, stop)
            if self._stable(runs, q, rep, o, dev, force_continue):
                push(stop - q, o)
                return False, stop
            push(ONE, o)
            q = q + 1
        rep = self._representative(q, stop)
        for cand in self.g.terminals:
            if cand in self.connected and self._stable(runs, q, rep, cand, dev, force_continue, check_first=False):
                push(stop - q, cand)
                return False, stop
        raise SymbolicPlayError(f"no constant play found between periods {q} and {stop}")

    def _stable(self, runs, q, rep, o, dev, force_continue, check_first: bool = True) -> bool:
        def at(period: NonStdNum, extra: NonStdNum) -> History:
            trial = list(runs)
            if extra > ZERO:
                trial = trial + [Segment(extra, o)]
            out = self.play_period(trial, period, EMPTY, dev)
            if force_continue and self._ends(out):
                out = self._first_connected
            return out

        if check_first and at(q + 1, ONE) != o:
            return False
        return at(rep, rep - q) == o


# ---------------------------------------------------------------- suites and verification


@dataclass(frozen=True)
class Root:
    label: str
    period: NonStdNum


def _positions(spec: RepeatedGameSpec, family: StrategyFamily, depth: int) -> list[Root]:
    horizon = spec.horizon
    if isinstance(horizon, FiniteHorizon):
        return [Root(f"period({t})", NonStdNum.of(t)) for t in range(1, horizon.n + 1)]
    total = horizon.length
    roots: dict[NonStdNum, str] = {}
    if horizon.view is ViewKind.PERSPECTIVE:
        for n in range(depth + 1):
            roots.setdefault(period_of(NearFuture(n), horizon), str(NearFuture(n)))
        roots.setdefault(period_of(DistantFuture(), horizon), str(DistantFuture()))
        for n in range(depth, -1, -1):
            roots.setdefault(period_of(NearEnd(n), horizon), str(NearEnd(n)))
        for m in family.landmarks(total):
            roots.setdefault(m, f"landmark({m})")
    else:
        bounds = {Fraction(0), Fraction(1)}
        for m in family.landmarks(total):
            roots.setdefault(m, f"boundary({m})")
            bounds.add(m.tau_coef)
        roots.setdefault(ONE, str(MonadPoint(0, 0)))
        roots.setdefault(total, str(MonadPoint(1, 0)))
        ordered = sorted(bounds)
        for lo, hi in zip(ordered, ordered[1:]):
            mid = (lo + hi) / 2
            roots.setdefault(total.scale(mid), f"interior({mid})")
    return [Root(label, p) for p, label in sorted(roots.items())]


def default_suite(spec: RepeatedGameSpec, family: StrategyFamily, criterion: Optional[Criterion] = None, depth: int = DEFAULT_DEPTH) -> list[Deviation]:
    """Deviations at every probed position and node, plus whole-game switches.

    Order: single-period deviations at every position, then whole-game
    switches, then deviations that persist from a position onward.
    """
    g = spec.constituent
    horizon = spec.horizon
    view = horizon.view if isinstance(horizon, HugeHorizon) else ViewKind.PERSPECTIVE
    sim = Simulator(family, horizon.length, view, depth)
    path = sim.run()
    forced = None
    suite: list[Deviation] = []
    tails: list[Deviation] = []
    full = {p: [tuple(sorted(s.items())) for s in pure_strategies(g, p)] for p in g.players}
    for root in _positions(spec, family, depth):
        reached = path.payload_at(root.period) != EMPTY
        if reached:
            prefix, kind = prefix_segments(path.segments, root.period - 1), "on-path"
        else:
            if forced is None:
                forced = sim.run(force_continue=True)
            prefix, kind = prefix_segments(forced.segments, root.period - 1), "forced"
        for node in g.nonterminals():
            for player in g.movers[node]:
                below = [h for h in g.owned_nodes(player, node)]
                seen = set()
                for strat in full[player]:
                    restricted = tuple((h, a) for h, a in strat if h in below)
                    if restricted in seen:
                        continue
                    seen.add(restricted)
                    suite.append(Deviation(player, root.period, node, ONE_SHOT, restricted, root.label, prefix, kind))
                if player in g.outside or (root.period == ONE and node == EMPTY):
                    continue
                for strat in full[player]:
                    tails.append(Deviation(player, root.period, node, TAIL, strat, root.label, prefix, kind))
    spe = spec.constituent_spe()
    for player in g.core_players:
        spe_strat = tuple(sorted(spe[player].items()))
        labelled = False
        for strat in full[player]:
            tag = "switch"
            if strat == spe_strat:
                tag, labelled = "switch-to-spe", True
            suite.append(Deviation(player, ONE, EMPTY, WHOLE, strat, tag))
        if not labelled:
            suite.append(Deviation(player, ONE, EMPTY, WHOLE, spe_strat, "switch-to-spe"))
    return suite + tails


@dataclass
class DeviationResult:
    deviation: Deviation
    baseline: SegmentedWholeHistory
    deviated: SegmentedWholeHistory
    baseline_value: str
    deviation_value: str
    order: int  # +1 when the deviator strictly gains

    def line(self, g: Optional[GameForm] = None) -> str:
        verdict = {1: "improves", 0: "equal", -1: "worse"}[self.order]
        return (
            f"{self.deviation.describe(g)} root={self.deviation.prefix_kind} "
            f"baseline={self.baseline_value} deviation={self.deviation_value} order={verdict}"
        )


@dataclass
class EquilibriumReport:
    family: str
    criterion: str
    horizon: str
    results: list[DeviationResult]
    path: SegmentedWholeHistory
    path_values: dict[str, str]
    alternatives: list["EquilibriumReport"] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return not any(r.order > 0 for r in self.results)

    @property
    def verdict(self) -> str:
        return "verified-on-suite" if self.verified else "refuted"

    def improving(self) -> list[DeviationResult]:
        return [r for r in self.results if r.order > 0]

    @property
    def witness(self) -> Optional[DeviationResult]:
        better = self.improving()
        return better[0] if better else None

    def witness_text(self) -> Optional[str]:
        w = self.witness
        return w.line() if w else None


def _value_text(criterion: Criterion, h: SegmentedWholeHistory, model: PayoffModel, player: str) -> str:
    v = evaluate(criterion, h, model, player)
    return str(v) if v is not None else "n/a"


def _judge(spec: RepeatedGameSpec, criterion: Criterion, model: PayoffModel, dev: Deviation, base: SegmentedWholeHistory, alt: SegmentedWholeHistory) -> tuple[int, str, str]:
    player = dev.player
    if player in spec.constituent.outside:
        b = model.u(base.payload_at(dev.period), player)
        d = model.u(alt.payload_at(dev.period), player)
        return (d > b) - (d < b), str(b), str(d)
    order = compare(criterion, alt, base, model, player)
    if isinstance(criterion, Overtaking) and base.is_huge:
        diff = overtaking_difference(alt, base, model, player)
        return order, "0", compact_nonstd(diff)
    return order, _value_text(criterion, base, model, player), _value_text(criterion, alt, model, player)


def verify_symbolic_spe(
    spec: RepeatedGameSpec,
    family: StrategyFamily,
    criterion: Criterion,
    model: PayoffModel,
    suite: Optional[list[Deviation]] = None,
    depth: int = DEFAULT_DEPTH,
    with_variants: bool = True,
) -> EquilibriumReport:
    """Evaluate every deviation of the suite against the family's own play from the same root."""
    horizon = spec.horizon
    if isinstance(horizon, HugeHorizon) and horizon.view is not criterion.view:
        raise ValueError(f"criterion {criterion} needs the {criterion.view.value} view, horizon uses {horizon.view.value}")
    view = horizon.view if isinstance(horizon, HugeHorizon) else ViewKind.PERSPECTIVE
    deviations = suite if suite is not None else default_suite(spec, family, criterion, depth)
    sim = Simulator(family, horizon.length, view, depth)
    path = sim.run()
    cache: dict[tuple, SegmentedWholeHistory] = {}
    results = []
    for dev in deviations:
        if dev.player not in spec.constituent.players:
            raise ValueError(f"malformed deviation: unknown player {dev.player}")
        key = (dev.prefix, dev.period, dev.node)
        if key not in cache:
            cache[key] = sim.run(dev.prefix, dev.period, dev.node)
        base = cache[key]
        alt = sim.run(dev.prefix, dev.period, dev.node, dev)
        order, bv, dv = _judge(spec, criterion, model, dev, base, alt)
        results.append(DeviationResult(dev, base, alt, bv, dv, order))
    values = {p: _value_text(criterion, path, model, p) for p in spec.constituent.core_players}
    report = EquilibriumReport(family.describe(), str(criterion), str(horizon), results, path, values)
    if with_variants:
        for other in family.variants():
            report.alternatives.append(verify_symbolic_spe(spec, other, criterion, model, None, depth, False))
    return report


# ---------------------------------------------------------------- finite analogues


def family_profile(family: StrategyFamily, expanded: ExpandedGame) -> Profile:
    """The behaviour of a family at every node of an explicitly expanded finite game."""
    spec = expanded.spec
    g = spec.constituent
    total = NonStdNum.of(spec.n)
    prof: Profile = {p: {} for p in expanded.game.players}
    for flat in expanded.game.actions:
        done, partial = split_flat(spec, flat)
        runs = tuple(Segment(ONE, c) for c in done)
        period = NonStdNum.of(len(done) + 1)
        ctx = Context(spec, runs, period, partial, total)
        for m in g.movers[partial]:
            name = outside_instance(m, len(done) + 1) if m in g.outside else m
            prof[name][flat] = family.decide(ctx, m)
    return prof


def exhaustive_check(
    spec: RepeatedGameSpec,
    family: StrategyFamily,
    criterion: Criterion,
    model: PayoffModel,
    semantics: str = WEAK,
    expanded: Optional[ExpandedGame] = None,
):
    """Exact SPE check of a family's behaviour in the explicitly expanded finite game.

    Pass ``expanded`` (built with the criterion's preferences) to reuse one
    expansion across several families.
    """
    from .game import is_spe
    from .repeated import build_finite_repeated, criterion_preferences

    if expanded is None:
        expanded = build_finite_repeated(spec, criterion_preferences(spec, criterion, model))
    return is_spe(expanded.game, family_profile(family, expanded), semantics)
