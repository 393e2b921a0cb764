"""Payoff criteria over segmented whole histories.

Discounted sum, simple sum and limit of means produce values; overtaking
only compares two histories.  All arithmetic is exact.  At a huge horizon a
discounted contribution that starts beyond the near future is an
infinitesimal and only its sign is kept.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .game import EMPTY, History, format_history
from .nonstd import (
    ExtReal,
    NonStdNum,
    Residue,
    ZERO,
    as_rational,
    collapse,
    geometric_sum,
    geometric_tail,
    nsn_cmp,
    parse_rational,
)
from .views import Cycle, Payload, SegmentedWholeHistory, ViewKind, aligned_pieces

# ---------------------------------------------------------------- criteria


@dataclass(frozen=True)
class DiscountedSum:
    delta: Fraction

    def __post_init__(self) -> None:
        d = as_rational(self.delta)
        object.__setattr__(self, "delta", d)
        if not (0 < d < 1):
            raise ValueError("discount factor must lie strictly between 0 and 1 (use SimpleSum for 1)")

    view = ViewKind.PERSPECTIVE

    def __str__(self) -> str:
        return f"discounted:{self.delta}"


@dataclass(frozen=True)
class SimpleSum:
    view = ViewKind.PERSPECTIVE

    def __str__(self) -> str:
        return "simple"


@dataclass(frozen=True)
class Overtaking:
    view = ViewKind.PERSPECTIVE

    def __str__(self) -> str:
        return "overtaking"


@dataclass(frozen=True)
class LimitOfMeans:
    view = ViewKind.BIRDSEYE

    def __str__(self) -> str:
        return "limit-of-means"


Criterion = Union[DiscountedSum, SimpleSum, Overtaking, LimitOfMeans]


def parse_criterion(text: str) -> Criterion:
    t = text.strip()
    if t.startswith("discounted:"):
        return DiscountedSum(parse_rational(t.split(":", 1)[1]))
    if t == "simple":
        return SimpleSum()
    if t == "overtaking":
        return Overtaking()
    if t == "limit-of-means":
        return LimitOfMeans()
    raise ValueError(f"unknown criterion {text!r}; expected discounted:p/q, simple, overtaking or limit-of-means")


@dataclass(frozen=True)
class CriterionFlags:
    weak_separability: bool
    strict_separability: bool
    huge_transitivity: bool
    sooner_better: bool
    commutativity: bool
    # properties that hold for exact sums but are not claimed for this criterion in the literature
    derived_only: tuple[str, ...] = ()


def criterion_flags(c: Criterion) -> CriterionFlags:
    if isinstance(c, DiscountedSum):
        return CriterionFlags(True, False, True, True, False)
    if isinstance(c, SimpleSum):
        return CriterionFlags(True, False, True, False, True, derived_only=("sooner_better",))
    if isinstance(c, Overtaking):
        return CriterionFlags(True, True, True, False, True, derived_only=("sooner_better", "commutativity"))
    if isinstance(c, LimitOfMeans):
        return CriterionFlags(True, False, False, False, True)
    raise TypeError(f"not a criterion: {c!r}")


# ---------------------------------------------------------------- payoffs

Extras = Callable[[SegmentedWholeHistory, str], list[tuple[NonStdNum, NonStdNum]]]


@dataclass
class PayoffModel:
    """Per-period payoffs from a table over constituent terminals.

    ``extras`` may add whole-history terms, each placed at a period: a list
    of ``(period, amount)`` pairs.  The empty history (a period after the game
    ended) pays 0.
    """

    table: dict[History, dict[str, Fraction]]
    extras: Optional[Extras] = None
    note: str = ""
    players: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        clean: dict[History, dict[str, Fraction]] = {}
        for h, row in self.table.items():
            clean[tuple(h)] = {}
            for p, v in row.items():
                if isinstance(v, NonStdNum):
                    raise ValueError("payoffs must be finite rationals")
                clean[tuple(h)][p] = as_rational(v)
        self.table = clean
        if not self.players:
            seen: list[str] = []
            for row in clean.values():
                for p in row:
                    if p not in seen:
                        seen.append(p)
            self.players = tuple(seen)

    def u(self, payload: Payload, player: str) -> Fraction:
        if isinstance(payload, Cycle):
            return sum((self.u(h, player) for h in payload.unit), Fraction(0)) / len(payload.unit)
        if payload == EMPTY:
            return Fraction(0)
        try:
            return self.table[payload][player]
        except KeyError:
            raise KeyError(f"no payoff for {format_history(payload)} and player {player}") from None

    def extra_terms(self, h: SegmentedWholeHistory, player: str) -> list[tuple[NonStdNum, NonStdNum]]:
        return self.extras(h, player) if self.extras else []

    def with_values(self, updates: Mapping[History, Mapping[str, object]]) -> "PayoffModel":
        table = {h: dict(row) for h, row in self.table.items()}
        for h, row in updates.items():
            table.setdefault(tuple(h), {}).update({p: as_rational(v) for p, v in row.items()})
        return PayoffModel(table, self.extras, self.note, self.players)


PayoffTable = Mapping[History, Mapping[str, object]]


def as_model(u: "PayoffModel | PayoffTable") -> PayoffModel:
    return u if isinstance(u, PayoffModel) else PayoffModel({tuple(k): dict(v) for k, v in u.items()})


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _require_view(h: SegmentedWholeHistory, view: ViewKind) -> None:
    if h.is_huge and h.view is not view:
        raise ValueError(f"history uses the {h.view.value} view; this criterion needs the {view.value} view")


def _no_cycles(h: SegmentedWholeHistory) -> None:
    for seg in h.segments:
        if isinstance(seg.payload, Cycle) and seg.length.tau_coef > 0:
            raise ValueError("cyclic runs over a huge span are only supported by limit of means")


# ---------------------------------------------------------------- evaluations


def discounted_value(h: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str, delta: object) -> NonStdNum:
    """Exact discounted sum, infinitesimal tails recorded only by sign."""
    model = as_model(u)
    d = as_rational(delta)
    if not (0 < d < 1):
        raise ValueError("discount factor must lie strictly between 0 and 1")
    _require_view(h, ViewKind.PERSPECTIVE)
    value = Fraction(0)
    residue = 0
    for start, seg in zip(h.starts(), h.segments):
        if start.tau_coef != 0:
            for payoff in _payload_values(model, seg.payload, player):
                residue += _sign(payoff)
            continue
        first = int(start.unit_coef) - 1
        if isinstance(seg.payload, Cycle):
            unit = seg.payload.unit
            if seg.length.tau_coef == 0:
                for k in range(int(seg.length.unit_coef)):
                    value += model.u(unit[k % len(unit)], player) * d ** (first + k)
            else:
                period = len(unit)
                for k, comp in enumerate(unit):
                    value += model.u(comp, player) * d ** (first + k) / (1 - d**period)
                    residue -= _sign(model.u(comp, player))
            continue
        payoff = model.u(seg.payload, player)
        if seg.length.tau_coef == 0:
            value += payoff * geometric_sum(d, first, int(seg.length.unit_coef))
        else:
            # the terms beyond the end of the run are infinitesimal and missing
            value += payoff * geometric_tail(d, first)
            residue -= _sign(payoff)
    for pos, amount in model.extra_terms(h, player):
        if pos.tau_coef == 0 and amount.tau_coef == 0:
            value += amount.unit_coef * d ** (int(pos.unit_coef) - 1)
        else:
            residue += _sign(amount.tau_coef) or _sign(amount.unit_coef)
    return NonStdNum(Fraction(0), value, Residue((residue > 0) - (residue < 0)))


def _payload_values(model: PayoffModel, payload: Payload, player: str) -> list[Fraction]:
    if isinstance(payload, Cycle):
        return [model.u(c, player) for c in payload.unit]
    return [model.u(payload, player)]


def eval_discounted(h: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str, delta: object) -> ExtReal:
    return collapse(discounted_value(h, u, player, delta))


def simple_value(h: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str) -> NonStdNum:
    model = as_model(u)
    _require_view(h, ViewKind.PERSPECTIVE)
    _no_cycles(h)
    total = ZERO
    for seg in h.segments:
        if isinstance(seg.payload, Cycle):
            unit = seg.payload.unit
            count = int(seg.length.unit_coef)
            total = total + sum((model.u(unit[k % len(unit)], player) for k in range(count)), Fraction(0))
        else:
            total = total + seg.length.scale(model.u(seg.payload, player))
    for _, amount in model.extra_terms(h, player):
        total = total + amount
    return total


def eval_simple(h: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str) -> ExtReal:
    return collapse(simple_value(h, u, player))


def overtaking_difference(h1: SegmentedWholeHistory, h2: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str) -> NonStdNum:
    """Sum over all periods of the per-period payoff difference, as an exact quantity."""
    model = as_model(u)
    _require_view(h1, ViewKind.PERSPECTIVE)
    _require_view(h2, ViewKind.PERSPECTIVE)
    _no_cycles(h1)
    _no_cycles(h2)
    total = ZERO
    for _, length, p1, p2 in aligned_pieces(h1, h2):
        diff = model.u(p1, player) - model.u(p2, player)
        if diff:
            if isinstance(p1, Cycle) or isinstance(p2, Cycle):
                raise ValueError("cyclic runs are not supported by overtaking")
            total = total + length.scale(diff)
    for _, amount in model.extra_terms(h1, player):
        total = total + amount
    for _, amount in model.extra_terms(h2, player):
        total = total - amount
    return total


def cmp_overtaking(h1: SegmentedWholeHistory, h2: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str) -> int:
    return nsn_cmp(overtaking_difference(h1, h2, u, player), ZERO)


def eval_limit_means(h: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str) -> Fraction:
    """Fraction-weighted average; runs of finite length weigh nothing at a huge horizon."""
    model = as_model(u)
    if not h.is_huge:
        n = h.horizon.unit_coef
        total = sum((model.u(c, player) for c in h.components()), Fraction(0))
        total += sum((a.unit_coef for _, a in model.extra_terms(h, player)), Fraction(0))
        return total / n
    _require_view(h, ViewKind.BIRDSEYE)
    total = Fraction(0)
    for seg in h.segments:
        if seg.length.tau_coef > 0:
            total += seg.length.tau_coef * model.u(seg.payload, player)
    for _, amount in model.extra_terms(h, player):
        total += amount.tau_coef
    return total


# ---------------------------------------------------------------- generic access


def evaluate(c: Criterion, h: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str) -> Optional[ExtReal]:
    """The collapsed value of ``h``; overtaking has no value and returns None."""
    if isinstance(c, DiscountedSum):
        return eval_discounted(h, u, player, c.delta)
    if isinstance(c, SimpleSum):
        return eval_simple(h, u, player)
    if isinstance(c, LimitOfMeans):
        return ExtReal.finite(eval_limit_means(h, u, player))
    if isinstance(c, Overtaking):
        if not h.is_huge:
            return eval_simple(h, u, player)
        return None
    raise TypeError(f"not a criterion: {c!r}")


def compare(c: Criterion, h1: SegmentedWholeHistory, h2: SegmentedWholeHistory, u: "PayoffModel | PayoffTable", player: str) -> int:
    """-1, 0 or 1 according to how ``player`` ranks ``h1`` against ``h2``."""
    if isinstance(c, Overtaking):
        return cmp_overtaking(h1, h2, u, player)
    v1, v2 = evaluate(c, h1, u, player), evaluate(c, h2, u, player)
    return (v1 > v2) - (v1 < v2)
