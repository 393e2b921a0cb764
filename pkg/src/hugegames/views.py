"""Temporal views of the periods ``1..tau`` and segmented whole histories.

The perspective view distinguishes each near-future period, each near-end
period and one distant-future block.  The bird's-eye view sees the periods as
a continuum of equally sized monads and measures sets by their fraction of
``tau``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .game import EMPTY, History, format_history
from .nonstd import ONE, TAU, ZERO, ExtReal, NonStdNum, POS_INF, as_rational


class ViewKind(Enum):
    PERSPECTIVE = "perspective"
    BIRDSEYE = "birdseye"


# ---------------------------------------------------------------- position classes


@dataclass(frozen=True, order=True)
class NearFuture:
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("near-future index must be nonnegative")

    def __str__(self) -> str:
        return f"near-future({self.n})"


@dataclass(frozen=True)
class DistantFuture:
    def __str__(self) -> str:
        return "distant-future"


@dataclass(frozen=True, order=True)
class NearEnd:
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("near-end index must be nonnegative")

    def __str__(self) -> str:
        return f"near-end({self.n})"


@dataclass(frozen=True, order=True)
class MonadPoint:
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i < 0 or self.j < 0:
            raise ValueError("monad indices must be nonnegative")
        if self.i < 2 and self.j != 0:
            raise ValueError(f"monad ({self.i},{self.j}): j must be 0 when i < 2")
        if self.i >= 2 and self.j >= 2 ** (self.i - 2):
            raise ValueError(f"monad ({self.i},{self.j}): j must be below {2 ** (self.i - 2)}")

    @property
    def fraction(self) -> Fraction:
        return birdseye_choice_point(self.i, self.j)

    def __str__(self) -> str:
        return f"monad({self.i},{self.j})"


@dataclass(frozen=True)
class FractionInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (0 <= lo < hi <= 1):
            raise ValueError(f"interval [{lo},{hi}] must satisfy 0 <= lo < hi <= 1")

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


PerspectiveClass = Union[NearFuture, DistantFuture, NearEnd]
BirdsEyeClass = Union[MonadPoint, FractionInterval]
PositionClass = Union[NearFuture, DistantFuture, NearEnd, MonadPoint, FractionInterval]


def perspective_choice_point(i: int) -> PerspectiveClass:
    """Choice points enumerate the distant block, then alternate near end and near future."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    if i == 0:
        return DistantFuture()
    if i % 2 == 1:
        return NearEnd((i - 1) // 2)
    return NearFuture(i // 2 - 1)


def perspective_measure(points: Iterable[PositionClass]) -> ExtReal:
    pts = set(points)
    for p in pts:
        if not isinstance(p, (NearFuture, DistantFuture, NearEnd)):
            raise ValueError(f"{p} is not a perspective position")
    if DistantFuture() in pts:
        return POS_INF
    return ExtReal.finite(len(pts))


def birdseye_choice_point(i: int, j: int) -> Fraction:
    """Position of monad ``(i, j)`` as a fraction of tau (0 marks period 1)."""
    if i < 0 or j < 0:
        raise ValueError("indices must be nonnegative")
    if i < 2:
        if j != 0:
            raise ValueError(f"j must be 0 when i < 2, got ({i},{j})")
        return Fraction(i)
    if j >= 2 ** (i - 2):
        raise ValueError(f"j={j} out of range for i={i}")
    return Fraction(2 * j + 1, 2 ** (i - 1))


def birdseye_measure(region: Union[FractionInterval, MonadPoint]) -> Fraction:
    if isinstance(region, MonadPoint):
        return Fraction(0)
    return region.hi - region.lo


# ---------------------------------------------------------------- horizons and periods


@dataclass(frozen=True)
class FiniteHorizon:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("horizon must be at least 1")

    @property
    def length(self) -> NonStdNum:
        return NonStdNum.of(self.n)

    def __str__(self) -> str:
        return f"n={self.n}"


@dataclass(frozen=True)
class HugeHorizon:
    view: ViewKind = ViewKind.PERSPECTIVE

    @property
    def length(self) -> NonStdNum:
        return TAU

    def __str__(self) -> str:
        return f"huge:{self.view.value}"


Horizon = Union[FiniteHorizon, HugeHorizon]


def period_of(position: PositionClass, horizon: Horizon) -> NonStdNum:
    """The representative period (1-based) of a position class."""
    total = horizon.length
    if isinstance(position, NearFuture):
        return NonStdNum.of(position.n + 1)
    if isinstance(position, NearEnd):
        return total - position.n
    if isinstance(position, DistantFuture):
        if isinstance(horizon, FiniteHorizon):
            return NonStdNum.of((horizon.n + 1) // 2)
        return TAU.scale(Fraction(1, 2))
    if isinstance(position, MonadPoint):
        f = position.fraction
        if f == 0:
            return ONE
        return total.scale(f) if isinstance(horizon, HugeHorizon) else NonStdNum.of(max(1, int(horizon.n * f)))
    raise ValueError(f"{position} has no single representative period")


def classify_period(t: int, total: int, cutoff: int) -> PerspectiveClass:
    """Perspective class of a concrete period when 'finite' means below ``cutoff``."""
    if not 1 <= t <= total:
        raise ValueError("period out of range")
    if t - 1 < cutoff:
        return NearFuture(t - 1)
    if total - t < cutoff:
        return NearEnd(total - t)
    return DistantFuture()


def perspective_approx_size(i: int, k: int, tau: int) -> int:
    """Size of the k-th approximating set of the monad of choice point ``i`` (perspective view)."""
    at_least_one = 1 if k >= 1 else 0
    if i == 0:
        return tau - 2**k * at_least_one
    return (1 if 2**k >= i else 0) * at_least_one


def birdseye_approx_size(i: int, k: int, tau: int) -> Fraction:
    """Size of the k-th approximating set of the monad ``(i, j)`` (independent of ``j``)."""
    if k < i:
        return Fraction(0)
    return Fraction(tau, 2 ** (k - 1 + (1 if i < 2 else 0)))


def interval_monad_count(k: int, lo: int, hi: int, tau: int) -> int:
    """Approximate number of level-k monads inside periods ``lo+1..hi``."""
    scale = 2 ** (k - 1)
    return sum(1 for j in range(scale) if lo < Fraction(tau * j, scale) <= hi)


# ---------------------------------------------------------------- segmented histories


@dataclass(frozen=True)
class Cycle:
    """A finite unit of per-period histories repeated to fill a segment."""

    unit: tuple[History, ...]

    def __post_init__(self) -> None:
        if not self.unit:
            raise ValueError("a cycle needs at least one period")

    def __str__(self) -> str:
        return "[" + " ".join(format_history(h) for h in self.unit) + "]"


Payload = Union[History, Cycle]


def format_payload(p: Payload) -> str:
    return str(p) if isinstance(p, Cycle) else format_history(p)


@dataclass(frozen=True)
class Segment:
    length: NonStdNum
    payload: Payload

    def __post_init__(self) -> None:
        length = self.length if type(self.length) is NonStdNum else NonStdNum.of(self.length)
        object.__setattr__(self, "length", length)
        if type(self.payload) is list:
            object.__setattr__(self, "payload", tuple(self.payload))
        if length.residue:
            raise ValueError("segment lengths carry no infinitesimal residue")
        tau, unit = length.tau_coef, length.unit_coef
        if tau.numerator == 0:
            if unit.denominator != 1 or unit.numerator < 1:
                raise ValueError(f"finite segment length must be a positive integer, got {length}")
        elif tau.numerator < 0 or tau.numerator > tau.denominator:
            raise ValueError(f"segment length {length} has tau coefficient outside [0,1]")


@dataclass(frozen=True)
class SegmentedWholeHistory:
    """Finitely many runs of per-period histories whose lengths add up to the horizon.

    Periods after the game has ended carry the empty history ``()``.
    """

    segments: tuple[Segment, ...]
    view: ViewKind = ViewKind.PERSPECTIVE
    horizon: NonStdNum = TAU

    def __post_init__(self) -> None:
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "horizon", NonStdNum.of(self.horizon))
        total = sum((s.length for s in segs), ZERO)
        if total != self.horizon:
            raise ValueError(f"segment lengths sum to {total}, not {self.horizon}")

    # -- builders -----------------------------------------------------------

    @classmethod
    def of(cls, runs: Sequence[tuple[object, Payload]], view: ViewKind = ViewKind.PERSPECTIVE, horizon: object = TAU) -> "SegmentedWholeHistory":
        return cls(tuple(Segment(NonStdNum.of(length), payload) for length, payload in runs), view, NonStdNum.of(horizon))

    @classmethod
    def explicit(cls, components: Sequence[History], n: int, view: ViewKind = ViewKind.PERSPECTIVE) -> "SegmentedWholeHistory":
        """A finite-horizon whole history, padded with empty periods up to ``n``."""
        comps = [tuple(c) for c in components]
        if len(comps) > n:
            raise ValueError("more periods than the horizon")
        comps += [EMPTY] * (n - len(comps))
        return canonicalize(cls(tuple(Segment(ONE, c) for c in comps), view, NonStdNum.of(n)))

    # -- queries ------------------------------------------------------------

    @property
    def is_huge(self) -> bool:
        return self.horizon.tau_coef > 0

    def starts(self) -> list[NonStdNum]:
        out = []
        pos = ONE
        for s in self.segments:
            out.append(pos)
            pos = pos + s.length
        return out

    def payload_at(self, period: NonStdNum) -> Payload:
        period = NonStdNum.of(period)
        for start, seg in zip(self.starts(), self.segments):
            if start <= period < start + seg.length:
                return seg.payload
        raise ValueError(f"period {period} outside the horizon")

    def components(self) -> list[History]:
        """Explicit per-period list (finite horizons only, cycles expanded)."""
        if self.is_huge:
            raise ValueError("cannot list the periods of a huge horizon")
        out: list[History] = []
        for seg in self.segments:
            count = int(seg.length.unit_coef)
            if isinstance(seg.payload, Cycle):
                unit = seg.payload.unit
                out.extend(unit[k % len(unit)] for k in range(count))
            else:
                out.extend([seg.payload] * count)
        return out

    def played(self) -> list[History]:
        """Explicit periods without the trailing empty padding (finite horizons only)."""
        comps = self.components()
        while comps and comps[-1] == EMPTY:
            comps.pop()
        return comps

    def count(self, predicate) -> NonStdNum:
        """Number of periods whose (non-cycle) payload satisfies ``predicate``."""
        total = ZERO
        for seg in self.segments:
            if isinstance(seg.payload, Cycle) and seg.length.tau_coef == 0:
                unit = seg.payload.unit
                hits = sum(1 for k in range(int(seg.length.unit_coef)) if predicate(unit[k % len(unit)]))
                total = total + hits
            elif isinstance(seg.payload, Cycle):
                hits = sum(1 for h in seg.payload.unit if predicate(h))
                if hits == 0:
                    continue
                if hits == len(seg.payload.unit):
                    total = total + seg.length
                else:
                    total = total + seg.length.scale(Fraction(hits, len(seg.payload.unit)))
            elif predicate(seg.payload):
                total = total + seg.length
        return total

    def render(self) -> str:
        return render_segments(self.segments, self.view)

    def __str__(self) -> str:
        return self.render()


def _phase_preserved(seg: Segment) -> bool:
    # a finite cycle run can absorb the next copy only when it ends on a full unit
    if not isinstance(seg.payload, Cycle) or seg.length.tau_coef > 0:
        return True
    return seg.length.unit_coef % len(seg.payload.unit) == 0


def canonicalize(h: SegmentedWholeHistory) -> SegmentedWholeHistory:
    merged: list[Segment] = []
    for seg in h.segments:
        if merged and merged[-1].payload == seg.payload and _phase_preserved(merged[-1]):
            merged[-1] = Segment(merged[-1].length + seg.length, seg.payload)
        else:
            merged.append(seg)
    return SegmentedWholeHistory(tuple(merged), h.view, h.horizon)


def consistent_with_view(h: SegmentedWholeHistory, view: ViewKind) -> bool:
    huge = [s for s in h.segments if s.length.tau_coef > 0]
    if view is ViewKind.PERSPECTIVE:
        return len(huge) == 1
    return len(huge) == len(h.segments)


def prefix_segments(segments: Sequence[Segment], periods: NonStdNum) -> tuple[Segment, ...]:
    """The first ``periods`` periods of a run list."""
    out: list[Segment] = []
    remaining = NonStdNum.of(periods)
    for seg in segments:
        if remaining <= ZERO:
            break
        if seg.length <= remaining:
            out.append(seg)
            remaining = remaining - seg.length
        else:
            out.append(Segment(remaining, seg.payload))
            remaining = ZERO
    if remaining > ZERO:
        raise ValueError("prefix longer than the run list")
    return tuple(out)


def same_runs(a: Sequence[Segment], b: Sequence[Segment]) -> bool:
    """Period-by-period equality of two run lists."""
    return _merge(a) == _merge(b)


def _merge(segs: Sequence[Segment]) -> list[tuple[NonStdNum, Payload]]:
    out: list[tuple[NonStdNum, Payload]] = []
    for s in segs:
        if out and out[-1][1] == s.payload:
            out[-1] = (out[-1][0] + s.length, s.payload)
        else:
            out.append((s.length, s.payload))
    return out


def aligned_pieces(a: SegmentedWholeHistory, b: SegmentedWholeHistory) -> list[tuple[NonStdNum, NonStdNum, Payload, Payload]]:
    """Split two histories at common breakpoints: (start, length, payload_a, payload_b)."""
    if a.horizon != b.horizon:
        raise ValueError("misaligned horizons")
    cuts = sorted({*a.starts(), *b.starts(), a.horizon + 1})
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        out.append((lo, hi - lo, a.payload_at(lo), b.payload_at(lo)))
    return out


# ---------------------------------------------------------------- textual notation


def _format_length(length: NonStdNum, view: ViewKind) -> str:
    from .nonstd import compact_nonstd, format_rational

    if length.tau_coef == 0:
        return compact_nonstd(length) if view is ViewKind.PERSPECTIVE else f"#{compact_nonstd(length)}"
    if length.unit_coef == 0 and view is ViewKind.BIRDSEYE:
        return format_rational(length.tau_coef)
    return compact_nonstd(length)


def render_segments(segments: Sequence[Segment], view: ViewKind) -> str:
    parts = []
    for seg in segments:
        parts.append(f"{format_payload(seg.payload)}*{_format_length(seg.length, view)}")
    return ", ".join(parts)
