"""Exact arithmetic for quantities of the form ``a*tau + b`` plus an infinitesimal tag.

``tau`` is a single symbolic huge number.  A :class:`NonStdNum` stores the
coefficient of ``tau``, a finite rational part and a signed infinitesimal
residue.  :func:`collapse` maps a value to its monad in the extended reals:
anything with a nonzero ``tau`` coefficient is infinite, everything else is
the finite part with the residue discarded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import total_ordering
from typing import Union

RationalLike = Union[int, Fraction]


def as_rational(value: RationalLike | str) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats and decimal strings are refused so that every quantity stays exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"rationals must be p/q, got {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    return str(q)


class Residue(IntEnum):
    """Sign of an infinitesimal term that survives exact bookkeeping."""

    NEG = -1
    ZERO = 0
    POS = 1


def _combine(r1: Residue, r2: Residue) -> Residue:
    # opposite signs cancel to zero; magnitudes of infinitesimals are never compared
    total = int(r1) + int(r2)
    return Residue((total > 0) - (total < 0))


@total_ordering
@dataclass(frozen=True)
class NonStdNum:
    """``tau_coef * tau + unit_coef`` plus an infinitesimal residue tag."""

    tau_coef: Fraction = Fraction(0)
    unit_coef: Fraction = Fraction(0)
    residue: Residue = Residue.ZERO

    def __post_init__(self) -> None:
        if type(self.tau_coef) is not Fraction:
            object.__setattr__(self, "tau_coef", as_rational(self.tau_coef))
        if type(self.unit_coef) is not Fraction:
            object.__setattr__(self, "unit_coef", as_rational(self.unit_coef))
        if type(self.residue) is not Residue:
            object.__setattr__(self, "residue", Residue(self.residue))

    @classmethod
    def _raw(cls, tau_coef: Fraction, unit_coef: Fraction, residue: Residue) -> "NonStdNum":
        # arithmetic fast path: operands are already validated
        x = object.__new__(cls)
        object.__setattr__(x, "tau_coef", tau_coef)
        object.__setattr__(x, "unit_coef", unit_coef)
        object.__setattr__(x, "residue", residue)
        return x

    @classmethod
    def of(cls, value: "NonStdNum | RationalLike") -> "NonStdNum":
        if isinstance(value, NonStdNum):
            return value
        return cls(Fraction(0), as_rational(value))

    @classmethod
    def tau(cls, coef: RationalLike = 1, unit: RationalLike = 0) -> "NonStdNum":
        return cls(as_rational(coef), as_rational(unit))

    @property
    def is_finite(self) -> bool:
        return self.tau_coef == 0

    @property
    def is_huge(self) -> bool:
        return self.tau_coef > 0

    def _key(self) -> tuple[Fraction, Fraction, int]:
        return (self.tau_coef, self.unit_coef, int(self.residue))

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, NonStdNum):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                other = NonStdNum.of(other)
            else:
                return NotImplemented
        return self._key() < other._key()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NonStdNum):
            return self._key() == other._key()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._key() == NonStdNum.of(other)._key()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key())

    def __add__(self, other: "NonStdNum | RationalLike") -> "NonStdNum":
        o = other if isinstance(other, NonStdNum) else NonStdNum.of(other)
        tau = self.tau_coef + o.tau_coef if o.tau_coef else self.tau_coef
        residue = self.residue if not o.residue else _combine(self.residue, o.residue)
        return NonStdNum._raw(tau, self.unit_coef + o.unit_coef, residue)

    __radd__ = __add__

    def __neg__(self) -> "NonStdNum":
        return NonStdNum(-self.tau_coef, -self.unit_coef, Residue(-int(self.residue)))

    def __sub__(self, other: "NonStdNum | RationalLike") -> "NonStdNum":
        return self + (-NonStdNum.of(other))

    def __rsub__(self, other: RationalLike) -> "NonStdNum":
        return NonStdNum.of(other) - self

    def scale(self, c: RationalLike) -> "NonStdNum":
        """Multiply by an exact rational scalar."""
        q = as_rational(c)
        sign = (q > 0) - (q < 0)
        return NonStdNum(self.tau_coef * q, self.unit_coef * q, Residue(int(self.residue) * sign))

    def __mul__(self, c: RationalLike) -> "NonStdNum":
        if isinstance(c, NonStdNum):
            raise TypeError("products of two nonstandard quantities are not supported")
        return self.scale(c)

    __rmul__ = __mul__

    def div_tau(self) -> "NonStdNum":
        """Divide by tau: ``a*tau + b`` becomes ``a`` plus an infinitesimal of the sign of ``b``."""
        if self.unit_coef != 0:
            residue = Residue(1 if self.unit_coef > 0 else -1)
        else:
            residue = self.residue
        return NonStdNum(Fraction(0), self.tau_coef, residue)

    def without_residue(self) -> "NonStdNum":
        return NonStdNum(self.tau_coef, self.unit_coef)

    def __str__(self) -> str:
        return format_nonstd(self)

    def __repr__(self) -> str:
        return f"NonStdNum({format_nonstd(self)!r})"


ZERO = NonStdNum()
ONE = NonStdNum.of(1)
TAU = NonStdNum.tau(1)


def nsn_add(x: NonStdNum, y: NonStdNum) -> NonStdNum:
    return x + y


def nsn_cmp(x: NonStdNum, y: NonStdNum) -> int:
    """Return -1, 0 or 1 under the lexicographic order."""
    if x < y:
        return -1
    if x == y:
        return 0
    return 1


@total_ordering
@dataclass(frozen=True)
class ExtReal:
    """A finite rational or one of the two infinities."""

    kind: int  # -1 for -inf, 0 for finite, 1 for +inf
    value: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.kind not in (-1, 0, 1):
            raise ValueError("kind must be -1, 0 or 1")
        object.__setattr__(self, "value", as_rational(self.value) if self.kind == 0 else Fraction(0))

    @classmethod
    def finite(cls, q: RationalLike) -> "ExtReal":
        return cls(0, as_rational(q))

    @property
    def is_finite(self) -> bool:
        return self.kind == 0

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, ExtReal):
            return NotImplemented
        return (self.kind, self.value) < (other.kind, other.value)

    def __str__(self) -> str:
        if self.kind < 0:
            return "-inf"
        if self.kind > 0:
            return "+inf"
        return format_rational(self.value)

    def __repr__(self) -> str:
        return f"ExtReal({str(self)!r})"


NEG_INF = ExtReal(-1)
POS_INF = ExtReal(1)


def collapse(x: NonStdNum) -> ExtReal:
    if x.tau_coef > 0:
        return POS_INF
    if x.tau_coef < 0:
        return NEG_INF
    return ExtReal.finite(x.unit_coef)


def indiscernible(x: NonStdNum, y: NonStdNum) -> bool:
    return collapse(x) == collapse(y)


def geometric_sum(delta: RationalLike, first_exponent: int, count: int) -> Fraction:
    """Exact value of ``sum(delta**(first_exponent + j) for j in range(count))``."""
    d = as_rational(delta)
    if d <= 0:
        raise ValueError("delta must be positive")
    if first_exponent < 0 or count < 0:
        raise ValueError("exponent and count must be nonnegative")
    if d == 1:
        return Fraction(count)
    return d**first_exponent * (1 - d**count) / (1 - d)


def geometric_tail(delta: RationalLike, first_exponent: int) -> Fraction:
    """Exact value of ``delta**first_exponent / (1 - delta)``."""
    d = as_rational(delta)
    if d <= 0:
        raise ValueError("delta must be positive")
    if d >= 1:
        raise ValueError("divergent tail")
    if first_exponent < 0:
        raise ValueError("exponent must be nonnegative")
    return d**first_exponent / (1 - d)


def format_nonstd(x: NonStdNum) -> str:
    unit = x.unit_coef
    sign = "-" if unit < 0 else "+"
    text = f"{format_rational(x.tau_coef)}*tau {sign} {format_rational(abs(unit))}"
    if x.residue is Residue.POS:
        text += " +eps"
    elif x.residue is Residue.NEG:
        text += " -eps"
    return text


def compact_nonstd(x: NonStdNum) -> str:
    """Short form without spaces, e.g. ``tau``, ``tau-1``, ``1/2*tau+3`` or ``5``."""
    parts = []
    if x.tau_coef:
        coef = "" if x.tau_coef == 1 else ("-" if x.tau_coef == -1 else f"{format_rational(x.tau_coef)}*")
        parts.append(f"{coef}tau")
    if x.unit_coef or not parts:
        text = format_rational(x.unit_coef)
        parts.append(text if not parts or x.unit_coef < 0 else "+" + text)
    if x.residue is Residue.POS:
        parts.append("+eps")
    elif x.residue is Residue.NEG:
        parts.append("-eps")
    return "".join(parts)


_NONSTD_TERM = re.compile(r"\s*([+-])?\s*([0-9]+(?:\s*/\s*[0-9]+)?)?\s*(\*?\s*tau|eps)?")


def parse_nonstd(text: str) -> NonStdNum:
    """Parse ``"a*tau + b [+eps|-eps]"`` and looser forms such as ``"tau/2 - 1"``."""
    source = text.strip()
    if not source:
        raise ValueError("empty quantity")
    # "tau/2" style: move the divisor in front of tau
    source = re.sub(r"tau\s*/\s*([0-9]+)", r"(1/\1)*tau", source)
    source = source.replace("(", "").replace(")", "")
    tau_coef = Fraction(0)
    unit = Fraction(0)
    residue = Residue.ZERO
    pos = 0
    first = True
    while pos < len(source):
        m = _NONSTD_TERM.match(source, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse quantity {text!r} at column {pos + 1}")
        sign_tok, num_tok, tail = m.group(1), m.group(2), m.group(3)
        if sign_tok is None and not first:
            raise ValueError(f"missing operator in {text!r} at column {pos + 1}")
        sign = -1 if sign_tok == "-" else 1
        if tail == "eps":
            if num_tok is not None:
                raise ValueError(f"eps takes no coefficient in {text!r}")
            residue = _combine(residue, Residue(sign))
        elif tail is not None:
            coef = parse_rational(num_tok) if num_tok is not None else Fraction(1)
            tau_coef += sign * coef
        else:
            if num_tok is None:
                raise ValueError(f"dangling sign in {text!r}")
            unit += sign * parse_rational(num_tok)
        first = False
        pos = m.end()
    return NonStdNum(tau_coef, unit, residue)


def parse_extreal(text: str) -> ExtReal:
    t = text.strip()
    if t == "-inf":
        return NEG_INF
    if t == "+inf":
        return POS_INF
    return ExtReal.finite(parse_rational(t))
