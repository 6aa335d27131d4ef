"""Exact rationals and closed intervals with rational endpoints.

Rationals are :class:`fractions.Fraction`; the module adds the text encoding
used by every file format in the package and a small interval type whose
arithmetic is exact (endpoints never round).
"""
from __future__ import annotations

import enum
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

_OPS = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or ``"-p/q"`` (decimal digits only)."""
    s = text.strip()
    body = s[1:] if s[:1] in "+-" else s
    num, sep, den = body.partition("/")
    if not num.isdigit() or (sep and not den.isdigit()):
        raise ValueError(f"malformed rational {text!r}")
    value = Fraction(int(num), int(den) if sep else 1)
    return -value if s.startswith("-") else value


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction:
    """Exact ``a op b`` for op in ``+ - * /``; raises ZeroDivisionError on ``/ 0``."""
    try:
        fn = _OPS[op.replace("×", "*").replace("÷", "/").replace("−", "-")]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    return fn(as_rational(a), as_rational(b))


class Sign(enum.Enum):
    POS = "+"
    NEG = "-"
    ZERO = "0"
    UNKNOWN = "?"

    @property
    def certified(self) -> bool:
        return self is not Sign.UNKNOWN

    def __neg__(self) -> "Sign":
        return {Sign.POS: Sign.NEG, Sign.NEG: Sign.POS}.get(self, self)

    def __mul__(self, other: "Sign") -> "Sign":
        if Sign.UNKNOWN in (self, other):
            return Sign.UNKNOWN
        if Sign.ZERO in (self, other):
            return Sign.ZERO
        return Sign.POS if self is other else Sign.NEG

    def __str__(self) -> str:
        return self.value


def sign_of(x: Fraction | int) -> Sign:
    return Sign.POS if x > 0 else Sign.NEG if x < 0 else Sign.ZERO


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.lo, Fraction):
            object.__setattr__(self, "lo", as_rational(self.lo))
        if not isinstance(self.hi, Fraction):
            object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: RationalLike) -> "Interval":
        x = as_rational(x)
        return cls(x, x)

    @classmethod
    def coerce(cls, x: "Interval | RationalLike") -> "Interval":
        return x if isinstance(x, Interval) else cls.point(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: "Interval | RationalLike") -> bool:
        other = Interval.coerce(x)
        return self.lo <= other.lo and other.hi <= self.hi

    def interior_contains(self, x: "Interval | RationalLike") -> bool:
        other = Interval.coerce(x)
        return self.lo < other.lo and other.hi < self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def bisect(self) -> tuple["Interval", "Interval"]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    def sign(self) -> Sign:
        return ival_eval_sign(self)

    def __add__(self, other):
        o = Interval.coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = Interval.coerce(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        o = Interval.coerce(other)
        if o.lo == o.hi:
            c = o.lo
            return Interval(self.lo * c, self.hi * c) if c >= 0 else Interval(self.hi * c, self.lo * c)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Interval.coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError(f"interval divisor {o} contains 0")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return Interval.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return Interval.point(1) / self**-k
        if k == 0:
            return Interval.point(1)
        a, b = self.lo**k, self.hi**k
        if k % 2 == 1:
            return Interval(a, b)
        if self.lo >= 0:
            return Interval(a, b)
        if self.hi <= 0:
            return Interval(b, a)
        return Interval(Fraction(0), max(a, b))

    def __str__(self) -> str:
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


def ival_eval_sign(x: Interval) -> Sign:
    if x.lo > 0:
        return Sign.POS
    if x.hi < 0:
        return Sign.NEG
    if x.lo == 0 and x.hi == 0:
        return Sign.ZERO
    return Sign.UNKNOWN
