"""Rational functions kept in lowest terms.

Normal form: integer numerator and denominator, polynomial gcd removed,
combined integer content 1, and the denominator's leading coefficient
positive under the package's graded-lex order.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .algorithms import poly_gcd
from .poly import MPoly, merge_vars


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None, *, normalized: bool = False):
        if den is None:
            den = MPoly.const(1, num.vars)
        num, den = num._align(den)
        if normalized:
            self.num, self.den = num, den
            return
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = num, MPoly.const(1, num.vars)
            return
        if not den.is_constant() and not num.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.divexact(g)
                den = den.divexact(g)
        cn, pn = num.primitive()
        cd, pd = den.primitive()
        c = cn / cd
        self.num = pn.scale(c.numerator)
        self.den = pd.scale(c.denominator)

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, c, vars=()) -> "RatFunc":
        c = Fraction(c)
        return cls(MPoly.const(c.numerator, vars), MPoly.const(c.denominator, vars), normalized=True)

    @classmethod
    def var(cls, name: str, vars=None) -> "RatFunc":
        p = MPoly.var(name, vars)
        return cls(p, MPoly.const(1, p.vars), normalized=True)

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, MPoly):
            return cls(x)
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        from .parse import parse_expr

        if isinstance(x, str):
            return parse_expr(x)
        raise TypeError(f"cannot convert {x!r} to a rational function")

    # queries ------------------------------------------------------------------
    @property
    def vars(self):
        return self.num.vars

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return Fraction(self.num.constant_value()) / self.den.constant_value()

    def used_vars(self):
        return merge_vars(self.num.used_vars(), self.den.used_vars())

    def as_poly(self) -> MPoly:
        if not self.den.is_constant():
            raise ValueError("rational function is not a polynomial")
        return self.num.scale(Fraction(1, self.den.constant_value()))

    # arithmetic --------------------------------------------------------------
    def _other(self, o):
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, (int, Fraction, MPoly)):
            return RatFunc.coerce(o)
        return None

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, normalized=True)

    def __add__(self, o) -> "RatFunc":
        o = self._other(o)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if self.den.is_constant() or o.den.is_constant():
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        g = poly_gcd(self.den, o.den)
        if g.is_constant():
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        a = self.den.divexact(g)
        b = o.den.divexact(g)
        return RatFunc(self.num * b + o.num * a, a * o.den)

    __radd__ = __add__

    def __sub__(self, o) -> "RatFunc":
        o = self._other(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o) -> "RatFunc":
        return (-self) + o

    def __mul__(self, o) -> "RatFunc":
        o = self._other(o)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return RatFunc(MPoly.zero(merge_vars(self.vars, o.vars)))
        if o.is_constant():
            c = o.constant_value()
            return RatFunc(self.num.scale(c.numerator), self.den.scale(c.denominator))
        if self.is_constant():
            return o * self
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1 = self.num.divexact(g1) if not g1.is_constant() else self.num
        d2 = o.den.divexact(g1) if not g1.is_constant() else o.den
        n2 = o.num.divexact(g2) if not g2.is_constant() else o.num
        d1 = self.den.divexact(g2) if not g2.is_constant() else self.den
        return RatFunc(n1 * n2, d1 * d2, normalized=False)

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, o) -> "RatFunc":
        o = self._other(o)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, o) -> "RatFunc":
        return RatFunc.coerce(o) * self.inv()

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return self.inv() ** (-e)
        return RatFunc(self.num**e, self.den**e, normalized=True).renormalize_sign()

    def renormalize_sign(self) -> "RatFunc":
        if self.den.lc() < 0:
            return RatFunc(-self.num, -self.den, normalized=True)
        return self

    def normalize(self) -> "RatFunc":
        return RatFunc(self.num, self.den)

    # evaluation ----------------------------------------------------------------
    def eval(self, point: Mapping[str, object]):
        d = self.den.eval(point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        n = self.num.eval(point)
        if isinstance(n, int) and isinstance(d, int):
            return Fraction(n, d)
        return n / d

    def subs(self, mapping: Mapping[str, object]) -> "RatFunc":
        """Substitute rationals, polynomials or rational functions."""
        rf = {k: RatFunc.coerce(v) for k, v in mapping.items()}
        if all(v.den.is_constant() for v in rf.values()):
            polys = {k: v.as_poly() for k, v in rf.items()}
            return RatFunc(self.num.subs(polys), self.den.subs(polys))
        return subs_ratfunc_poly(self.num, rf) / subs_ratfunc_poly(self.den, rf)

    def diff(self, var: str) -> "RatFunc":
        return RatFunc(self.num.diff(var) * self.den - self.num * self.den.diff(var), self.den * self.den)

    # comparison / text -----------------------------------------------------------
    def __eq__(self, o) -> bool:
        o = self._other(o) if not isinstance(o, RatFunc) else o
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        return format_ratfunc(self)

    def __repr__(self) -> str:
        return f"RatFunc({format_ratfunc(self)!r})"


def subs_ratfunc_poly(p: MPoly, mapping: Mapping[str, RatFunc]) -> RatFunc:
    """Substitute rational functions into a polynomial by Horner-free expansion."""
    keep = [v for v in p.vars if v not in mapping]
    out = RatFunc(MPoly.zero(p.vars))
    cache: dict = {}
    for exps, c in p.monomials():
        term = RatFunc(MPoly.from_dict({tuple(e if v in keep else 0 for v, e in zip(p.vars, exps)): c}, p.vars))
        for v, e in zip(p.vars, exps):
            if e and v in mapping:
                key = (v, e)
                if key not in cache:
                    cache[key] = mapping[v] ** e
                term = term * cache[key]
        out = out + term
    return out


def format_ratfunc(r: RatFunc) -> str:
    num = str(r.num)
    if r.den == 1:
        return num
    den = str(r.den)
    if len(r.num) > 1:
        num = f"({num})"
    if len(r.den) > 1 or not r.den.is_constant():
        den = f"({den})"
    return f"{num}/{den}"
