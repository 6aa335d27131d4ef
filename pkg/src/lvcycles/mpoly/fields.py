"""Coefficient fields the reduction and focal engines can run over.

Every field exposes ``zero``, ``one``, ``lift(RatFunc)`` and ``lower(x)``
(back to a RatFunc or a Fraction).  Elements support ``+ - * /`` and truth
testing.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .factored import FactorBase, FRF
from .ratfunc import RatFunc


class RatFuncField:
    name = "ratfunc"

    def __init__(self, vars: Sequence[str] = ()):
        self.vars = tuple(vars)
        self.zero = RatFunc.const(0, self.vars)
        self.one = RatFunc.const(1, self.vars)

    def lift(self, r) -> RatFunc:
        return RatFunc.coerce(r)

    def lower(self, x: RatFunc) -> RatFunc:
        return x


class FactoredField:
    """Q(vars) with factored denominators; fast path for the symbolic pipeline."""

    name = "factored"

    def __init__(self, vars: Sequence[str]):
        self.vars = tuple(vars)
        self.base = FactorBase(self.vars)
        self.zero = self.base.const(0)
        self.one = self.base.const(1)

    def lift(self, r) -> FRF:
        if isinstance(r, FRF):
            return r
        r = RatFunc.coerce(r)
        if r.used_vars() and not set(r.used_vars()) <= set(self.vars):
            raise ValueError(f"rational function uses {r.used_vars()} outside {self.vars}")
        return self.base.from_ratfunc(RatFunc(r.num.with_vars(self.vars), r.den.with_vars(self.vars), normalized=True))

    def lower(self, x: FRF) -> RatFunc:
        return x.to_ratfunc()


class PointField:
    """Q itself, with rational functions evaluated at a fixed parameter point."""

    name = "point"

    def __init__(self, point: Mapping[str, Fraction]):
        self.point = {k: Fraction(v) for k, v in point.items()}
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def lift(self, r) -> Fraction:
        if isinstance(r, (int, Fraction)):
            return Fraction(r)
        return Fraction(RatFunc.coerce(r).eval(self.point))

    def lower(self, x) -> Fraction:
        return Fraction(x)
