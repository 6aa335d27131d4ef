"""Quadratic extensions K[s]/(s^2 - d) of an exact field K."""
from __future__ import annotations


class QuadElem:
    __slots__ = ("a", "b", "F")

    def __init__(self, a, b, F: "QuadField"):
        self.a, self.b, self.F = a, b, F

    def _c(self, o) -> "QuadElem":
        if isinstance(o, QuadElem):
            return o
        return QuadElem(self.F.base_lift(o), self.F.bzero, self.F)

    def __add__(self, o):
        o = self._c(o)
        return QuadElem(self.a + o.a, self.b + o.b, self.F)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.F)

    def __sub__(self, o):
        o = self._c(o)
        return QuadElem(self.a - o.a, self.b - o.b, self.F)

    def __rsub__(self, o):
        return self._c(o) - self

    def __mul__(self, o):
        o = self._c(o)
        a, b, c, e = self.a, self.b, o.a, o.b
        return QuadElem(a * c + b * e * self.F.d, a * e + b * c, self.F)

    __rmul__ = __mul__

    def conj(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.F)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.F.d

    def inv(self) -> "QuadElem":
        nrm = self.norm()
        if not nrm:
            raise ZeroDivisionError("non-invertible element of the extension")
        return QuadElem(self.a / nrm, -self.b / nrm, self.F)

    def __truediv__(self, o):
        o = self._c(o)
        return self * o.inv()

    def __rtruediv__(self, o):
        return self._c(o) * self.inv()

    def __pow__(self, e: int):
        out = self.F.one
        base = self
        if e < 0:
            base, e = self.inv(), -e
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, o) -> bool:
        o = self._c(o)
        return not (self - o)

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"({self.a!r}) + ({self.b!r})*s"


class QuadField:
    """K(s) with s^2 = d; ``base`` is any field object from :mod:`mpoly.fields`."""

    name = "quadratic"

    def __init__(self, base, d):
        self.base = base
        self.d = d
        self.bzero = base.zero
        self.zero = QuadElem(base.zero, base.zero, self)
        self.one = QuadElem(base.one, base.zero, self)
        self.gen = QuadElem(base.zero, base.one, self)

    def base_lift(self, x):
        if isinstance(x, int):
            return self.base.one * x if x else self.base.zero
        return self.base.lift(x) if not _is_base_elem(x, self.base) else x

    def lift(self, x) -> QuadElem:
        if isinstance(x, QuadElem):
            return x
        return QuadElem(self.base_lift(x), self.bzero, self)

    def lower(self, x: QuadElem):
        if x.b:
            raise ValueError("element is not in the base field")
        return self.base.lower(x.a)


def _is_base_elem(x, base) -> bool:
    return type(x) is type(base.zero)
