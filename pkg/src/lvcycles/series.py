"""Truncated multivariate polynomials with coefficients in an arbitrary field.

Keys use the same packed layout as :mod:`lvcycles.mpoly.poly`, so a key below
``(D + 1) << (W * k)`` means total degree at most ``D``.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .mpoly.poly import MASK, W, pack, unpack


class TPoly:
    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: dict | None = None):
        self.k = k
        self.terms = terms if terms is not None else {}

    @classmethod
    def monomial(cls, k: int, exps: Sequence[int], c) -> "TPoly":
        return cls(k, {pack(exps): c} if c else {})

    @classmethod
    def linear(cls, k: int, coeffs: Sequence) -> "TPoly":
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * k
                e[i] = 1
                terms[pack(e)] = c
        return cls(k, terms)

    def copy(self) -> "TPoly":
        return TPoly(self.k, dict(self.terms))

    def items(self):
        k = self.k
        return ((unpack(key, k), c) for key, c in self.terms.items())

    def get(self, exps: Sequence[int], default=None):
        return self.terms.get(pack(exps), default)

    def degree(self) -> int:
        return max((key >> (W * self.k) for key in self.terms), default=-1)

    def low_degree(self) -> int:
        return min((key >> (W * self.k) for key in self.terms), default=-1)

    def homogeneous(self, d: int) -> "TPoly":
        s = W * self.k
        return TPoly(self.k, {key: c for key, c in self.terms.items() if key >> s == d})

    def truncate(self, d: int) -> "TPoly":
        limit = (d + 1) << (W * self.k)
        return TPoly(self.k, {key: c for key, c in self.terms.items() if key < limit})

    def without_degree_below(self, d: int) -> "TPoly":
        floor = d << (W * self.k)
        return TPoly(self.k, {key: c for key, c in self.terms.items() if key >= floor})

    def __add__(self, o: "TPoly") -> "TPoly":
        out = dict(self.terms)
        for key, c in o.terms.items():
            if key in out:
                s = out[key] + c
                if s:
                    out[key] = s
                else:
                    del out[key]
            else:
                out[key] = c
        return TPoly(self.k, out)

    def __neg__(self) -> "TPoly":
        return TPoly(self.k, {key: -c for key, c in self.terms.items()})

    def __sub__(self, o: "TPoly") -> "TPoly":
        return self + (-o)

    def scale(self, c) -> "TPoly":
        if not c:
            return TPoly(self.k, {})
        return TPoly(self.k, {key: v * c for key, v in self.terms.items()})

    def mul(self, o: "TPoly", max_degree: int) -> "TPoly":
        limit = (max_degree + 1) << (W * self.k)
        out: dict = {}
        right = sorted(o.terms.items())
        for ka, ca in self.terms.items():
            bound = limit - ka
            for kb, cb in right:
                if kb >= bound:
                    break
                key = ka + kb
                t = ca * cb
                if key in out:
                    out[key] = out[key] + t
                else:
                    out[key] = t
        return TPoly(self.k, {key: c for key, c in out.items() if c})

    def diff(self, i: int) -> "TPoly":
        k = self.k
        shift = W * (k - 1 - i)
        one = (1 << shift) + (1 << (W * k))
        out = {}
        for key, c in self.terms.items():
            e = (key >> shift) & MASK
            if e:
                out[key - one] = c * e
        return TPoly(k, out)

    def map(self, fn: Callable) -> "TPoly":
        out = {}
        for key, c in self.terms.items():
            v = fn(c)
            if v:
                out[key] = v
        return TPoly(self.k, out)


def compose(p: TPoly, subs: Sequence[TPoly], max_degree: int, one) -> TPoly:
    """p(subs[0], ..., subs[k-1]) truncated; ``subs`` live in a common k'-variable ring."""
    k2 = subs[0].k
    powers: list[list[TPoly]] = [[TPoly(k2, {0: one})] for _ in subs]
    out = TPoly(k2, {})
    for exps, c in sorted(p.items()):
        term = TPoly(k2, {0: c})
        for i, e in enumerate(exps):
            if e:
                pw = powers[i]
                while len(pw) <= e:
                    pw.append(pw[-1].mul(subs[i], max_degree))
                term = term.mul(pw[e], max_degree)
        out = out + term
    return out


def sum_tpolys(k: int, items: Iterable[TPoly]) -> TPoly:
    out = TPoly(k, {})
    for t in items:
        out = out + t
    return out


def product_degree(p: TPoly, q: TPoly, d: int) -> TPoly:
    """Homogeneous degree-d part of p*q, skipping all other degrees."""
    s = W * p.k
    by_deg: dict[int, list] = {}
    for key, c in q.terms.items():
        by_deg.setdefault(key >> s, []).append((key, c))
    out: dict = {}
    for ka, ca in p.terms.items():
        for kb, cb in by_deg.get(d - (ka >> s), ()):
            key = ka + kb
            t = ca * cb
            if key in out:
                out[key] = out[key] + t
            else:
                out[key] = t
    return TPoly(p.k, {key: c for key, c in out.items() if c})
