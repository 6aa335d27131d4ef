"""Rational functions with factored denominators over a shared factor base.

A value is ``c * N / prod(f_i ** e_i)`` where ``c`` is a rational, ``N`` an
integral primitive polynomial with positive leading coefficient and the
``f_i`` are entries of a :class:`FactorBase`.  Sums never need a polynomial
gcd: the common denominator is the exponent-wise maximum and cancellation is
attempted by exact division, gated by residues of ``N`` at points on
``f_i = 0`` modulo a 61-bit prime.  A non-zero residue proves ``f_i`` does not
divide ``N``; a zero residue only makes the division worth trying.

Residues of ``N`` are propagated through ring operations algebraically, so
most gate checks cost a list lookup.
"""
from __future__ import annotations

import hashlib
import random
import threading
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .algorithms import _content_in, poly_gcd, squarefree
from .poly import MPoly, unpack
from .ratfunc import RatFunc

P = (1 << 61) - 1
POINTS_PER_FACTOR = 2


def eval_mod(poly: MPoly, pt: Sequence[int]) -> int:
    k = len(poly.vars)
    if not poly.terms:
        return 0
    pows = []
    for i in range(k):
        pows.append([1])
    total = 0
    for key, c in poly.terms.items():
        e = unpack(key, k)
        t = c % P
        for i in range(k):
            ei = e[i]
            if ei:
                pw = pows[i]
                while len(pw) <= ei:
                    pw.append(pw[-1] * pt[i] % P)
                t = t * pw[ei] % P
        total += t
    return total % P


def _poly_roots_mod(coeffs: list[int], rng: random.Random) -> list[int]:
    """Roots in F_P of a univariate polynomial (dense, low first)."""
    f = _pm_trim([c % P for c in coeffs])
    if len(f) <= 1:
        return []
    if len(f) == 2:
        return [(-f[0]) * pow(f[1], P - 2, P) % P]
    # g = gcd(f, x^P - x) collects the linear factors
    xp = _pm_powmod([0, 1], P, f)
    g = _pm_gcd(f, _pm_sub(xp, [0, 1]))
    return _pm_split_roots(g, rng)


def _pm_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pm_sub(a, b):
    n = max(len(a), len(b))
    return _pm_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % P for i in range(n)])


def _pm_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % P
    return _pm_trim(out)


def _pm_rem(a, b):
    a = list(a)
    inv = pow(b[-1], P - 2, P)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        q = a[-1] * inv % P
        s = len(a) - 1 - db
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - q * y) % P
        _pm_trim(a)
    return a


def _pm_powmod(base, e, mod):
    result = [1]
    base = _pm_rem(base, mod)
    while e:
        if e & 1:
            result = _pm_rem(_pm_mul(result, base), mod)
        e >>= 1
        if e:
            base = _pm_rem(_pm_mul(base, base), mod)
    return result


def _pm_gcd(a, b):
    a, b = _pm_trim(list(a)), _pm_trim(list(b))
    while b:
        a, b = b, _pm_rem(a, b)
    if a:
        inv = pow(a[-1], P - 2, P)
        a = [x * inv % P for x in a]
    return a


def _pm_split_roots(g, rng):
    d = len(g) - 1
    if d <= 0:
        return []
    if d == 1:
        return [(-g[0]) * pow(g[1], P - 2, P) % P]
    for _ in range(64):
        a = rng.randrange(P)
        h = _pm_powmod([a, 1], (P - 1) // 2, g)
        h = _pm_gcd(g, _pm_sub(h, [1]))
        if 0 < len(h) - 1 < d:
            q = _pm_div(g, h)
            return _pm_split_roots(h, rng) + _pm_split_roots(q, rng)
    return []


def _pm_div(a, b):
    a = list(a)
    inv = pow(b[-1], P - 2, P)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % P
        s = len(a) - 1 - db
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - c * y) % P
        _pm_trim(a)
    return q


def _is_linear_irreducible(f: MPoly) -> bool:
    for v in f.used_vars():
        if f.degree(v) == 1:
            c = _content_in(f, v)
            if c.is_constant():
                return True
    return False


class FactorBase:
    """Shared, append-only list of denominator factors with test points."""

    def __init__(self, vars: Sequence[str]):
        self.vars = tuple(vars)
        self.factors: list[MPoly] = []
        self.irreducible: list[bool] = []
        self.points: list[tuple[int, ...]] = []
        self.owner: list[int] = []
        self.factor_points: list[list[int]] = []
        self.fvals: list[list[int]] = []  # fvals[i][j] = f_i(point j) mod P
        self.index: dict[MPoly, int] = {}
        self._pow_cache: dict[tuple, MPoly] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self.factors)

    # factor management ------------------------------------------------------
    def _rng_for(self, f: MPoly) -> random.Random:
        h = hashlib.sha256(str(f).encode()).digest()
        return random.Random(int.from_bytes(h[:8], "big"))

    def _find_points(self, f: MPoly) -> list[tuple[int, ...]]:
        rng = self._rng_for(f)
        used = f.used_vars()
        if not used:
            return []
        # solve for the variable of lowest positive degree
        x = min(used, key=lambda v: (f.degree(v), v))
        xi = self.vars.index(x)
        coeffs_poly = f.coeffs_in(x)
        pts: list[tuple[int, ...]] = []
        attempts = 0
        while len(pts) < POINTS_PER_FACTOR and attempts < 200:
            attempts += 1
            vals = [rng.randrange(1, P) for _ in self.vars]
            d = max(coeffs_poly)
            dense = [eval_mod(coeffs_poly[i], vals) if i in coeffs_poly else 0 for i in range(d + 1)]
            if dense[-1] == 0:
                continue
            roots = _poly_roots_mod(dense, rng)
            if not roots:
                continue
            vals[xi] = roots[0]
            pts.append(tuple(vals))
        return pts

    def add(self, f: MPoly) -> int:
        """Register a primitive, positive-lc factor; returns its index."""
        f = f.with_vars(self.vars)
        with self._lock:
            got = self.index.get(f)
            if got is not None:
                return got
            i = len(self.factors)
            self.factors.append(f)
            self.irreducible.append(_is_linear_irreducible(f))
            self.index[f] = i
            new_pts = self._find_points(f)
            # values of existing factors at the new points
            for row, g in zip(self.fvals, self.factors[:-1]):
                row.extend(eval_mod(g, pt) for pt in new_pts)
            start = len(self.points)
            self.points.extend(new_pts)
            self.owner.extend([i] * len(new_pts))
            self.factor_points.append(list(range(start, start + len(new_pts))))
            self.fvals.append([eval_mod(f, pt) for pt in self.points])
            return i

    def power(self, exps: dict[int, int]) -> MPoly:
        """Expanded product of f_i ** e_i (cached)."""
        if not exps:
            return MPoly.const(1, self.vars)
        key = tuple(sorted(exps.items()))
        got = self._pow_cache.get(key)
        if got is not None:
            return got
        items = list(key)
        if len(items) == 1:
            i, e = items[0]
            if e == 1:
                out = self.factors[i]
            else:
                half = self.power({i: e // 2})
                out = half * half
                if e % 2:
                    out = out * self.factors[i]
        else:
            first = dict(items[:-1])
            out = self.power(first) * self.power(dict(items[-1:]))
        with self._lock:
            self._pow_cache[key] = out
        return out

    def power_residue(self, exps: dict[int, int], j: int) -> int:
        r = 1
        for i, e in exps.items():
            r = r * pow(self.fvals[i][j], e, P) % P
        return r

    def split(self, N: MPoly) -> tuple[int, dict[int, int], MPoly]:
        """Write a primitive N as  N' * prod f_i**e_i  over the base, adding
        new factors for whatever is left.  Returns (1, exps, 1) or raises."""
        N = N.with_vars(self.vars)
        exps: dict[int, int] = {}
        if N.is_constant():
            return 1, exps, N
        residues_cache: dict[int, int] = {}
        for i in range(len(self.factors)):
            f = self.factors[i]
            while not N.is_constant():
                pts = self.factor_points[i]
                if pts and any(eval_mod(N, self.points[j]) for j in pts):
                    break
                q = N.try_divexact(f)
                if q is None:
                    break
                N = q
                exps[i] = exps.get(i, 0) + 1
        del residues_cache
        if not N.is_constant():
            for part, mult in self._decompose(N):
                idx = self.add(part)
                exps[idx] = exps.get(idx, 0) + mult
            N = MPoly.const(1, self.vars)
        return 1, exps, N

    def _decompose(self, N: MPoly) -> list[tuple[MPoly, int]]:
        used = N.used_vars()
        x = min(used, key=lambda v: (N.degree(v), v))
        parts: list[tuple[MPoly, int]] = []
        content = _content_in(N, x)
        if not content.is_constant():
            parts.extend(self._decompose(content))
            N = N.divexact(content)
        if N.degree(x) > 0:
            for f, m in squarefree(N, x):
                parts.append((f.primitive()[1], m))
        return parts

    # elements -------------------------------------------------------------------
    def const(self, c) -> "FRF":
        c = Fraction(c)
        return FRF(self, c, MPoly.const(1, self.vars), {}, None)

    def from_poly(self, p: MPoly) -> "FRF":
        p = p.with_vars(self.vars)
        c, N = p.primitive()
        if not c:
            return self.const(0)
        return FRF(self, c, N, {}, None)

    def from_ratfunc(self, r: RatFunc) -> "FRF":
        num = self.from_poly(r.num)
        if r.den.is_constant():
            return num.scale(Fraction(1, r.den.constant_value()))
        return num / self.from_poly(r.den)

    def var(self, name: str) -> "FRF":
        return self.from_poly(MPoly.var(name, self.vars))


class FRF:
    """Element c * num / prod(base.factors[i] ** den[i])."""

    __slots__ = ("base", "c", "num", "den", "_res")

    def __init__(self, base: FactorBase, c: Fraction, num: MPoly, den: dict[int, int], res):
        self.base = base
        self.c = c
        self.num = num
        self.den = den
        self._res = res

    # residues --------------------------------------------------------------------
    def residues(self) -> list:
        base = self.base
        n = len(base.points)
        r = self._res
        if r is None:
            r = [None] * n
        elif len(r) < n:
            r = r + [None] * (n - len(r))
        self._res = r
        return r

    def residue(self, j: int) -> int:
        r = self.residues()
        v = r[j]
        if v is None:
            v = eval_mod(self.num, self.base.points[j])
            r[j] = v
        return v

    # helpers -----------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self) -> bool:
        return bool(self.c)

    def _coerce(self, o) -> "FRF | None":
        if isinstance(o, FRF):
            return o
        if isinstance(o, (int, Fraction)):
            return self.base.const(o)
        return None

    def scale(self, k) -> "FRF":
        k = Fraction(k)
        if not k:
            return self.base.const(0)
        return FRF(self.base, self.c * k, self.num, self.den, self._res)

    def __neg__(self) -> "FRF":
        return FRF(self.base, -self.c, self.num, self.den, self._res)

    # ring operations -------------------------------------------------------------------
    def __mul__(self, o) -> "FRF":
        if isinstance(o, (int, Fraction)):
            return self.scale(o)
        if not isinstance(o, FRF):
            return NotImplemented
        if not self.c or not o.c:
            return self.base.const(0)
        c = self.c * o.c
        one_a = self.num.is_constant()
        one_b = o.num.is_constant()
        if one_a and one_b:
            num = self.num
        elif one_a:
            num = o.num
        elif one_b:
            num = self.num
        else:
            num = self.num * o.num
        den = dict(self.den)
        for i, e in o.den.items():
            den[i] = den.get(i, 0) + e
        ra, rb = self.residues(), o.residues()
        res = [(x * y % P) if (x is not None and y is not None) else None for x, y in zip(ra, rb)]
        return _cancel(self.base, c, num, den, res, check=(self.den, o.den))

    __rmul__ = __mul__

    def __add__(self, o) -> "FRF":
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if not o.c:
            return self
        if not self.c:
            return o
        base = self.base
        D = dict(self.den)
        for i, e in o.den.items():
            if e > D.get(i, 0):
                D[i] = e
        ma = {i: e - self.den.get(i, 0) for i, e in D.items() if e - self.den.get(i, 0)}
        mb = {i: e - o.den.get(i, 0) for i, e in D.items() if e - o.den.get(i, 0)}
        p1, q1 = self.c.numerator, self.c.denominator
        p2, q2 = o.c.numerator, o.c.denominator
        L = q1 * q2 // gcd(q1, q2)
        ka, kb = p1 * (L // q1), p2 * (L // q2)
        Na = self.num * base.power(ma) if ma else self.num
        Nb = o.num * base.power(mb) if mb else o.num
        N = Na.scale(ka) + Nb.scale(kb)
        if not N:
            return base.const(0)
        g = 0
        for v in N.terms.values():
            g = gcd(g, v)
            if g == 1:
                break
        if N.lc() < 0:
            g = -g
        if g != 1:
            N = MPoly(N.vars, {k: v // g for k, v in N.terms.items()})
        c = Fraction(g, L)
        ra, rb = self.residues(), o.residues()
        ginv = pow(g % P, P - 2, P) if g % P else None
        res = []
        for j, (x, y) in enumerate(zip(ra, rb)):
            if x is None or y is None or ginv is None:
                res.append(None)
                continue
            xa = x * base.power_residue(ma, j) % P if ma else x
            yb = y * base.power_residue(mb, j) % P if mb else y
            res.append((ka * xa + kb * yb) * ginv % P)
        return _cancel(base, c, N, D, res, check=None)

    __radd__ = __add__

    def __sub__(self, o) -> "FRF":
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o) -> "FRF":
        return (-self) + o

    def inv(self) -> "FRF":
        if not self.c:
            raise ZeroDivisionError("inverse of zero")
        base = self.base
        _, exps, _ = base.split(self.num)
        num = base.power(self.den)
        res = None
        return FRF(base, 1 / self.c, num, exps, res)

    def __truediv__(self, o) -> "FRF":
        if isinstance(o, (int, Fraction)):
            return self.scale(1 / Fraction(o))
        if not isinstance(o, FRF):
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, o) -> "FRF":
        return self._coerce(o) * self.inv()

    def __pow__(self, e: int) -> "FRF":
        if e < 0:
            return self.inv() ** (-e)
        out = self.base.const(1)
        b = self
        while e:
            if e & 1:
                out = out * b
            e >>= 1
            if e:
                b = b * b
        return out

    def __eq__(self, o) -> bool:
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return not (self - o).c

    def __hash__(self):
        raise TypeError("FRF values are not hashable")

    # conversion ------------------------------------------------------------------------
    def to_ratfunc(self) -> RatFunc:
        base = self.base
        num = self.num
        den_parts: dict[int, int] = {}
        for i, e in self.den.items():
            if not base.irreducible[i]:
                f = base.factors[i]
                while e:
                    g = poly_gcd(num, f)
                    if g.is_constant():
                        break
                    # partial cancellation through a reducible factor
                    num = num.divexact(g)
                    rest = f.divexact(g)
                    if not rest.is_constant():
                        j = base.add(rest)
                        den_parts[j] = den_parts.get(j, 0) + 1
                    e -= 1
            if e:
                den_parts[i] = den_parts.get(i, 0) + e
        den = base.power(den_parts)
        n = num.scale(self.c.numerator)
        d = den.scale(self.c.denominator)
        return RatFunc(n, d, normalized=True)

    def denominator_exponents(self) -> dict[MPoly, int]:
        return {self.base.factors[i]: e for i, e in sorted(self.den.items())}

    def __repr__(self) -> str:
        return f"FRF({self.to_ratfunc()})"


def _cancel(base: FactorBase, c: Fraction, num: MPoly, den: dict, res: list, check) -> FRF:
    del check
    for i in [i for i, e in den.items() if e]:
        f = base.factors[i]
        pts = base.factor_points[i]
        while den.get(i, 0) > 0 and not num.is_constant():
            zero = True
            for j in pts:
                r = res[j] if j < len(res) else None
                if r is None:
                    r = eval_mod(num, base.points[j])
                    if j < len(res):
                        res[j] = r
                if r:
                    zero = False
                    break
            if not zero:
                break
            q = num.try_divexact(f)
            if q is None:
                break
            num = q
            den[i] -= 1
            fv = base.fvals[i]
            for j in range(len(res)):
                r = res[j]
                if r is None:
                    continue
                v = fv[j]
                res[j] = r * pow(v, P - 2, P) % P if v else None
        if not den.get(i, 1):
            del den[i]
    return FRF(base, c, num, den, res)


def frf_sum(values: Iterable[FRF]) -> FRF:
    it = iter(values)
    acc = next(it)
    for v in it:
        acc = acc + v
    return acc
