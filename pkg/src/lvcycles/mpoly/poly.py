"""Sparse multivariate polynomials over the rationals.

Terms live in a dict keyed by a packed integer.  For ``k`` variables the key
is ``deg << (W*k) | e0 << (W*(k-1)) | ... | e_{k-1}`` with ``W`` bits per
field, so integer comparison of keys is graded-lex comparison of monomials
(earlier variables win ties) and multiplying monomials is adding keys.
Coefficients are ``int`` when integral and ``Fraction`` otherwise.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from ..exactnum import format_rational
from . import kernels

W = 16
MASK = (1 << W) - 1
MAX_EXP = MASK

# Canonical variable order; unknown names sort after these, alphabetically.
CANONICAL_ORDER = ("λ", "n", "μ", "y1", "y2", "y3")
_RANK = {v: i for i, v in enumerate(CANONICAL_ORDER)}


def var_sort_key(name: str):
    return (_RANK.get(name, len(CANONICAL_ORDER)), name)


def merge_vars(*var_lists: Sequence[str]) -> tuple[str, ...]:
    seen = set()
    for vs in var_lists:
        seen.update(vs)
    return tuple(sorted(seen, key=var_sort_key))


def pack(exps: Sequence[int]) -> int:
    key = 0
    total = 0
    for e in exps:
        if e < 0 or e > MAX_EXP:
            raise ValueError(f"exponent {e} out of range")
        key = (key << W) | e
        total += e
    return (total << (W * len(exps))) | key


def unpack(key: int, k: int) -> tuple[int, ...]:
    out = [0] * k
    for i in range(k - 1, -1, -1):
        out[i] = key & MASK
        key >>= W
    return tuple(out)


def key_degree(key: int, k: int) -> int:
    return key >> (W * k)


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class MPoly:
    """Immutable sparse polynomial in an ordered tuple of named variables."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: dict[int, int | Fraction]):
        self.vars = tuple(vars)
        self.terms = terms
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str] = ()) -> "MPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, c, vars: Sequence[str] = ()) -> "MPoly":
        c = _norm(Fraction(c)) if not isinstance(c, int) else c
        return cls(vars, {0: c} if c else {})

    @classmethod
    def var(cls, name: str, vars: Sequence[str] | None = None) -> "MPoly":
        vs = tuple(vars) if vars is not None else (name,)
        if name not in vs:
            vs = merge_vars(vs, (name,))
        exps = [0] * len(vs)
        exps[vs.index(name)] = 1
        return cls(vs, {pack(exps): 1})

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, ...], object], vars: Sequence[str]) -> "MPoly":
        vs = tuple(vars)
        terms: dict[int, int | Fraction] = {}
        for exps, c in d.items():
            if len(exps) != len(vs):
                raise ValueError("exponent vector arity does not match variables")
            c = c if isinstance(c, int) else _norm(Fraction(c))
            if c:
                k = pack(exps)
                s = terms.get(k, 0) + c
                if s:
                    terms[k] = s
                else:
                    terms.pop(k, None)
        return cls(vs, terms)

    def to_dict(self) -> dict[tuple[int, ...], int | Fraction]:
        k = len(self.vars)
        return {unpack(key, k): c for key, c in self.terms.items()}

    # variable bookkeeping -------------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "MPoly":
        """Re-express over ``vars`` (a superset of the used variables)."""
        vs = tuple(vars)
        if vs == self.vars:
            return self
        k_old, k_new = len(self.vars), len(vs)
        pos = []
        for i, v in enumerate(self.vars):
            if v in vs:
                pos.append(vs.index(v))
            else:
                pos.append(None)
        terms = {}
        for key, c in self.terms.items():
            old = unpack(key, k_old)
            new = [0] * k_new
            for i, e in enumerate(old):
                if e:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.vars[i]!r} is used but not in target list")
                    new[pos[i]] = e
            terms[pack(new)] = c
        return MPoly(vs, terms)

    def used_vars(self) -> tuple[str, ...]:
        k = len(self.vars)
        used = [False] * k
        for key in self.terms:
            e = unpack(key, k)
            for i in range(k):
                if e[i]:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def trim(self) -> "MPoly":
        return self.with_vars(self.used_vars())

    def _align(self, other: "MPoly") -> tuple["MPoly", "MPoly"]:
        if self.vars == other.vars:
            return self, other
        vs = merge_vars(self.vars, other.vars)
        return self.with_vars(vs), other.with_vars(vs)

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self.vars)
        return NotImplemented

    # queries -----------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    @property
    def nterms(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return key_degree(max(self.terms), len(self.vars))

    def degree(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        if not self.terms:
            return -1
        k = len(self.vars)
        shift = W * (k - 1 - self.vars.index(var))
        return max((key >> shift) & MASK for key in self.terms)

    def leading_key(self) -> int:
        return max(self.terms)

    def lc(self):
        return self.terms[max(self.terms)] if self.terms else 0

    def leading_monomial(self) -> tuple[int, ...]:
        return unpack(max(self.terms), len(self.vars))

    def monomials(self) -> list[tuple[tuple[int, ...], int | Fraction]]:
        """Terms in descending monomial order."""
        k = len(self.vars)
        return [(unpack(key, k), self.terms[key]) for key in sorted(self.terms, reverse=True)]

    def homogeneous_part(self, d: int) -> "MPoly":
        k = len(self.vars)
        return MPoly(self.vars, {key: c for key, c in self.terms.items() if key_degree(key, k) == d})

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self.terms.values())

    # arithmetic -------------------------------------------------------------
    def __neg__(self) -> "MPoly":
        return MPoly(self.vars, {k: -c for k, c in self.terms.items()})

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        return MPoly(a.vars, kernels.add_terms(a.terms, b.terms, 1))

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        return MPoly(a.vars, kernels.add_terms(a.terms, b.terms, -1))

    def __rsub__(self, other) -> "MPoly":
        return (-self).__add__(other)

    def scale(self, c) -> "MPoly":
        if not isinstance(c, int):
            c = _norm(Fraction(c))
        if not c:
            return MPoly(self.vars, {})
        if c == 1:
            return self
        if type(c) is int:
            return MPoly(self.vars, {k: v * c for k, v in self.terms.items()})
        return MPoly(self.vars, {k: _norm(v * c) for k, v in self.terms.items()})

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._align(other)
        return MPoly(a.vars, kernels.mul_terms(a.terms, b.terms))

    __rmul__ = __mul__

    def mul_trunc(self, other: "MPoly", max_degree: int) -> "MPoly":
        """Product with all terms of total degree above ``max_degree`` dropped."""
        a, b = self._align(other)
        limit = (max_degree + 1) << (W * len(a.vars))
        return MPoly(a.vars, kernels.mul_terms_trunc(a.terms, b.terms, limit))

    def __pow__(self, e: int) -> "MPoly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MPoly.const(1, self.vars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, c) -> "MPoly":
        if isinstance(c, MPoly):
            return self.divexact(c)
        return self.scale(1 / Fraction(c))

    def divexact(self, other: "MPoly") -> "MPoly":
        q, r = self.divmod_lead(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def try_divexact(self, other: "MPoly") -> "MPoly | None":
        """Quotient if ``other`` divides ``self`` exactly, else None."""
        a, b = self._align(other)
        if not b.terms:
            raise ZeroDivisionError("division by zero polynomial")
        return kernels.divexact_terms(a.vars, a.terms, b.terms)

    def divmod_lead(self, other: "MPoly") -> tuple["MPoly", "MPoly"]:
        """Multivariate division by repeated cancellation of the leading term.

        The remainder is not canonical in general; it is zero exactly when the
        division is exact.
        """
        q = self.try_divexact(other)
        if q is not None:
            a, _ = self._align(other)
            return q, MPoly.zero(a.vars)
        a, b = self._align(other)
        return MPoly.zero(a.vars), a

    # scalar structure ---------------------------------------------------------
    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            if type(c) is int:
                num = gcd(num, c)
            else:
                num = gcd(num, c.numerator)
                den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> tuple[Fraction, "MPoly"]:
        """(c, p) with self = c*p, p integral with content 1 and positive lc."""
        if not self.terms:
            return Fraction(0), self
        c = self.content()
        if self.lc() < 0:
            c = -c
        if c == 1:
            return c, self
        if c.denominator == 1:
            ci = c.numerator
            return c, MPoly(self.vars, {k: v // ci for k, v in self.terms.items()})
        return c, MPoly(self.vars, {k: _norm(v / c) for k, v in self.terms.items()})

    def monic_sign(self) -> "MPoly":
        return -self if self.terms and self.lc() < 0 else self

    # calculus and substitution -----------------------------------------------
    def diff(self, var: str) -> "MPoly":
        if var not in self.vars:
            return MPoly.zero(self.vars)
        k = len(self.vars)
        i = self.vars.index(var)
        shift = W * (k - 1 - i)
        one = (1 << shift) + (1 << (W * k))
        terms = {}
        for key, c in self.terms.items():
            e = (key >> shift) & MASK
            if e:
                terms[key - one] = c * e
        return MPoly(self.vars, terms)

    def eval(self, point: Mapping[str, object]):
        """Evaluate with every variable bound to a rational (or ring element)."""
        missing = [v for v in self.used_vars() if v not in point]
        if missing:
            raise KeyError(f"no value bound for {missing}")
        k = len(self.vars)
        vals = [point.get(v, 0) for v in self.vars]
        powers = [dict() for _ in range(k)]
        total = 0
        for key, c in self.terms.items():
            e = unpack(key, k)
            t = c
            for i in range(k):
                ei = e[i]
                if ei:
                    pw = powers[i].get(ei)
                    if pw is None:
                        pw = vals[i] ** ei
                        powers[i][ei] = pw
                    t = t * pw
            total = total + t
        return total

    def subs(self, mapping: Mapping[str, object]) -> "MPoly":
        """Substitute rationals or polynomials for some variables."""
        keep = tuple(v for v in self.vars if v not in mapping)
        polys = {v: (m if isinstance(m, MPoly) else MPoly.const(m, ())) for v, m in mapping.items() if v in self.vars}
        target = merge_vars(keep, *[p.used_vars() for p in polys.values()])
        polys = {v: p.trim().with_vars(target) for v, p in polys.items()}
        k = len(self.vars)
        keep_idx = [i for i, v in enumerate(self.vars) if v not in mapping]
        keep_pos = [target.index(self.vars[i]) for i in keep_idx]
        sub_idx = [i for i, v in enumerate(self.vars) if v in mapping]
        cache: dict[tuple[int, int], MPoly] = {}

        def power(i: int, e: int) -> MPoly:
            p = cache.get((i, e))
            if p is None:
                p = polys[self.vars[i]] ** e
                cache[(i, e)] = p
            return p

        acc: dict[int, int | Fraction] = {}
        for key, c in self.terms.items():
            e = unpack(key, k)
            mono = [0] * len(target)
            for i, pos in zip(keep_idx, keep_pos):
                mono[pos] = e[i]
            t = MPoly(target, {pack(mono): c})
            for i in sub_idx:
                if e[i]:
                    t = t * power(i, e[i])
            kernels.iadd_terms(acc, t.terms)
        return MPoly(target, acc)

    # univariate views -----------------------------------------------------------
    def coeffs_in(self, var: str) -> dict[int, "MPoly"]:
        """Coefficients as a polynomial in ``var``; keys are degrees, values keep
        the same variable list with ``var`` at exponent zero."""
        if var not in self.vars:
            return {0: self} if self.terms else {}
        k = len(self.vars)
        i = self.vars.index(var)
        shift = W * (k - 1 - i)
        top = W * k
        out: dict[int, dict] = {}
        for key, c in self.terms.items():
            e = (key >> shift) & MASK
            nk = key - (e << shift) - (e << top)
            out.setdefault(e, {})[nk] = c
        return {d: MPoly(self.vars, t) for d, t in out.items()}

    @classmethod
    def from_coeffs(cls, var: str, coeffs: Mapping[int, "MPoly"], vars: Sequence[str]) -> "MPoly":
        vs = tuple(vars)
        k = len(vs)
        i = vs.index(var)
        shift = W * (k - 1 - i)
        top = W * k
        terms: dict[int, int | Fraction] = {}
        for d, p in coeffs.items():
            p = p.with_vars(vs)
            off = (d << shift) + (d << top)
            for key, c in p.terms.items():
                terms[key + off] = c
        return cls(vs, terms)

    def univariate_coeffs(self) -> list:
        """Dense coefficient list (low to high) of a polynomial in at most one variable."""
        used = self.used_vars()
        if len(used) > 1:
            raise ValueError(f"polynomial is not univariate (uses {used})")
        if not self.terms:
            return []
        if not used:
            return [self.terms.get(0, 0)]
        p = self.with_vars(used)
        d = p.total_degree()
        out = [0] * (d + 1)
        for key, c in p.terms.items():
            out[key & MASK] = c
        return out

    # comparison and hashing ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.terms.get(0, 0) == other
        if not isinstance(other, MPoly):
            return NotImplemented
        if self.vars == other.vars:
            return self.terms == other.terms
        a, b = self.trim(), other.trim()
        return a.vars == b.vars and a.terms == b.terms

    def __hash__(self) -> int:
        if self._hash is None:
            t = self.trim()
            self._hash = hash((t.vars, frozenset(t.terms.items())))
        return self._hash

    # text form -------------------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MPoly({format_poly(self)!r}, vars={self.vars!r})"


def _monomial_text(vars: Sequence[str], exps: Sequence[int]) -> str:
    parts = []
    for v, e in zip(vars, exps):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: MPoly) -> str:
    """Canonical text: terms in descending graded-lex order, ``c*λ^i*n^j``."""
    if not p.terms:
        return "0"
    out = []
    for exps, c in p.monomials():
        mono = _monomial_text(p.vars, exps)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)


def poly_arith(p: MPoly, q: MPoly, op: str) -> MPoly:
    op = op.replace("×", "*").replace("−", "-")
    if op == "+":
        return p + q
    if op == "-":
        return p - q
    if op == "*":
        return p * q
    raise ValueError(f"unsupported polynomial operator {op!r}")


def variables(names: Iterable[str]) -> list[MPoly]:
    vs = merge_vars(tuple(names))
    return [MPoly.var(v, vs) for v in names]
