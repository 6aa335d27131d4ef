"""Certified real-root isolation.

Univariate roots are isolated with Sturm chains and bisection on dyadic
rationals.  Bivariate systems {p, q} in (x, y) are triangularized by the
resultant in y, whose square-free factors carry the x-coordinates; the
matching y is read off a polynomial of degree one in y (the first
subresultant or an input that is already linear in y) and enclosed by interval
arithmetic.  Every emitted box holds exactly one common root.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import Interval, Sign, format_rational, parse_rational
from .mpoly import MPoly, RatFunc, poly_gcd, resultant, squarefree
from .mpoly.algorithms import SturmChain, dense_sign_at, subresultant_coeffs, to_dense
from .mpoly.interval_eval import certify_sign, eval_centered, eval_interval

log = logging.getLogger(__name__)

DEFAULT_WIDTH = Fraction(1, 10**20)
UNIVARIATE_WIDTH = Fraction(1, 10**10)
DEFAULT_REGION = (Fraction(0), Fraction(64))
REFINE_BUDGET = 512


class RealRootError(ValueError):
    pass


class CommonFactorError(RealRootError):
    def __init__(self, factor: MPoly):
        super().__init__(f"polynomials share the factor {factor}")
        self.factor = factor


@dataclass(frozen=True)
class IsolatedRoot(Interval):
    """A closed interval holding exactly one root; ``multiplicity`` is that root's."""

    multiplicity: int = 1
    factor_index: int = field(default=0, compare=False)


# univariate ---------------------------------------------------------------------------------
class _Uni:
    """A square-free univariate factor with integer dense coefficients."""

    def __init__(self, p: MPoly):
        x = p.used_vars()[0]
        self.poly = p
        self.dense = to_dense(p.primitive()[1].with_vars((x,)), x, as_int=True)
        self._chain: SturmChain | None = None

    @property
    def chain(self) -> SturmChain:
        if self._chain is None:
            self._chain = SturmChain(self.poly)
        return self._chain

    def sign(self, x: Fraction) -> int:
        return dense_sign_at(self.dense, x.numerator, x.denominator)

    def count(self, lo: Fraction, hi: Fraction) -> int:
        return self.chain.count(lo, hi)


def _root_bound(dense: list[int]) -> Fraction:
    lc = abs(dense[-1])
    b = 1 + max((Fraction(abs(c), lc) for c in dense[:-1]), default=Fraction(0))
    k = 1
    while k < b:
        k *= 2
    return Fraction(k)


def _isolate_factor(u: _Uni, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Intervals (a, b] (closed when a == b) each with one root of u in (lo, hi]."""
    out = []
    stack = [(lo, hi, u.count(lo, hi))]
    while stack:
        a, b, c = stack.pop()
        if c == 0:
            continue
        if c == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        k = 3
        while u.sign(m) == 0:
            # step off an exact rational root so both halves stay half-open
            m = (a + b) / 2 + (b - a) / 2**k
            k += 1
        cl = u.count(a, m)
        stack.append((m, b, c - cl))
        stack.append((a, m, cl))
    out.sort()
    return out


def _refine(u: _Uni, a: Fraction, b: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink (a, b] holding one root of u to width <= ``width`` by bisection."""
    if a == b:
        return a, b
    if u.sign(b) == 0:
        return b, b
    sa = u.sign(a)
    while b - a > width:
        m = (a + b) / 2
        sm = u.sign(m)
        if sm == 0:
            return m, m
        if sa == 0:
            # a is a root of u outside (a, b]; fall back to counting
            if u.count(a, m):
                b = m
            else:
                a, sa = m, sm
            continue
        if sm == sa:
            a, sa = m, sm
        else:
            b = m
    return a, b


def simplest_rational(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in [lo, hi]."""
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_rational(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part: recurse on the reciprocals of the fractional parts
    return fl + 1 / simplest_rational(1 / (hi - fl), 1 / (lo - fl))


def isolate_univariate(
    p: MPoly,
    width=UNIVARIATE_WIDTH,
    region: tuple | None = None,
) -> list[IsolatedRoot]:
    """All real roots of p (in ``region`` = (lo, hi] if given) in disjoint intervals."""
    if not p:
        raise RealRootError("cannot isolate the roots of the zero polynomial")
    used = p.used_vars()
    if len(used) > 1:
        raise RealRootError(f"univariate polynomial expected, got variables {used}")
    if not used:
        return []
    x = used[0]
    width = Fraction(width)
    facs = [(_Uni(f), m) for f, m in squarefree(p, x)]
    raw: list[list] = []
    for idx, (u, m) in enumerate(facs):
        if region is None:
            B = _root_bound(u.dense)
            lo, hi = -B, B
        else:
            lo, hi = Fraction(region[0]), Fraction(region[1])
        for a, b in _isolate_factor(u, lo, hi):
            raw.append([a, b, idx])
    # refine to width, then split intervals from different factors apart
    for r in raw:
        u = facs[r[2]][0]
        r[0], r[1] = _refine(u, r[0], r[1], width)
    raw.sort()
    changed = True
    while changed:
        changed = False
        for i in range(len(raw) - 1):
            s, t = raw[i], raw[i + 1]
            if t[0] <= s[1]:
                for r in (s, t):
                    if r[1] > r[0]:
                        r[0], r[1] = _refine(facs[r[2]][0], r[0], r[1], (r[1] - r[0]) / 2)
                changed = True
        raw.sort()
    return [IsolatedRoot(a, b, facs[i][1], i) for a, b, i in raw]


# triangularization ---------------------------------------------------------------------------
@dataclass
class Chain:
    """r(x) square-free with multiplicity ``mult`` in the resultant; s = s1(x) y + s0(x)."""

    r: MPoly
    mult: int
    s1: MPoly
    s0: MPoly
    degenerate: bool = False

    @property
    def s(self) -> MPoly:
        y = self._y
        return self.s1 * MPoly.var(y, self.s1.vars) + self.s0

    _y: str = "n"


def _linear_in(p: MPoly, y: str):
    co = p.coeffs_in(y)
    z = MPoly.zero(p.vars)
    return co.get(1, z), co.get(0, z)


def triangularize(sys: Sequence[MPoly], vars: Sequence[str] = ("λ", "n")) -> list[Chain]:
    """Resultant elimination of the second variable."""
    p, q = sys
    p, q = p._align(q)
    x, y = vars
    g = poly_gcd(p, q)
    if not g.is_constant():
        raise CommonFactorError(g)
    if p.degree(y) > q.degree(y):
        p, q = q, p
    if q.degree(y) <= 0:
        raise RealRootError(f"neither polynomial involves {y}; the system is not zero-dimensional")
    if p.degree(y) <= 0:
        # already triangular: p(x) = 0 and q(x, y) = 0
        if p.degree(x) <= 0:
            raise RealRootError("a nonzero constant equation has no roots")
        res = p
    else:
        res = resultant(p, q, y)
    if not res:
        raise CommonFactorError(poly_gcd(p, q))
    if p.degree(y) == 1:
        s1, s0 = _linear_in(p, y)
    elif p.degree(y) <= 0 and q.degree(y) == 1:
        s1, s0 = _linear_in(q, y)
    elif p.degree(y) <= 0:
        raise RealRootError(f"back-substitution needs a polynomial of degree one in {y}")
    else:
        co = subresultant_coeffs(p, q, y, 1)
        s0, s1 = co[0], co[1]
    chains = []
    for f, m in squarefree(res, x):
        if not s1:
            chains.append(Chain(f, m, s1, s0, True, y))
            continue
        h = poly_gcd(f, s1)
        if h.degree(x) > 0:
            rest = f.divexact(h)
            if rest.degree(x) > 0:
                chains.append(Chain(rest.primitive()[1], m, s1, s0, False, y))
            chains.append(Chain(h.primitive()[1], m, s1, s0, True, y))
        else:
            chains.append(Chain(f, m, s1, s0, False, y))
    return chains


# bivariate isolation ------------------------------------------------------------------------------
@dataclass
class RootBox:
    x: Interval
    y: Interval
    multiplicity: int
    signs: list[Sign]

    def box(self, vars=("λ", "n")) -> dict[str, Interval]:
        return {vars[0]: self.x, vars[1]: self.y}


@dataclass
class IsolationCertificate:
    vars: tuple[str, str]
    boxes: list[RootBox]
    precision: Fraction
    region: tuple
    side_names: list[str] = field(default_factory=list)
    unresolved: list[str] = field(default_factory=list)

    @property
    def multiplicity_flags(self) -> list[bool]:
        return [b.multiplicity > 1 for b in self.boxes]

    @property
    def side_signs(self) -> list[list[Sign]]:
        return [b.signs for b in self.boxes]

    def to_json(self) -> dict:
        r = format_rational
        return {
            "vars": list(self.vars),
            "precision": r(self.precision),
            "region": [r(self.region[0]), r(self.region[1])],
            "side_names": list(self.side_names),
            "unresolved": list(self.unresolved),
            "boxes": [
                {"x": [r(b.x.lo), r(b.x.hi)], "y": [r(b.y.lo), r(b.y.hi)], "mult": b.multiplicity, "signs": [str(t) for t in b.signs]}
                for b in self.boxes
            ],
        }

    @classmethod
    def from_json(cls, d: dict) -> "IsolationCertificate":
        q = parse_rational
        boxes = [
            RootBox(Interval(q(b["x"][0]), q(b["x"][1])), Interval(q(b["y"][0]), q(b["y"][1])), b["mult"], [Sign(t) for t in b["signs"]])
            for b in d["boxes"]
        ]
        region = (q(d["region"][0]), q(d["region"][1]))
        return cls(tuple(d["vars"]), boxes, q(d["precision"]), region, list(d["side_names"]), list(d["unresolved"]))

    def to_text(self) -> str:
        x, y = self.vars
        lines = [f"# precision {format_rational(self.precision)}; region ({format_rational(self.region[0])}, {format_rational(self.region[1])}]^2"]
        for b in self.boxes:
            signs = ",".join(str(s) for s in b.signs)
            lines.append(
                f"{x}=[{format_rational(b.x.lo)}, {format_rational(b.x.hi)}] "
                f"{y}=[{format_rational(b.y.lo)}, {format_rational(b.y.hi)}] "
                f"mult={b.multiplicity} signs=[{signs}]"
            )
        for u in self.unresolved:
            lines.append(f"# unresolved: {u}")
        return "\n".join(lines) + "\n"


def _enclose_y(ch: Chain, X: Interval, x: str) -> Interval | None:
    box = {x: X}
    den = eval_centered(ch.s1, box).intersect(eval_interval(ch.s1, box))
    if den.contains(0):
        return None
    num = eval_centered(ch.s0, box).intersect(eval_interval(ch.s0, box))
    return -(num / den)


def _round_out(I: Interval, width: Fraction) -> Interval:
    """Dyadic outward rounding of I with grid 2^-k <= width/4."""
    if I.lo == I.hi and I.lo.denominator < width.denominator:
        return I
    k = 0
    while Fraction(1, 2**k) > width / 4:
        k += 1
    d = 2**k
    lo = Fraction(math.floor(I.lo * d), d)
    hi = Fraction(math.ceil(I.hi * d), d)
    return Interval(lo, hi)


def _lc_nonzero(p: MPoly, q: MPoly, y: str, X: Interval, x: str) -> bool:
    for f in (p, q):
        lc = f.coeffs_in(y)[f.degree(y)]
        if certify_sign(lc, {x: X}, 0) in (Sign.POS, Sign.NEG):
            return True
    return False


def _contains_zero(p: MPoly, box) -> bool:
    return eval_interval(p, box).contains(0)


def mrealroot(
    sys: Sequence[MPoly],
    vars: Sequence[str] = ("λ", "n"),
    width=DEFAULT_WIDTH,
    side: Iterable = (),
    region: tuple = DEFAULT_REGION,
    budget: int = REFINE_BUDGET,
    side_names: Sequence[str] | None = None,
) -> IsolationCertificate:
    """Isolate the common real roots of {p, q} in region^2 and certify side signs."""
    x, y = vars
    width = Fraction(width)
    p, q = sys
    p, q = p._align(q)
    side = [s if isinstance(s, RatFunc) else RatFunc(s) for s in side]
    lo, hi = Fraction(region[0]), Fraction(region[1])
    chains = triangularize((p, q), vars)
    boxes: list[RootBox] = []
    unresolved: list[str] = []
    for ch in chains:
        if ch.degenerate:
            if not isolate_univariate(ch.r, width, (lo, hi)):
                continue
            unresolved.append(f"chain r = {ch.r} needs a higher subresultant")
            continue
        u = _Uni(ch.r)
        for R in isolate_univariate(ch.r, width, (lo, hi)):
            a, b = R.lo, R.hi
            c = simplest_rational(a, b)
            if (c > a or a == b) and u.sign(c) == 0:
                a = b = c  # exact rational root; side signs may then be exactly zero
            X = Interval(a, b)
            Y = None
            rounds = 0
            done = False
            while rounds <= budget:
                Y = _enclose_y(ch, X, x)
                if Y is not None and (Y.hi <= lo or Y.lo > hi) and _lc_nonzero(p, q, y, X, x):
                    done = True  # the root lies outside the region
                    Y = None
                    break
                ok = Y is not None and Y.width <= width / 2 and _lc_nonzero(p, q, y, X, x)
                if ok:
                    Y = _round_out(Y, width)
                    if lo < Y.lo and Y.hi <= hi:
                        signs = [certify_sign(s, {x: X, y: Y}, 0) for s in side]
                        if all(s.certified for s in signs):
                            if not (_contains_zero(p, {x: X, y: Y}) and _contains_zero(q, {x: X, y: Y})):
                                raise RealRootError("back-substituted box does not contain a common root")
                            boxes.append(RootBox(X, Y, ch.mult, signs))
                            done = True
                            break
                if X.width == 0:
                    break
                na, nb = _refine(u, X.lo, X.hi, X.width / 2)
                X = Interval(na, nb)
                rounds += 1
            log.debug("root of factor deg %d near %s: %d rounds, %s", ch.r.total_degree(), float(X.mid), rounds, "box" if done and Y is not None else ("outside" if done else "undecided"))
            if not done:
                unresolved.append(f"root of {ch.r} near {float(X.mid)} undecided within the refinement budget")
    boxes.sort(key=lambda b: (b.x.lo, b.y.lo))
    if unresolved and any("undecided" in u for u in unresolved):
        raise RealRootError("; ".join(unresolved))
    names = list(side_names) if side_names else [f"side{i + 1}" for i in range(len(side))]
    return IsolationCertificate((x, y), boxes, width, (lo, hi), names, unresolved)


def refine_certificate(cert: IsolationCertificate, sys, width, side=()) -> IsolationCertificate:
    """Rerun isolation at a smaller width; boxes of the result nest in the old ones."""
    new = mrealroot(sys, cert.vars, width, side, cert.region)
    for b in new.boxes:
        if not any(o.x.contains(b.x) and o.y.contains(b.y) for o in cert.boxes):
            raise RealRootError("refined box is not nested in the original certificate")
    return new
