"""Certified evaluation of polynomials over boxes of rational intervals."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..exactnum import Interval, Sign, ival_eval_sign
from .poly import MPoly, unpack


def eval_interval(p: MPoly, box: Mapping[str, Interval]) -> Interval:
    """Enclosure of p over the box by term-wise interval arithmetic.

    Terms are split by sign of the coefficient and monomials over
    non-negative boxes use endpoint powers directly, which is exact for
    monotone monomials.
    """
    used = p.used_vars()
    missing = [v for v in used if v not in box]
    if missing:
        raise KeyError(f"no interval bound for {missing}")
    k = len(p.vars)
    ivs = [Interval.coerce(box[v]) if v in box else Interval.point(0) for v in p.vars]
    cache: list[dict[int, Interval]] = [dict() for _ in range(k)]
    lo = Fraction(0)
    hi = Fraction(0)
    for key, c in p.terms.items():
        e = unpack(key, k)
        mlo = mhi = Fraction(1)
        mono = None
        for i in range(k):
            ei = e[i]
            if not ei:
                continue
            pw = cache[i].get(ei)
            if pw is None:
                pw = ivs[i] ** ei
                cache[i][ei] = pw
            mono = pw if mono is None else mono * pw
        if mono is not None:
            mlo, mhi = mono.lo, mono.hi
        if c > 0:
            lo += c * mlo
            hi += c * mhi
        else:
            lo += c * mhi
            hi += c * mlo
    return Interval(lo, hi)


def eval_centered(p: MPoly, box: Mapping[str, Interval]) -> Interval:
    """Mean-value enclosure p(m) + sum_i dp/dx_i(box) * (x_i - m_i)."""
    used = p.used_vars()
    mid = {v: Interval.coerce(box[v]).mid for v in used}
    val = Fraction(p.eval(mid)) if used else Fraction(p.constant_value() if p else 0)
    acc = Interval.point(val)
    for v in used:
        X = Interval.coerce(box[v])
        if X.width == 0:
            continue
        g = eval_interval(p.diff(v), box)
        acc = acc + g * (X - mid[v])
    return acc.intersect(eval_interval(p, box)) if used else acc


def sign_on_box(p: MPoly, box: Mapping[str, Interval]) -> Sign:
    s = ival_eval_sign(eval_interval(p, box))
    if s.certified:
        return s
    return ival_eval_sign(eval_centered(p, box))


def _bisect_widest(box: dict[str, Interval]) -> tuple[dict, dict]:
    v = max(sorted(box), key=lambda k: box[k].width)
    a, b = box[v].bisect()
    left, right = dict(box), dict(box)
    left[v], right[v] = a, b
    return left, right


def certify_sign(expr, box: Mapping[str, Interval], budget: int = 256) -> Sign:
    """Sign of a polynomial or rational function over a whole box.

    Boxes are bisected (widest side first) until every piece has a certified
    sign or ``budget`` bisections are spent.  Pieces with different certified
    signs, or an exhausted budget, give ``Sign.UNKNOWN``.
    """
    from .ratfunc import RatFunc

    if isinstance(expr, RatFunc):
        parts = [expr.num] if expr.den.is_constant() else [expr.num, expr.den]
        flip = expr.den.is_constant() and expr.den.constant_value() < 0
    else:
        parts, flip = [expr], False
    used = set()
    for p in parts:
        used.update(p.used_vars())
    work = [{v: Interval.coerce(box[v]) for v in sorted(used)}]
    result: Sign | None = None
    spent = 0
    while work:
        b = work.pop()
        signs = [sign_on_box(p, b) for p in parts]
        if all(s.certified for s in signs):
            s = signs[0]
            for t in signs[1:]:
                if t is Sign.ZERO:
                    return Sign.UNKNOWN
                s = s * t
            if result is None:
                result = s
            elif result is not s:
                return Sign.UNKNOWN
            continue
        if spent >= budget or not b:
            return Sign.UNKNOWN
        spent += 1
        work.extend(_bisect_widest(b))
    if result is None:
        return Sign.UNKNOWN
    return -result if flip else result
