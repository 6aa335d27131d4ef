"""Pure-Python term kernels.  Terms are dicts from packed keys to coefficients."""
from __future__ import annotations

import heapq
from fractions import Fraction


def add_terms(a: dict, b: dict, sign: int) -> dict:
    if len(a) < len(b) and sign == 1:
        a, b = b, a
    out = dict(a)
    get = out.get
    if sign == 1:
        for k, c in b.items():
            s = get(k, 0) + c
            if s:
                out[k] = s
            else:
                del out[k]
    else:
        for k, c in b.items():
            s = get(k, 0) - c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def iadd_terms(acc: dict, b: dict) -> None:
    get = acc.get
    for k, c in b.items():
        s = get(k, 0) + c
        if s:
            acc[k] = s
        else:
            del acc[k]


def mul_terms(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    bi = list(b.items())
    for ka, ca in a.items():
        for kb, cb in bi:
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def mul_terms_trunc(a: dict, b: dict, limit: int) -> dict:
    out: dict = {}
    get = out.get
    bi = sorted(b.items())
    for ka, ca in a.items():
        bound = limit - ka
        for kb, cb in bi:
            if kb >= bound:
                break
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def _quot(c, d):
    if type(c) is int and type(d) is int:
        q, r = divmod(c, d)
        if not r:
            return q
        return Fraction(c, d)
    q = Fraction(c) / d
    return q.numerator if q.denominator == 1 else q


def divexact_terms(vars, a: dict, b: dict):
    """Quotient terms of a/b if exact, else None.  Returns an MPoly."""
    from .poly import MPoly, W, MASK

    k = len(vars)
    if not a:
        return MPoly(vars, {})
    kb = max(b)
    lcb = b[kb]
    shifts = [W * (k - 1 - i) for i in range(k)]
    eb = [(kb >> s) & MASK for s in shifts]
    rest = [(key, c) for key, c in b.items() if key != kb]
    rem = dict(a)
    heap = [-key for key in rem]
    heapq.heapify(heap)
    quot: dict = {}
    get = rem.get
    while rem:
        key = -heapq.heappop(heap)
        c = get(key)
        if c is None:
            continue
        # duplicates in the heap are skipped via the membership check above
        while heap and heap[0] == -key:
            heapq.heappop(heap)
        for s, e in zip(shifts, eb):
            if ((key >> s) & MASK) < e:
                return None
        dk = key - kb
        q = _quot(c, lcb)
        quot[dk] = q
        del rem[key]
        for kk, cc in rest:
            nk = dk + kk
            old = get(nk)
            if old is None:
                rem[nk] = -q * cc
                heapq.heappush(heap, -nk)
            else:
                s = old - q * cc
                if s:
                    rem[nk] = s
                else:
                    del rem[nk]
    return MPoly(vars, quot)
