"""Gcd, resultants, subresultants, square-free decomposition and Sturm chains.

Univariate work happens on dense coefficient lists (low degree first) whose
entries are ``int`` for integer polynomials in one variable and ``MPoly``
(with the main variable at exponent zero) otherwise.  Integer content is
removed eagerly to control coefficient growth.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from typing import Sequence

from .poly import MPoly, merge_vars


# dense helpers ---------------------------------------------------------------
def _exquo(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact integer division")
        return q
    if isinstance(a, int):
        a = MPoly.const(a, b.vars)
    return a.divexact(b)


def _trim(f: list) -> list:
    while f and not f[-1]:
        f.pop()
    return f


def to_dense(p: MPoly, x: str, as_int: bool = False) -> list:
    """Coefficients of ``p`` in ``x``, low degree first.

    With ``as_int`` the polynomial must be univariate in ``x`` with integer
    coefficients and the entries are Python ints.
    """
    if as_int:
        coeffs = p.univariate_coeffs() if p.used_vars() in ((), (x,)) else None
        if coeffs is None or not all(isinstance(c, int) for c in coeffs):
            raise ValueError("polynomial is not an integer univariate polynomial")
        return _trim(list(coeffs))
    cs = p.coeffs_in(x)
    if not cs:
        return []
    d = max(cs)
    zero = MPoly.zero(p.vars)
    return [cs.get(i, zero) for i in range(d + 1)]


def from_dense(f: Sequence, x: str, vars: Sequence[str]) -> MPoly:
    vs = merge_vars(tuple(vars), (x,))
    out = {}
    for i, c in enumerate(f):
        if isinstance(c, MPoly):
            if c:
                out[i] = c
        elif c:
            out[i] = MPoly.const(c, vs)
    return MPoly.from_coeffs(x, out, vs)


def _deg(f: list) -> int:
    return len(f) - 1


def _scale(f: list, c) -> list:
    return [a * c for a in f]


def _sub_shifted(f: list, g: list, c, shift: int) -> list:
    """f - c * x^shift * g (f modified copy)."""
    out = list(f)
    for i, b in enumerate(g):
        if b:
            out[i + shift] = out[i + shift] - c * b
    return out


def dense_prem(f: list, g: list) -> list:
    """Pseudo-remainder lc(g)^(deg f - deg g + 1) * f mod g."""
    df, dg = _deg(f), _deg(g)
    if dg < 0:
        raise ZeroDivisionError("pseudo-division by zero polynomial")
    if df < dg:
        return list(f)
    lcg = g[-1]
    r = list(f)
    e = df - dg + 1
    while r and _deg(r) >= dg:
        lr = r[-1]
        shift = _deg(r) - dg
        r = _scale(r, lcg)
        r = _sub_shifted(r, g, lr, shift)
        r.pop()
        _trim(r)
        e -= 1
    if e:
        m = lcg**e
        r = _scale(r, m)
    return r


def _ground_gcd(values) -> object:
    """Gcd of ring elements: ints use math.gcd, MPolys use poly_gcd."""
    vals = [v for v in values if v]
    if not vals:
        return 0
    if all(isinstance(v, int) for v in vals):
        g = 0
        for v in vals:
            g = igcd(g, v)
            if g == 1:
                break
        return g
    g = None
    for v in vals:
        v = v if isinstance(v, MPoly) else MPoly.const(v)
        g = v if g is None else poly_gcd(g, v)
        if g.is_constant():
            return MPoly.const(1, g.vars)
    return g


def dense_primitive(f: list) -> list:
    """Divide by the content and make the leading coefficient positive."""
    if not f:
        return f
    g = _ground_gcd(f)
    lead = f[-1]
    neg = (lead < 0) if isinstance(lead, int) else (lead.lc() < 0)
    if isinstance(g, int):
        if neg:
            g = -g
        return [c // g for c in f] if g != 1 else list(f)
    if neg:
        g = -g
    if g.is_constant() and g.constant_value() == 1:
        return list(f)
    return [_exquo(c, g) for c in f]


def subresultant_prs(f: list, g: list):
    """Subresultant PRS of dense f, g (deg f >= deg g); returns (R, S)."""
    n, m = _deg(f), _deg(g)
    if n < m:
        raise ValueError("subresultant_prs expects deg f >= deg g")
    if not f:
        return [], []
    if not g:
        return [f], [1]
    R = [f, g]
    d = n - m
    b = (-1) ** (d + 1)
    h = _scale(dense_prem(f, g), b)
    lc = g[-1]
    c = lc**d
    S = [1, c]
    c = -c
    while h:
        k = _deg(h)
        R.append(h)
        f, g, m, d = g, h, k, m - k
        b = -lc * c**d
        h = [_exquo(a, b) for a in dense_prem(f, g)]
        _trim(h)
        lc = g[-1]
        if d > 1:
            q = c ** (d - 1)
            c = _exquo((-lc) ** d, q)
        else:
            c = -lc
        S.append(-c)
    return R, S


# gcd ----------------------------------------------------------------------------
def _content_in(p: MPoly, x: str) -> MPoly:
    cs = list(p.coeffs_in(x).values())
    g = None
    for c in cs:
        g = c if g is None else _gcd_prim(g, c)
        if g.is_constant():
            return MPoly.const(1, p.vars)
    return g.primitive()[1] if g is not None else MPoly.zero(p.vars)


def _gcd_prim(p: MPoly, q: MPoly) -> MPoly:
    """Gcd of integral polynomials over the same variable list; primitive, lc > 0."""
    if not p:
        return q.primitive()[1]
    if not q:
        return p.primitive()[1]
    p = p.primitive()[1]
    q = q.primitive()[1]
    if p.is_constant() or q.is_constant():
        return MPoly.const(1, p.vars)
    if p == q:
        return p
    up, uq = set(p.used_vars()), set(q.used_vars())
    common = up & uq
    if not common:
        # gcd must be free of every variable used by only one side
        rest = up - uq
        x = sorted(rest)[0] if rest else sorted(uq - up)[0]
        if x in up:
            return _gcd_prim(_content_in(p, x), q)
        return _gcd_prim(p, _content_in(q, x))
    only = (up | uq) - common
    if only:
        x = sorted(only)[0]
        if x in up:
            return _gcd_prim(_content_in(p, x), q)
        return _gcd_prim(p, _content_in(q, x))
    # main variable: smallest combined degree keeps the PRS short
    x = min(sorted(common), key=lambda v: (max(p.degree(v), q.degree(v)), v))
    cp, cq = _content_in(p, x), _content_in(q, x)
    pp = p.divexact(cp) if not cp.is_constant() else p
    qq = q.divexact(cq) if not cq.is_constant() else q
    cont = _gcd_prim(cp, cq)
    univariate = len(common) == 1 and pp.is_integral() and qq.is_integral()
    fd = to_dense(pp, x, as_int=univariate)
    gd = to_dense(qq, x, as_int=univariate)
    if _deg(fd) < _deg(gd):
        fd, gd = gd, fd
    last = _prim_prs_last(fd, gd)
    if _deg(last) <= 0:
        h = MPoly.const(1, p.vars)
    else:
        h = from_dense(last, x, p.vars).with_vars(p.vars)
        h = _content_free(h, x)
    out = h * cont
    return out.primitive()[1]


def _content_free(h: MPoly, x: str) -> MPoly:
    c = _content_in(h, x)
    if not c.is_constant():
        h = h.divexact(c)
    return h.primitive()[1]


def _prim_prs_last(f: list, g: list) -> list:
    """Last nonzero element of the primitive PRS of f, g."""
    f = dense_primitive(f)
    g = dense_primitive(g)
    while g:
        r = dense_prem(f, g)
        _trim(r)
        f, g = g, (dense_primitive(r) if r else r)
    return f


def poly_gcd(p: MPoly, q: MPoly) -> MPoly:
    """Primitive gcd with positive leading coefficient; gcd(0, 0) is an error."""
    p, q = p._align(q)
    if not p and not q:
        raise ValueError("gcd(0, 0) is undefined")
    if not p:
        return q.primitive()[1]
    if not q:
        return p.primitive()[1]
    return _gcd_prim(p.primitive()[1], q.primitive()[1]).with_vars(p.vars)


def poly_lcm(p: MPoly, q: MPoly) -> MPoly:
    g = poly_gcd(p, q)
    return (p.primitive()[1] * q.primitive()[1]).divexact(g)


# resultants ------------------------------------------------------------------------
def resultant(p: MPoly, q: MPoly, var: str) -> MPoly:
    """Resultant of p and q with respect to ``var`` (Sylvester-determinant sign)."""
    p, q = p._align(q)
    dp, dq = p.degree(var), q.degree(var)
    if dp <= 0 or dq <= 0:
        raise ValueError(f"resultant needs positive degree in {var!r} (got {dp}, {dq})")
    vs = p.vars
    cp, pi = p.primitive()
    cq, qi = q.primitive()
    univariate = pi.used_vars() == (var,) and qi.used_vars() == (var,)
    f = to_dense(pi, var, as_int=univariate)
    g = to_dense(qi, var, as_int=univariate)
    sign = 1
    if dp < dq:
        f, g = g, f
        dp, dq = dq, dp
        sign = (-1) ** (dp * dq)
        cp, cq = cq, cp
    R, S = subresultant_prs(f, g)
    if _deg(R[-1]) > 0:
        res = MPoly.zero(vs)
    else:
        r = S[-1]
        res = r if isinstance(r, MPoly) else MPoly.const(r, vs)
    scale = Fraction(cp) ** dq * Fraction(cq) ** dp * sign
    return res.scale(scale).with_vars(vs)


def subresultants(p: MPoly, q: MPoly, var: str) -> list[MPoly]:
    """The subresultant polynomial remainder sequence in ``var``."""
    p, q = p._align(q)
    f = to_dense(p, var)
    g = to_dense(q, var)
    if _deg(f) < _deg(g):
        f, g = g, f
    R, _ = subresultant_prs(f, g)
    return [from_dense(r, var, p.vars) for r in R]


def subresultant_coeffs(p: MPoly, q: MPoly, var: str, j: int) -> list[MPoly]:
    """Coefficients (low to high, degrees 0..j) of the j-th subresultant polynomial.

    Computed from its determinant definition: for each coefficient, the
    determinant of the Sylvester sub-matrix selected in the standard way.
    This stays exact when the remainder sequence skips degree ``j``.
    """
    p, q = p._align(q)
    vs = p.vars
    f = to_dense(p, var)
    g = to_dense(q, var)
    m, n = _deg(f), _deg(g)
    if j < 0 or j >= min(m, n) + (1 if m != n else 0):
        raise ValueError(f"subresultant index {j} out of range for degrees {m}, {n}")
    rows = []
    # rows for x^(n-j-1-i) * f, i = 0..n-j-1, and x^(m-j-1-i) * g
    size = m + n - 2 * j
    zero = MPoly.zero(vs)

    def row_of(poly: list, shift: int) -> list:
        # coefficient of x^(m+n-j-1-col) for col in 0..m+n-j-1
        width = m + n - j
        r = [zero] * width
        for i, c in enumerate(poly):
            deg = i + shift
            col = m + n - j - 1 - deg
            if 0 <= col < width:
                r[col] = c
        return r

    for i in range(n - j):
        rows.append(row_of(f, n - j - 1 - i))
    for i in range(m - j):
        rows.append(row_of(g, m - j - 1 - i))
    out = []
    base_cols = list(range(size - 1))
    width = m + n - j
    for t in range(j + 1):
        # last column picks the coefficient of x^t
        col = width - 1 - t
        mat = [[r[c] for c in base_cols] + [r[col]] for r in rows]
        out.append(bareiss_det(mat))
    return out


def bareiss_det(mat: list[list]) -> MPoly:
    """Fraction-free determinant of a square matrix of MPoly (or int) entries."""
    n = len(mat)
    if n == 0:
        return MPoly.const(1)
    vs = merge_vars(*[e.vars for row in mat for e in row if isinstance(e, MPoly)])
    a = [[(e.with_vars(vs) if isinstance(e, MPoly) else MPoly.const(e, vs)) for e in row] for row in mat]
    sign = 1
    prev = MPoly.const(1, vs)
    for k in range(n - 1):
        if not a[k][k]:
            piv = next((r for r in range(k + 1, n) if a[r][k]), None)
            if piv is None:
                return MPoly.zero(vs)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = a[i][j] * akk - aik * a[k][j]
                a[i][j] = num.divexact(prev) if not prev.is_constant() or prev.constant_value() != 1 else num
        prev = akk
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_resultant(p: MPoly, q: MPoly, var: str) -> MPoly:
    """Resultant as the Sylvester determinant; an independent cross-check."""
    p, q = p._align(q)
    f = to_dense(p, var)[::-1]
    g = to_dense(q, var)[::-1]
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    zero = MPoly.zero(p.vars)
    rows = []
    for i in range(n):
        rows.append([zero] * i + f + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + g + [zero] * (size - n - 1 - i))
    return bareiss_det(rows)


# square-free decomposition -------------------------------------------------------
def squarefree(p: MPoly, var: str) -> list[tuple[MPoly, int]]:
    """Yun's algorithm in ``var``; factors are primitive with positive lc.

    The content of ``p`` with respect to ``var`` is not decomposed and is
    dropped from the output.
    """
    if not p:
        raise ValueError("square-free decomposition of the zero polynomial")
    p = p.primitive()[1]
    if p.degree(var) <= 0:
        return []
    c = _content_in(p, var)
    if not c.is_constant():
        p = p.divexact(c)
    dp = p.diff(var)
    a = poly_gcd(p, dp)
    b = p.divexact(a)
    cpoly = dp.divexact(a) if not a.is_constant() else dp
    d = cpoly - b.diff(var)
    out = []
    i = 1
    while b.degree(var) > 0:
        if not d:
            out.append((b.primitive()[1], i))
            break
        a = poly_gcd(b, d)
        if a.degree(var) > 0:
            out.append((a.primitive()[1], i))
        b = b.divexact(a)
        cpoly = d.divexact(a)
        d = cpoly - b.diff(var)
        i += 1
    return out


def squarefree_part(p: MPoly, var: str) -> MPoly:
    out = MPoly.const(1, p.vars)
    for f, _ in squarefree(p, var):
        out = out * f
    return out


# Sturm sequences -----------------------------------------------------------------
def sturm_sequence(p: MPoly) -> list[MPoly]:
    """Sturm chain of a univariate polynomial, each member scaled by a positive
    constant to integer coefficients."""
    used = p.used_vars()
    if len(used) > 1:
        raise ValueError(f"Sturm sequence needs a univariate polynomial (uses {used})")
    if not used:
        return [p]
    x = used[0]
    q = p.with_vars((x,))
    chain = [dense_primitive_positive(to_dense(q.primitive()[1], x, as_int=True))]
    chain.append(dense_primitive_positive(to_dense(q.diff(x).primitive()[1], x, as_int=True)))
    while _deg(chain[-1]) > 0:
        f, g = chain[-2], chain[-1]
        r = dense_prem(f, g)
        _trim(r)
        if not r:
            break
        # prem = lc(g)^e * rem; keep -rem up to a positive factor
        e = _deg(f) - _deg(g) + 1
        if g[-1] ** e > 0:
            r = [-c for c in r]
        chain.append(dense_primitive_positive(r))
    return [from_dense(c, x, (x,)) for c in chain]


def dense_primitive_positive(f: list) -> list:
    """Divide integer coefficients by their positive content (sign preserved)."""
    g = 0
    for c in f:
        g = igcd(g, c)
    if g in (0, 1):
        return list(f)
    return [c // g for c in f]


def dense_sign_at(f: list, a: int, b: int) -> int:
    """Sign of f(a/b) for b > 0 via homogenised integer Horner."""
    if not f:
        return 0
    acc = f[-1]
    bp = 1
    for c in reversed(f[:-1]):
        bp *= b
        acc = acc * a + c * bp
    return (acc > 0) - (acc < 0)


def dense_eval_scaled(f: list, a: int, b: int) -> int:
    """b^deg(f) * f(a/b) as an exact integer."""
    if not f:
        return 0
    acc = f[-1]
    bp = 1
    for c in reversed(f[:-1]):
        bp *= b
        acc = acc * a + c * bp
    return acc


def sign_variations(signs: Sequence[int]) -> int:
    v = 0
    last = 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


class SturmChain:
    """Precomputed integer Sturm chain for fast root counting at rationals."""

    def __init__(self, p: MPoly):
        self.polys = sturm_sequence(p)
        self.dense = [to_dense(q, q.used_vars()[0], as_int=True) if q.used_vars() else [q.constant_value()] for q in self.polys]

    def variations(self, x: Fraction) -> int:
        x = Fraction(x)
        return sign_variations([dense_sign_at(f, x.numerator, x.denominator) for f in self.dense])

    def variations_at_inf(self, positive: bool) -> int:
        signs = []
        for f in self.dense:
            lc = f[-1]
            d = len(f) - 1
            s = (lc > 0) - (lc < 0)
            if not positive and d % 2 == 1:
                s = -s
            signs.append(s)
        return sign_variations(signs)

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct real roots in the half-open interval (lo, hi]."""
        return self.variations(lo) - self.variations(hi)
