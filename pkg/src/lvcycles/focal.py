"""Focal values of a planar center-focus field by the Lyapunov-function method.

For ż = J z + N(z) with J = [[0, p], [q, 0]] and W = -q/p > 0 the quadratic
form V2 = W z1^2 + z2^2 is a first integral of the linear part.  We extend it
to V = V2 + V3 + ... so that

    dV/dt = eta_4 V2^2 + eta_6 V2^3 + eta_8 V2^4 + ...

V2 is positive definite wherever W > 0, which is what :class:`PDCertificate`
records.  By default the constants are measured against R2 = V2 / W, the
form that equals y1^2 on the y1 axis:  dV/dt = sum LV_k R2^(k+1), so
LV_k = eta_(2k+2) W^(k+1).  ``measure="V2"`` reports eta_(2k+2) itself.  Both
differ only by positive factors on the region W > 0.

At each even degree d the homogeneous part V_d is fixed up to a multiple of
V2^(d/2); the ``normalization`` argument picks which coefficient is set to
zero (``"z1"``: the z1^d coefficient, ``"z2"``: the z2^d one).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Mapping, Sequence

from . import linalg
from .exactnum import Interval, Sign
from .lvmodel import LVSystem
from .mpoly import MPoly, RatFunc
from .mpoly.interval_eval import certify_sign
from .quadext import QuadElem, QuadField
from .reduction import PlanarField, ReductionError, apply_template
from .series import TPoly, compose, product_degree

NORMALIZATIONS = ("z1", "z2")
MEASURES = ("y1", "V2")


class FocalError(ValueError):
    pass


@dataclass
class PDCertificate:
    """V2 = W z1^2 + z2^2 is positive definite wherever W > 0."""

    quadratic_form: str
    omega_sq: RatFunc
    certified_on: dict | None = None

    def certify(self, box: Mapping[str, Interval], budget: int = 256) -> bool:
        if certify_sign(self.omega_sq, box, budget) is Sign.POS:
            self.certified_on = dict(box)
            return True
        return False


@dataclass
class FocalSet:
    LV: list[RatFunc]
    pd_certificate: PDCertificate
    normalization: str = "z1"
    LV0: RatFunc | None = None
    raw: list = field(default_factory=list, repr=False)
    measure: str = "y1"

    @property
    def LV1(self) -> RatFunc:
        return self.LV[0]

    @property
    def LV2(self) -> RatFunc:
        return self.LV[1]

    @property
    def LV3(self) -> RatFunc:
        return self.LV[2]

    def to_text(self) -> str:
        lines = []
        for k, v in enumerate(self.LV, 1):
            lines.append(f"LV{k}.num = {v.num}")
            lines.append(f"LV{k}.den = {v.den}")
        return "\n".join(lines) + "\n"


# normalization of the linear part ------------------------------------------------------------
def _sqrt_rational(x) -> Fraction | None:
    if x < 0:
        return None
    x = Fraction(x)
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def omega_free_form(pl: PlanarField) -> PlanarField:
    """Linear change z1 = y1, z2 = -(c11 y1 + c12 y2) giving z1' = -z2, z2' = W z1."""
    F = pl.field
    (c11, c12), (c21, c22) = pl.linear_part()
    if c11 + c22:
        raise FocalError("linear part has nonzero trace")
    if not c12:
        raise FocalError("linear part has no rotation (c12 = 0)")
    W = -(c11 * c11) - c12 * c21
    inv12 = F.one / c12
    y_of_z = [TPoly.linear(2, [F.one, F.zero]), TPoly.linear(2, [-(c11 * inv12), -inv12])]
    d = pl.degree()
    G = [compose(c, y_of_z, d, F.one) for c in pl.comps]
    comps = [G[0], -(G[0].scale(c11) + G[1].scale(c12))]
    return PlanarField(F, comps, "omega-free", W)


def normalize_center(pl: PlanarField, form: str = "rotation", box: Mapping[str, Interval] | None = None) -> PlanarField:
    """Put the linear part in rotation form [[0, -w], [w, 0]].

    ``form="omega-free"`` stops at [[0, -1], [W, 0]], which keeps everything
    in the coefficient field.  The rotation form needs w = sqrt(W); when W is
    not a rational square it lives in the quadratic extension, and the
    returned field's coefficients are :class:`QuadElem` values.
    """
    if form not in ("rotation", "omega-free"):
        raise FocalError(f"unknown form {form!r}")
    z = omega_free_form(pl)
    W = z.omega_sq
    _check_positive(W, z.field, box)
    if form == "omega-free":
        return z
    F = z.field
    root = _base_sqrt(W, F)
    if root is not None:
        Q, w = F, root
    else:
        Q = QuadField(F, W)
        w = Q.gen
    winv = Q.one / w
    lifted = [c.map(Q.lift) for c in z.comps] if Q is not F else z.comps
    subs = [TPoly.linear(2, [winv, Q.zero]), TPoly.linear(2, [Q.zero, Q.one])]
    d = pl.degree()
    G = [compose(c, subs, d, Q.one) for c in lifted]
    comps = [G[0].scale(w), G[1]]
    return PlanarField(Q, comps, "rotation", Q.lift(W) if Q is not F else W)


def _base_sqrt(W, F):
    if isinstance(W, Fraction):
        return _sqrt_rational(W)
    lo = F.lower(W)
    if isinstance(lo, RatFunc) and lo.is_constant():
        r = _sqrt_rational(lo.constant_value())
        return F.lift(r) if r is not None else None
    return None


def _check_positive(W, F, box) -> None:
    lo = F.lower(W) if not isinstance(W, Fraction) else W
    if isinstance(lo, Fraction):
        if lo <= 0:
            raise FocalError("omega^2 is not positive")
        return
    if lo.is_constant():
        if lo.constant_value() <= 0:
            raise FocalError("omega^2 is not positive")
        return
    if box is not None and certify_sign(lo, box) is not Sign.POS:
        raise FocalError("omega^2 not certified positive on the box")


# cohomological equations ------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _focal_template(d: int, normalization: str):
    """Inverse of the degree-d system for L = -z2 d/dz1 + w z1 d/dz2 over Q(w)."""
    vars_ = ("w",)
    w = RatFunc.var("w", vars_)
    zero, one = RatFunc.const(0), RatFunc.const(1)
    M = _operator_matrix(d, -one, w, w, zero, one, normalization)
    inv = linalg.inverse(M, zero, one)
    # denominators are constants times powers of w
    k = 0
    for row in inv:
        for x in row:
            if x:
                mons = list(x.den.monomials())
                if len(mons) != 1:
                    raise FocalError("unexpected template denominator")
                k = max(k, x.den.total_degree())
    wk = RatFunc.var("w", vars_) ** k
    adj = [[(x * wk).as_poly() for x in row] for row in inv]
    return adj, ((MPoly.var("w", vars_), k),) if k else ()


def _operator_matrix(d, p, q, m, zero, one, normalization):
    """Rows: monomials z1^j z2^(d-j) (+ normalization row); columns: V_d coefficients (+ eta)."""
    n = d + 1
    even = d % 2 == 0
    size = n + 1 if even else n
    M = [[zero] * size for _ in range(size)]
    for j in range(n):
        if j:
            M[j - 1][j] = M[j - 1][j] + p * j
        if d - j:
            M[j + 1][j] = M[j + 1][j] + q * (d - j)
    if even:
        k = d // 2
        mp = one
        for i in range(k + 1):
            M[2 * i][n] = M[2 * i][n] - mp * comb(k, i)
            mp = mp * m
        col = d if normalization == "z1" else 0
        M[n][col] = one
    return M


def _solve_degree(d, rhs, p, q, m, F, normalization, use_template):
    even = d % 2 == 0
    b = list(rhs) + ([F.zero] if even else [])
    if use_template:
        return apply_template(_focal_template(d, normalization), {"w": q}, b, F)
    M = _operator_matrix(d, p, q, m, F.zero, F.one, normalization)
    try:
        return linalg.solve(M, b)
    except linalg.SingularMatrixError:
        raise FocalError(f"unsolvable cohomological equation at degree {d}") from None


def lyapunov_constants(pl: PlanarField, count: int = 3, normalization: str = "z1"):
    """eta_4, eta_6, ... in the field of ``pl`` together with the final V."""
    if normalization not in NORMALIZATIONS:
        raise FocalError(f"unknown normalization {normalization!r}")
    F = pl.field
    (a, p), (q, e) = pl.linear_part()
    if a or e:
        raise FocalError("linear part is not of the form [[0, p], [q, 0]]; normalize first")
    m = -(q / p)
    use_template = (p == -F.one) if not isinstance(p, QuadElem) else False
    N = [c.without_degree_below(2) for c in pl.comps]
    V = TPoly(2, {})
    V.terms.update(TPoly.monomial(2, (2, 0), m).terms)
    V.terms.update(TPoly.monomial(2, (0, 2), F.one).terms)
    etas = []
    for d in range(3, 2 * count + 3):
        K = product_degree(V.diff(0), N[0], d) + product_degree(V.diff(1), N[1], d)
        rhs = [-K.get((j, d - j), F.zero) for j in range(d + 1)]
        sol = _solve_degree(d, rhs, p, q, m, F, normalization, use_template)
        for j in range(d + 1):
            if sol[j]:
                V.terms.update(TPoly.monomial(2, (j, d - j), sol[j]).terms)
        if d % 2 == 0:
            etas.append(sol[d + 1])
    return etas, V


def focal_values(pl: PlanarField, count: int = 3, normalization: str = "z1", measure: str = "y1") -> FocalSet:
    """LV1..LV<count> of a planar field.

    Accepts the rotation or omega-free form; a field still in block
    coordinates is first brought to the omega-free form.
    """
    if pl.frame == "y":
        pl = omega_free_form(pl)
    if measure not in MEASURES:
        raise FocalError(f"unknown measure {measure!r}")
    etas, _ = lyapunov_constants(pl, count, normalization)
    F = pl.field
    if measure == "y1":
        W = pl.omega_sq
        scaled, wp = [], W
        for x in etas:
            wp = wp * W
            scaled.append(x * wp)
        etas = scaled
    LV = [F.lower(x) for x in etas]
    LV = [x if isinstance(x, RatFunc) else RatFunc.const(x) for x in LV]
    W = pl.omega_sq
    Wr = F.lower(W) if W is not None else RatFunc.const(1)
    if not isinstance(Wr, RatFunc):
        Wr = RatFunc.const(Wr)
    form = "z1^2 + z2^2" if pl.frame == "rotation" else f"({Wr})*z1^2 + z2^2"
    cert = PDCertificate(form, Wr)
    return FocalSet(LV, cert, normalization, None, etas, measure)


# linear focus quantity -------------------------------------------------------------------------------
def char_coeffs(sys: LVSystem):
    """(t, M, D) with det(xI - A) = x^3 - t x^2 + M x - D."""
    return sys.trace(), sys.principal_minor_sum(), sys.det()


def lv0(sys: LVSystem, mu_star, mu_offset, solve_for: str = "μ") -> RatFunc:
    """Real part of the complex eigenvalue pair at solve_for = mu_star + mu_offset, to first order.

    With eigenvalues a +- ib and g,  tM - D = 2a((a + g)^2 + b^2), so the sign
    is exact; the denominator 2(t^2 + M) equals 2(g^2 + b^2) at a = 0.
    """
    s = sys.substitute({solve_for: RatFunc.coerce(mu_star) + Fraction(mu_offset)})
    t, M, D = char_coeffs(s)
    return (t * M - D) / ((t * t + M) * 2)


def focus_real_part_interval(A: Sequence[Sequence[Fraction]], width=Fraction(1, 10**30)) -> Interval:
    """Certified enclosure of the exact real part of the complex eigenvalue pair."""
    from .realroot import isolate_univariate

    s = LVSystem.from_entries(A)
    t, M, D = (x.constant_value() for x in char_coeffs(s))
    x = MPoly.var("x", ("x",))
    p = x**3 - x**2 * t + x * M - MPoly.const(D, ("x",))
    disc = 18 * t * M * D - 4 * t**3 * D + t**2 * M**2 - 4 * M**3 - 27 * D**2
    if disc >= 0:
        raise FocalError("eigenvalues are all real; no complex pair")
    roots = isolate_univariate(p, Fraction(width))
    if len(roots) != 1:
        raise FocalError("expected exactly one real eigenvalue")
    g = roots[0]
    return Interval((t - g.hi) / 2, (t - g.lo) / 2)
