"""Linear normalization and center-manifold reduction at (1, 1, 1).

The pipeline is: solve the eigenvalue condition for one parameter, bring the
linearization into block form C = T A T^-1, rewrite the field in y = T(x - 1),
approximate the center manifold y3 = h(y1, y2) order by order and restrict
the field to it.

Polynomial work is done with :class:`~lvcycles.series.TPoly` over a pluggable
coefficient field (see :mod:`lvcycles.mpoly.fields`), so the same code runs
symbolically in the parameters or at a rational parameter point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from . import linalg
from .exactnum import Interval, Sign
from .lvmodel import LVSystem
from .mpoly import MPoly, RatFunc
from .mpoly.fields import FactoredField, PointField, RatFuncField
from .mpoly.interval_eval import certify_sign
from .quadext import QuadField
from .series import TPoly, compose, product_degree


class ReductionError(ValueError):
    pass


# eigenvalue condition ------------------------------------------------------------------
def eigencondition(sys: LVSystem) -> RatFunc:
    """det(A) - M(A) tr(A); zero exactly when A has a pair +-i w."""
    return sys.det() - sys.principal_minor_sum() * sys.trace()


def eigencondition_solve(sys: LVSystem, solve_for: str) -> RatFunc:
    cond = eigencondition(sys)
    if not cond:
        raise ReductionError("eigenvalue condition holds identically")
    N = cond.num
    if solve_for not in N.used_vars():
        raise ReductionError(f"eigenvalue condition does not involve {solve_for}; unsolvable")
    deg = N.degree(solve_for)
    if deg != 1:
        raise ReductionError(f"eigenvalue condition has degree {deg} in {solve_for}, expected 1")
    co = N.coeffs_in(solve_for)
    lead = co[1]
    rest = co.get(0, MPoly.zero(N.vars))
    return -RatFunc(rest) / RatFunc(lead)


# block form ------------------------------------------------------------------------------
@dataclass
class BlockForm:
    T: list[list[RatFunc]]
    C: list[list[RatFunc]]
    omega_sq: RatFunc
    lam_real: RatFunc

    def check(self) -> None:
        C = self.C
        for i, j in ((0, 2), (1, 2), (2, 0), (2, 1)):
            if C[i][j]:
                raise ReductionError(f"c{i + 1}{j + 1} does not vanish")
        if C[0][0] + C[1][1]:
            raise ReductionError("c11 + c22 does not vanish")

    def omega_sq_sign(self, box: Mapping[str, Interval], budget: int = 256) -> Sign:
        return certify_sign(self.omega_sq, box, budget)

    def to_text(self) -> str:
        lines = []
        for name, M in (("T", self.T), ("C", self.C)):
            for i, row in enumerate(M):
                for j, e in enumerate(row):
                    lines.append(f"{name}[{i + 1}][{j + 1}] = {e}")
        lines.append(f"omega_sq = {self.omega_sq}")
        lines.append(f"lam_real = {self.lam_real}")
        return "\n".join(lines) + "\n"


def _as_matrix(T) -> list[list[RatFunc]]:
    if isinstance(T, Mapping):
        T = T["T"]
    return [[RatFunc.coerce(e) for e in row] for row in T]


def conjugate(sys: LVSystem, T) -> list[list[RatFunc]]:
    """T A T^-1, computed as T A adj(T) / det(T)."""
    T = _as_matrix(T)
    d = linalg.det3(T)
    if not d:
        raise ReductionError("T is singular")
    TA = linalg.matmul(T, [list(r) for r in sys.A])
    TAadj = linalg.matmul(TA, linalg.adj3(T))
    C = [[x / d for x in row] for row in TAadj]
    # T A = C T, checked without the inverse
    CT = linalg.matmul(C, T)
    for i in range(3):
        for j in range(3):
            if CT[i][j] != TA[i][j]:
                raise ReductionError("T A != C T")
    return C


def block_diagonalize(sys: LVSystem, T=None, box: Mapping[str, Interval] | None = None) -> BlockForm:
    """Block form of the linearization; uses ``T`` if given, else a canonical T.

    The canonical T has rows (Re v, Im v / w, u) where v A = i w v with v's
    first nonzero coordinate 1 and u A = lam_real u likewise; its block is
    [[0, -w^2], [1, 0]].
    """
    if eigencondition(sys):
        raise ReductionError("eigenvalue condition does not hold identically")
    if T is None:
        T = canonical_T(sys)
    else:
        T = _as_matrix(T)
    C = conjugate(sys, T)
    bf = BlockForm(T, C, -C[0][0] * C[0][0] - C[0][1] * C[1][0], C[2][2])
    try:
        bf.check()
    except ReductionError as exc:
        raise ReductionError(f"T does not block-diagonalize A: {exc}") from None
    _check_omega(bf.omega_sq, box)
    return bf


def _check_omega(w: RatFunc, box) -> None:
    if not w:
        raise ReductionError("degenerate eigenstructure: omega^2 vanishes")
    if w.is_constant() and w.constant_value() <= 0:
        raise ReductionError("degenerate eigenstructure: omega^2 is not positive")
    if box is not None and certify_sign(w, box) is not Sign.POS:
        raise ReductionError("degenerate eigenstructure: omega^2 not certified positive on the box")


def canonical_T(sys: LVSystem) -> list[list[RatFunc]]:
    W = sys.principal_minor_sum()
    _check_omega(W, None)
    base = RatFuncField()
    Q = QuadField(base, -W)  # s = i w
    A = [[Q.lift(e) for e in row] for row in sys.A]
    v = _left_eigenvector(A, Q.gen, Q.zero, Q.one)
    p = [x.a for x in v]
    q = [x.b for x in v]
    lam = sys.trace()
    Ar = [list(r) for r in sys.A]
    u = _left_eigenvector(Ar, lam, RatFunc.const(0), RatFunc.const(1))
    return [p, q, u]


def _left_eigenvector(A, ev, zero, one):
    """u with u A = ev u, first nonzero coordinate 1."""
    for k in range(3):
        others = [j for j in range(3) if j != k]
        # columns j != k:  sum_i u_i a_ij = ev u_j with u_k = 1
        M = [[A[i][j] - (ev if i == j else zero) for i in others] for j in others]
        b = [-A[k][j] for j in others]
        try:
            sol = linalg.solve(M, b)
        except linalg.SingularMatrixError:
            continue
        u = [None] * 3
        u[k] = one
        for i, s in zip(others, sol):
            u[i] = s
        # the remaining column must hold too
        r = A[0][k] * u[0] + A[1][k] * u[1] + A[2][k] * u[2] - ev * u[k]
        if not r:
            return u
    raise ReductionError("no left eigenvector found")


# transformed field -------------------------------------------------------------------------
def default_field(sys: LVSystem):
    return FactoredField(sys.params) if sys.params else PointField({})


@dataclass
class TransformedField:
    """y' = C y + Q(y) with coefficients in ``field``; ``comps`` are TPolys in (y1, y2, y3)."""

    field: object
    C: list[list[object]]
    comps: list[TPoly]

    def linear_part(self) -> list[list[object]]:
        F = self.field
        out = []
        for comp in self.comps:
            out.append([comp.get(e, F.zero) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))])
        return out

    def to_ratfunc(self) -> list[dict[tuple[int, ...], RatFunc]]:
        return [{e: self.field.lower(c) for e, c in sorted(comp.items(), reverse=True)} for comp in self.comps]

    def eval(self, y: Sequence) -> list:
        out = []
        for comp in self.comps:
            s = self.field.zero
            for e, c in comp.items():
                t = c
                for yi, ei in zip(y, e):
                    if ei:
                        t = t * yi**ei
                s = s + t
            out.append(s)
        return out


def lift_matrix(M, F) -> list[list[object]]:
    return [[F.lift(e) for e in row] for row in M]


def transform_field(sys: LVSystem, bf: BlockForm, field=None) -> TransformedField:
    F = field or default_field(sys)
    T = lift_matrix(bf.T, F)
    A = lift_matrix(sys.A, F)
    C = lift_matrix(bf.C, F)
    Tinv = [[x / linalg.det3(T) for x in row] for row in linalg.adj3(T)]
    U = [TPoly.linear(3, Tinv[i]) for i in range(3)]
    AU = [TPoly.linear(3, [F.zero] * 3) for _ in range(3)]
    for i in range(3):
        for j in range(3):
            AU[i] = AU[i] + U[j].scale(A[i][j])
    quad = [U[i].mul(AU[i], 2) for i in range(3)]
    comps = []
    for i in range(3):
        p = TPoly.linear(3, C[i])
        for j in range(3):
            p = p + quad[j].scale(T[i][j])
        comps.append(p)
    return TransformedField(F, C, comps)


# center manifold --------------------------------------------------------------------------
@dataclass
class CenterManifold:
    order: int
    h: TPoly  # in (y1, y2), coefficients in the field
    field: object
    coeffs: dict[tuple[int, int], RatFunc] = field(default_factory=dict)

    def p(self, i: int, j: int) -> RatFunc:
        """Coefficient of y1^j y2^(i-j) in h_i."""
        return self.coeffs.get((i, j), RatFunc.const(0))

    def to_text(self) -> str:
        return "".join(f"p[{i}][{j}] = {c}\n" for (i, j), c in sorted(self.coeffs.items()))


def _ratvars():
    return ("a", "w")


@lru_cache(maxsize=None)
def _cm_template(d: int):
    """adj(L) and det(L) for L(h) = -z2 h_z1 + w z1 h_z2 - a h on degree-d forms."""
    a = RatFunc.var("a", _ratvars())
    w = RatFunc.var("w", _ratvars())
    zero, one = RatFunc.const(0), RatFunc.const(1)
    n = d + 1
    M = [[zero] * n for _ in range(n)]
    for j in range(n):
        M[j][j] = M[j][j] - a
        if j:
            M[j - 1][j] = M[j - 1][j] - j
        if d - j:
            M[j + 1][j] = M[j + 1][j] + w * (d - j)
    factors = [(MPoly.var("a", _ratvars()), 1)] if d % 2 == 0 else []
    for s in range(d, 0, -2):
        factors.append(((a * a + w * (s * s)).as_poly(), 1))
    return _adjugate(M, factors, zero, one)


def _adjugate(M, factors, zero, one):
    inv = linalg.inverse(M, zero, one)
    den = RatFunc.const(1)
    for f, e in factors:
        den = den * RatFunc(f) ** e
    adj = []
    for row in inv:
        out = []
        for x in row:
            y = x * den
            if not y.is_polynomial():
                raise ReductionError("template denominator is not covered by its factors")
            out.append(y.as_poly())
        adj.append(out)
    return adj, tuple(factors)


def eval_template_poly(p: MPoly, values: Mapping[str, object], F, cache: dict):
    """p(values) in the field F, reusing powers through ``cache``."""
    out = F.zero
    for exps, c in p.monomials():
        t = None
        for v, e in zip(p.vars, exps):
            if not e:
                continue
            key = (v, e)
            pw = cache.get(key)
            if pw is None:
                pw = values[v] ** e
                cache[key] = pw
            t = pw if t is None else t * pw
        c = Fraction(c)
        out = out + (F.lift(c) if t is None else t * c)
    return out


def apply_template(template, values, rhs: Sequence, F, rows: Sequence[int] | None = None):
    """Solve M x = rhs with M^-1 = adj / prod(factors) evaluated at ``values``."""
    adj, factors = template
    cache: dict = {}
    den = F.one
    for f, e in factors:
        den = den * eval_template_poly(f, values, F, cache) ** e
    den_inv = F.one / den
    out = []
    for j in rows if rows is not None else range(len(adj)):
        s = F.zero
        for k, r in enumerate(rhs):
            if not r or not adj[j][k]:
                continue
            s = s + eval_template_poly(adj[j][k], values, F, cache) * r
        out.append(s * den_inv if s else s)
    return out


def _zframe(tf: TransformedField):
    """Coordinates z1 = y1, z2 = -(c11 y1 + c12 y2) giving z1' = -z2, z2' = W z1."""
    F = tf.field
    c11, c12, c21 = tf.C[0][0], tf.C[0][1], tf.C[1][0]
    if not c12:
        raise ReductionError("c12 vanishes; no center in the (y1, y2) block")
    W = -(c11 * c11) - c12 * c21
    inv12 = F.one / c12
    y_of_z = [
        TPoly.linear(3, [F.one, F.zero, F.zero]),
        TPoly.linear(3, [-(c11 * inv12), -inv12, F.zero]),
        TPoly.linear(3, [F.zero, F.zero, F.one]),
    ]
    G = [compose(c, y_of_z, 2, F.one) for c in tf.comps]
    Z = [G[0], -(G[0].scale(c11) + G[1].scale(c12)), G[2]]
    return Z, W, c11, c12


def _restrict(p: TPoly, h: TPoly, max_degree: int, F) -> TPoly:
    """p(z1, z2, h(z1, z2)) for p in three variables."""
    subs = [TPoly.monomial(2, (1, 0), F.one), TPoly.monomial(2, (0, 1), F.one), h]
    return compose(p, subs, max_degree, F.one)


def _center_manifold_z(Z, W, a, F, order: int) -> TPoly:
    h = TPoly(2, {})
    vals = {"a": a, "w": W}
    for d in range(2, order + 1):
        view = [_restrict(Z[i], h, d, F) for i in range(3)]
        N1 = view[0].without_degree_below(2)
        N2 = view[1].without_degree_below(2)
        rhs_poly = view[2].homogeneous(d)
        if h.terms:
            rhs_poly = rhs_poly - product_degree(h.diff(0), N1, d) - product_degree(h.diff(1), N2, d)
        rhs = [rhs_poly.get((j, d - j), F.zero) for j in range(d + 1)]
        try:
            sol = apply_template(_cm_template(d), vals, rhs, F)
        except ZeroDivisionError:
            raise ReductionError(f"resonant center-manifold equation at order {d}") from None
        for j, c in enumerate(sol):
            if c:
                h.terms.update(TPoly.monomial(2, (j, d - j), c).terms)
    return h


def _z_to_y(F, c11, c12):
    # z1 = y1, z2 = -(c11 y1 + c12 y2)
    return [TPoly.linear(2, [F.one, F.zero]), TPoly.linear(2, [-c11, -c12])]


def center_manifold(tf: TransformedField, order: int = 6, lower: bool = True) -> CenterManifold:
    if order < 2:
        raise ReductionError("order must be at least 2")
    F = tf.field
    a = tf.C[2][2]
    if not a:
        raise ReductionError("real eigenvalue vanishes; the manifold is not normally hyperbolic")
    Z, W, c11, c12 = _zframe(tf)
    hz = _center_manifold_z(Z, W, a, F, order)
    hy = compose(hz, _z_to_y(F, c11, c12), order, F.one)
    coeffs = {}
    if lower:
        for (j, k), c in hy.items():
            coeffs[(j + k, j)] = F.lower(c)
    return CenterManifold(order, hy, F, coeffs)


def invariance_residual(tf: TransformedField, cm: CenterManifold, max_degree: int) -> TPoly:
    """Dh . (y1', y2') - y3' on y3 = h, truncated at ``max_degree``."""
    F = tf.field
    view = [_restrict(c, cm.h, max_degree, F) for c in tf.comps]
    r = cm.h.diff(0).mul(view[0], max_degree) + cm.h.diff(1).mul(view[1], max_degree) - view[2]
    return r


@dataclass
class PlanarField:
    """Planar polynomial field; ``comps`` are TPolys in two variables."""

    field: object
    comps: list[TPoly]
    frame: str = "y"
    omega_sq: object = None

    def linear_part(self) -> list[list[object]]:
        F = self.field
        return [[comp.get(e, F.zero) for e in ((1, 0), (0, 1))] for comp in self.comps]

    def degree(self) -> int:
        return max(c.degree() for c in self.comps)

    def to_ratfunc(self) -> list[dict[tuple[int, int], RatFunc]]:
        return [{e: self.field.lower(c) for e, c in sorted(comp.items(), reverse=True)} for comp in self.comps]


def reduce_to_plane(tf: TransformedField, cm: CenterManifold, max_degree: int = 7) -> PlanarField:
    F = tf.field
    comps = [_restrict(tf.comps[i], cm.h, max_degree, F) for i in range(2)]
    return PlanarField(F, comps, "y")


def matrix_to_ratfunc(M, F) -> list[list[RatFunc]]:
    return [[F.lower(e) for e in row] for row in M]
