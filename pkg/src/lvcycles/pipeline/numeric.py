"""Floating-point verification: adaptive integration, return maps, boundary probes.

Nothing here participates in certification.  The integrator is a
Dormand–Prince 5(4) pair with local extrapolation, step rejection when a
coordinate plane would be crossed, and the usual quartic dense output used
for event location.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

Vec = tuple[float, ...]
Field = Callable[[float, Vec], Vec]


class IntegrationError(RuntimeError):
    pass


class ReturnMapError(RuntimeError):
    pass


# Dormand–Prince coefficients
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = _A[6]
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
_D = (
    -12715105075 / 11282082432, 0.0, 87487479700 / 32700410799, -10690763975 / 1880347072,
    701980252875 / 199316789632, -1453857185 / 822651844, 69997945 / 29380423,
)


def _axpy(y: Vec, h: float, ks: Sequence[Vec], coeffs: Sequence[float]) -> Vec:
    out = list(y)
    for c, k in zip(coeffs, ks):
        if c:
            hc = h * c
            for i, ki in enumerate(k):
                out[i] += hc * ki
    return tuple(out)


@dataclass
class Step:
    t0: float
    h: float
    y0: Vec
    y1: Vec
    ks: list

    def interpolate(self, theta: float) -> Vec:
        """Quartic dense output at t0 + theta*h."""
        t1 = 1 - theta
        out = []
        for i in range(len(self.y0)):
            k = [kk[i] for kk in self.ks]
            dy = self.y1[i] - self.y0[i]
            bspl = self.h * k[0] - dy
            r4 = sum(d * kj for d, kj in zip(_D, k)) * self.h
            out.append(self.y0[i] + theta * (dy + t1 * (bspl + theta * (dy - self.h * k[6] - bspl + t1 * r4))))
        return tuple(out)


@dataclass
class Trajectory:
    t: list[float]
    y: list[Vec]
    steps: int = 0
    rejected: int = 0
    dense: list[Step] = field(default_factory=list, repr=False)


def integrate(
    f: Field,
    y0: Sequence[float],
    t_end: float,
    tol: float = 1e-10,
    h0: float | None = None,
    positive: bool = False,
    keep_dense: bool = False,
    on_step: Callable[[Step], bool] | None = None,
    max_steps: int = 10_000_000,
) -> Trajectory:
    """Integrate y' = f(t, y) from t = 0 to t_end.

    The local error estimate is kept below ``tol`` in the max norm (mixed:
    absolute near zero, relative for large components).  With ``positive``
    every step that would leave the open positive orthant is rejected and
    retried with a smaller step.  ``on_step`` may return True to stop early.
    """
    y = tuple(float(v) for v in y0)
    if positive and min(y) <= 0:
        raise IntegrationError("initial point is not in the open positive orthant")
    t = 0.0
    k1 = tuple(f(t, y))
    h = h0 if h0 is not None else min(abs(t_end), 0.01) or 0.01
    h_min = 1e-14 * max(1.0, abs(t_end))
    traj = Trajectory([t], [y])
    while t < t_end:
        if traj.steps + traj.rejected > max_steps:
            raise IntegrationError("step budget exhausted")
        h = min(h, t_end - t)
        ks = [k1]
        for s in range(1, 7):
            ys = _axpy(y, h, ks, _A[s])
            ks.append(tuple(f(t + _C[s] * h, ys)))
        y_new = _axpy(y, h, ks[:6], _B)
        err = 0.0
        for i in range(len(y)):
            e = h * sum(c * k[i] for c, k in zip(_E, ks))
            sc = max(1.0, abs(y[i]), abs(y_new[i]))
            err = max(err, abs(e) / sc)
        if positive and min(y_new) <= 0:
            traj.rejected += 1
            h *= 0.25
            if h < h_min:
                raise IntegrationError("step size underflow at the orthant boundary")
            continue
        if err <= tol:
            st = Step(t, h, y, y_new, ks)
            t += h
            y = y_new
            k1 = ks[6]
            traj.steps += 1
            traj.t.append(t)
            traj.y.append(y)
            if keep_dense:
                traj.dense.append(st)
            if on_step is not None and on_step(st):
                break
        else:
            traj.rejected += 1
        fac = 0.9 * (tol / err) ** 0.2 if err > 0 else 5.0
        h *= min(5.0, max(0.2, fac))
        if h < h_min:
            raise IntegrationError(f"step size underflow at t = {t}")
    return traj


# model fields -----------------------------------------------------------------------
def lv_field(A: Sequence[Sequence[float]]) -> Field:
    """x_i' = x_i * sum_j a_ij (x_j - 1) with a float matrix."""
    a = [list(map(float, r)) for r in A]

    def f(t, x):
        d = [xj - 1.0 for xj in x]
        return tuple(x[i] * (a[i][0] * d[0] + a[i][1] * d[1] + a[i][2] * d[2]) for i in range(3))

    return f


def may_leonard(alpha: float, beta: float) -> list[list[float]]:
    """Interaction matrix of the symmetric May–Leonard system in the (1,1,1) normalization."""
    s = 1 + alpha + beta
    return [[-1 / s, -alpha / s, -beta / s], [-beta / s, -1 / s, -alpha / s], [-alpha / s, -beta / s, -1 / s]]


# return map ---------------------------------------------------------------------------
@dataclass
class Section:
    """Half-plane {y2 = 0, y1 > 0} of y = T (x - 1), crossed in direction ``orientation``."""

    T: list[list[float]]
    Tinv: list[list[float]]
    orientation: int
    center: Vec = (1.0, 1.0, 1.0)

    def to_y(self, x: Vec) -> Vec:
        d = [x[i] - self.center[i] for i in range(3)]
        return tuple(sum(self.T[i][j] * d[j] for j in range(3)) for i in range(3))

    def to_x(self, y: Vec) -> Vec:
        return tuple(self.center[i] + sum(self.Tinv[i][j] * y[j] for j in range(3)) for i in range(3))


def section_from(T: Sequence[Sequence[float]], C: Sequence[Sequence[float]]) -> Section:
    import numpy as np

    Tf = np.array(T, dtype=float)
    c21 = float(C[1][0])
    if c21 == 0:
        raise ReturnMapError("section is not transversal: c21 = 0")
    return Section(Tf.tolist(), np.linalg.inv(Tf).tolist(), 1 if c21 > 0 else -1)


@dataclass
class FixedPoint:
    r: float
    slope: float

    @property
    def stable(self) -> bool:
        return abs(self.slope) < 1


@dataclass
class ReturnMapData:
    samples: list[tuple[float, float]]
    fixed_points: list[FixedPoint]
    tol: float


def crossings(
    f: Field, sec: Section, x0: Vec, count: int, tol: float, t_max: float, positive: bool = True
) -> list[Vec]:
    """States at the next ``count`` crossings of the section, found on the dense output by bisection on y2."""
    hit: list[Vec] = []

    def check(st: Step) -> bool:
        g0 = sec.to_y(st.y0)[1] * sec.orientation
        g1 = sec.to_y(st.y1)[1] * sec.orientation
        if st.t0 > 0 and g0 < 0 <= g1:
            lo, hi = 0.0, 1.0
            while (hi - lo) * st.h > tol:
                m = 0.5 * (lo + hi)
                if sec.to_y(st.interpolate(m))[1] * sec.orientation < 0:
                    lo = m
                else:
                    hi = m
            x = st.interpolate(hi)
            if sec.to_y(x)[0] > 0:
                hit.append(x)
                return len(hit) == count
        return False

    integrate(f, x0, t_max, tol, positive=positive, on_step=check)
    if len(hit) < count:
        raise ReturnMapError(f"only {len(hit)} of {count} returns to the section within t = {t_max}")
    return hit


def first_return(
    f: Field, sec: Section, r: float, tol: float, t_max: float, y3: float = 0.0, positive: bool = True
) -> float:
    """y1 at the first crossing of the section after leaving it at (r, 0, y3)."""
    x = crossings(f, sec, sec.to_x((r, 0.0, y3)), 1, tol, t_max, positive)[0]
    return sec.to_y(x)[0]


def return_map(
    f: Field,
    sec: Section,
    r_range: tuple[float, float],
    samples: int = 24,
    tol: float = 1e-10,
    t_max: float = 200.0,
    burn_in: int = 1,
    positive: bool = True,
) -> ReturnMapData:
    """Sample P(r) on the section and locate its fixed points.

    Orbits start at (r, 0, 0) and the first ``burn_in`` returns are
    discarded, so P is measured between two consecutive returns of an orbit
    that has already settled onto the attracting center manifold.
    Fixed points come from sign changes of P(r) - r, refined by the secant
    method, and are annotated with the secant slope of P.
    """
    lo, hi = r_range
    if not 0 < lo < hi:
        raise ReturnMapError("r_range must satisfy 0 < lo < hi")

    def P(r):
        xs = crossings(f, sec, sec.to_x((r, 0.0, 0.0)), burn_in + 1, tol, t_max * (burn_in + 1), positive)
        a = sec.to_y(xs[-2])[0] if burn_in else r
        return a, sec.to_y(xs[-1])[0]

    starts, pts = [], []
    for k in range(samples):
        r = lo + (hi - lo) * k / max(1, samples - 1)
        a, b = P(r)
        if not (0 < b < 4 * hi):
            raise ReturnMapError(f"orbit from r = {r} left the sampled range")
        starts.append(r)
        pts.append((a, b))
    fps = []
    for k in range(samples - 1):
        g0 = pts[k][1] - pts[k][0]
        g1 = pts[k + 1][1] - pts[k + 1][0]
        if g0 == 0 or g0 * g1 < 0:
            fps.append(_refine_fixed_point(P, starts[k], g0, starts[k + 1], g1, tol))
    return ReturnMapData(sorted(pts), fps, tol)


def _refine_fixed_point(P, r0, g0, r1, g1, tol) -> FixedPoint:
    # Illinois regula falsi on the start radius; the sign of g = P(a) - a at
    # the post-burn-in abscissa a(r) is monotone in r, and a(r) is reported
    side = 0
    for _ in range(60):
        if abs(r1 - r0) < 10 * tol or g1 == g0:
            break
        rm = r1 - g1 * (r1 - r0) / (g1 - g0)
        a, b = P(rm)
        gm = b - a
        if gm == 0:
            r0 = r1 = rm
            break
        if gm * g0 < 0:
            r1, g1 = rm, gm
            if side == -1:
                g0 /= 2
            side = -1
        else:
            r0, g0 = rm, gm
            if side == 1:
                g1 /= 2
            side = 1
    rs = r1 - g1 * (r1 - r0) / (g1 - g0) if g1 != g0 else 0.5 * (r0 + r1)
    r, _ = P(rs)
    dr = max(1e-4 * r, 1e3 * tol)
    a1, b1 = P(r - dr)
    a2, b2 = P(r + dr)
    slope = (b2 - b1) / (a2 - a1)
    return FixedPoint(r, slope)


# boundary probe ----------------------------------------------------------------------
@dataclass
class BoundaryProbe:
    verdict: str
    trends: list[float]
    detail: str = ""


def _min_trend(f: Field, x0: Vec, t_end: float, tol: float) -> float:
    """Slope of log(min_i x_i) after the first window, by least squares on window minima."""
    traj = integrate(f, x0, t_end, tol, positive=True)
    windows = 20
    mins = [math.inf] * windows
    for t, y in zip(traj.t, traj.y):
        k = min(windows - 1, int(windows * t / t_end))
        mins[k] = min(mins[k], min(y))
    xs, ys = [], []
    for k in range(1, windows):
        if math.isfinite(mins[k]):
            xs.append((k + 0.5) * t_end / windows)
            ys.append(math.log(mins[k]))
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def boundary_behavior(
    f: Field, eps: float, t_end: float = 400.0, tol: float = 1e-9, start: Sequence[float] | None = None
) -> BoundaryProbe:
    """Attraction of the boundary by trajectories started at distances eps and 2*eps.

    A start point with one coordinate set to the given distance is followed
    and the trend of min_i x_i decides: decreasing means the boundary
    attracts, increasing means it repels.  Both probes must agree.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1) so the probe starts inside the orthant")
    base = list(start) if start is not None else [1.2, 0.8, 1.0]
    trends = []
    for d in (eps, 2 * eps):
        x0 = list(base)
        x0[2] = d
        trends.append(_min_trend(f, tuple(x0), t_end, tol))
    if all(s < 0 for s in trends):
        verdict = "boundary-attracting"
    elif all(s > 0 for s in trends):
        verdict = "boundary-repelling"
    else:
        verdict = "inconclusive"
    return BoundaryProbe(verdict, trends, f"log-min slopes {trends[0]:.3e}, {trends[1]:.3e}")
