"""Perturbation of a certified weak focus into three nested small-amplitude cycles.

Starting from a box where LV1 = LV2 = 0 and LV3 < 0, n is moved along the
curve LV1 = 0 until LV2 > 0, then λ is moved so LV1 < 0, then μ is moved off
the eigenvalue surface so the real part of the focus pair is positive.  All
three moves land on exact rationals, and every sign and ratio is decided on
exact values.

The step sizes come from the truncated displacement in u = y1^2,

    q(u) = 2 a + (LV1 u + LV2 u^2 + LV3 u^3) / W,

with a the real part and W the squared rotation speed: its three positive
roots are pushed to u3 = ``outer``, u2 = ρ u3 and u1 = ρ u2.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..exactnum import Interval, Sign, format_rational, sign_of
from ..focal import FocalSet, focus_real_part_interval, lv0
from ..lvmodel import LVSystem
from ..mpoly import MPoly, RatFunc
from ..mpoly.interval_eval import certify_sign
from ..realroot import isolate_univariate

log = logging.getLogger(__name__)

DEFAULT_RHO = Fraction(1, 1000)
DEFAULT_OUTER = Fraction(1, 100)


class PerturbationError(RuntimeError):
    pass


@dataclass
class PerturbedPoint:
    lam: Fraction
    n: Fraction
    mu: Fraction
    values: list[Fraction]
    rho: Fraction
    small_cycles: int
    real_part: Interval
    flags: list[str] = field(default_factory=list)
    trail: list[str] = field(default_factory=list)

    @property
    def signs(self) -> list[Sign]:
        return [sign_of(v) for v in self.values]

    @property
    def ratios(self) -> tuple[Fraction, Fraction]:
        """|LV0/LV1| and |LV1/LV2|."""
        v = self.values
        return abs(v[0] / v[1]), abs(v[1] / v[2])

    def alternating(self) -> bool:
        return [s.value for s in self.signs] == ["+", "-", "+", "-"]

    def hierarchy(self) -> bool:
        a, b = self.ratios
        return a <= self.rho and b <= self.rho

    def point(self) -> dict[str, Fraction]:
        return {"λ": self.lam, "n": self.n, "μ": self.mu}

    def to_text(self) -> str:
        v = self.values
        lines = [
            f"λ = {format_rational(self.lam)}",
            f"n = {format_rational(self.n)}",
            f"μ = {format_rational(self.mu)}",
        ]
        for k in range(4):
            lines.append(f"LV{k} = {float(v[k]):.6e} sign {self.signs[k]}")
        a, b = self.ratios
        lines.append(f"|LV0/LV1| = {float(a):.3e}  |LV1/LV2| = {float(b):.3e}  rho = {format_rational(self.rho)}")
        lines.append(f"real part in [{float(self.real_part.lo):.6e}, {float(self.real_part.hi):.6e}]")
        lines.append(f"positive roots of the truncated displacement: {self.small_cycles}")
        lines.extend(f"flag: {f}" for f in self.flags)
        return "\n".join(lines) + "\n"


def _dyadic(x: Fraction, scale: Fraction) -> Fraction:
    """A short dyadic rational within scale * 2^-20 of x."""
    k = 20
    while Fraction(1, 2**k) > abs(scale) / 2**20:
        k += 1
    d = 2**k
    return Fraction(round(x * d), d)


def _slope(f: RatFunc, point: Mapping[str, Fraction], var: str, h: Fraction) -> Fraction:
    p1, p2 = dict(point), dict(point)
    p1[var] -= h
    p2[var] += h
    return (f.eval(p2) - f.eval(p1)) / (2 * h)


def _curve_point(LV1: RatFunc, lam0: Fraction, n: Fraction, reach: Fraction) -> Interval:
    """The root of LV1(., n) nearest lam0 within lam0 ± reach, to 1e-40."""
    uni = LV1.num.subs({"n": n})
    roots = isolate_univariate(uni, Fraction(1, 10**40), (lam0 - reach, lam0 + reach))
    if not roots:
        raise PerturbationError(f"LV1 = 0 has no root near λ = {float(lam0)} at n = {float(n)}")
    return min(roots, key=lambda r: abs(r.mid - lam0))


def truncated_displacement(a: Fraction, values: Sequence[Fraction], W: Fraction) -> MPoly:
    u = MPoly.var("u", ("u",))
    q = MPoly.const(2 * a, ("u",))
    for k, v in enumerate(values, 1):
        q = q + u**k * (v / W)
    return q


def positive_root_count(q: MPoly) -> int:
    return len(isolate_univariate(q, Fraction(1, 10**6), (Fraction(0), Fraction(10**9))))


def schedule_perturbation(
    sys: LVSystem,
    focal: FocalSet | Sequence[RatFunc],
    mu_star: RatFunc,
    omega_sq: RatFunc,
    box: Mapping[str, Interval],
    rho=DEFAULT_RHO,
    outer=DEFAULT_OUTER,
    budget: int = 40,
    solve_for: str = "μ",
) -> PerturbedPoint:
    """Exact (λ, n, μ) near ``box`` with signs (+, −, +, −) for (LV0, LV1, LV2, LV3)."""
    LV = list(focal.LV if isinstance(focal, FocalSet) else focal)
    rho, outer = Fraction(rho), Fraction(outer)
    if rho <= 0 or outer <= 0:
        raise PerturbationError("rho and outer must be positive")
    flags = []
    if rho >= 1:
        flags.append("rho >= 1: the magnitude hierarchy is vacuous")
    trail: list[str] = []
    if certify_sign(LV[2], box, 256) is not Sign.NEG:
        raise PerturbationError("LV3 is not certified negative on the box")
    # short representatives of the box centre keep exact evaluation cheap
    lam0 = _dyadic(box["λ"].mid, max(box["λ"].width, Fraction(1, 10**30)))
    n0 = _dyadic(box["n"].mid, max(box["n"].width, Fraction(1, 10**30)))
    reach = Fraction(1, 2**10)
    root = {"λ": lam0, "n": n0}
    h = Fraction(1, 10**12)
    L3 = LV[2].eval(root)
    target2 = outer * abs(L3)

    # n: walk along LV1 = 0 until LV2 reaches its target with the right sign
    dL2 = _slope(LV[1], root, "n", h)
    step = target2 / abs(dL2)
    for attempt in range(budget):
        found = None
        for sgn in (1, -1):
            n1 = _dyadic(n0 + sgn * step, step)
            lam_iv = _curve_point(LV[0], lam0, n1, reach)
            s2 = certify_sign(LV[1], {"λ": lam_iv, "n": Interval.point(n1)}, 64)
            if s2 is Sign.POS:
                found = (n1, lam_iv)
                break
        if found:
            break
        step /= 2
    else:
        raise PerturbationError("no certified LV2 > 0 along LV1 = 0 within the step budget")
    n1, lam_iv = found
    lam_c = lam_iv.mid
    L2 = LV[1].eval({"λ": lam_c, "n": n1})
    trail.append(f"n: {float(n0)} -> {float(n1)} (LV2 = {float(L2):.3e})")

    # λ: open LV1 < 0 with |LV1| = rho * outer * LV2
    target1 = rho * outer * L2
    dL1 = _slope(LV[0], {"λ": lam_c, "n": n1}, "λ", h)
    dlam = -target1 / dL1
    for attempt in range(budget):
        lam1 = _dyadic(lam_c + dlam, dlam)
        pt = {"λ": lam1, "n": n1}
        L1, L2, L3 = (f.eval(pt) for f in LV)
        if L1 < 0 < L2 and L3 < 0 and abs(L1) <= rho * L2:
            break
        dlam /= 2
    else:
        raise PerturbationError("no λ step gives LV1 < 0 with the hierarchy")
    trail.append(f"λ: {float(lam_c)} -> {float(lam1)} (LV1 = {float(L1):.3e})")

    # μ: real part a = rho * u2 * |LV1| / (2 W) with u2 = rho * outer
    pt = {"λ": lam1, "n": n1}
    W = omega_sq.eval(pt)
    if W <= 0:
        raise PerturbationError("rotation speed squared is not positive at the perturbed point")
    mu0 = mu_star.eval(pt)
    s_lam = sys.substitute(pt)
    target0 = rho * rho * outer * abs(L1) / (2 * W)
    g = lv0(s_lam, mu0, h, solve_for).constant_value() / h
    dmu = target0 / g
    for attempt in range(budget):
        mu1 = _dyadic(mu0 + dmu, dmu)
        a = lv0(s_lam, mu0, mu1 - mu0, solve_for).constant_value()
        if 0 < a and abs(a) <= rho * abs(L1):
            break
        dmu /= 2
    else:
        raise PerturbationError("no μ step gives a positive real part with the hierarchy")
    trail.append(f"μ: {float(mu0)} -> {float(mu1)} (LV0 = {float(a):.3e})")

    A = s_lam.substitute({solve_for: mu1}).rational_matrix()
    real = focus_real_part_interval(A)
    if real.sign() is not Sign.POS:
        raise PerturbationError("the exact real part of the focus pair is not certified positive")
    count = positive_root_count(truncated_displacement(a, [L1, L2, L3], W))
    if count != 3:
        flags.append(f"truncated displacement has {count} positive roots, not 3")
    for t in trail:
        log.info(t)
    return PerturbedPoint(lam1, n1, mu1, [a, L1, L2, L3], rho, count, real, flags, trail)


def root_signs(focal: FocalSet | Sequence[RatFunc], box: Mapping[str, Interval]) -> list[Sign]:
    """Signs of LV1..LV3 on the root box without refinement; LV1, LV2 straddle zero there."""
    from ..mpoly.interval_eval import eval_interval

    LV = list(focal.LV if isinstance(focal, FocalSet) else focal)
    out = []
    for f in LV:
        num = eval_interval(f.num, box)
        den = eval_interval(f.den, box)
        out.append(Sign.UNKNOWN if num.contains(0) or den.contains(0) else (num / den).sign())
    return out
