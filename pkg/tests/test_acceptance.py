"""One check per acceptance criterion; each records a PASS/FAIL line for the summary."""
import math
import random
import time
from fractions import Fraction

from lvcycles.cli import main
from lvcycles.exactnum import Interval, Sign
from lvcycles.focal import focal_values
from lvcycles.lvmodel import Competitive
from lvcycles.mpoly import RatFunc, parse_expr, parse_poly, poly_gcd
from lvcycles.mpoly.interval_eval import certify_sign
from lvcycles.pipeline.numeric import Section, integrate, return_map
from lvcycles.pipeline.perturb import schedule_perturbation
from lvcycles.realroot import refine_certificate
from lvcycles.reduction import block_diagonalize, center_manifold

from conftest import AC_RESULTS, F1_CONSTANT, F1_CUBIC, F1_LINEAR, LAMBDA_PRINTED, MU_TEXT, N_PRINTED
from test_focal import radial, random_field
from test_reduction import _hand_field


def record(key, ok, detail):
    AC_RESULTS[key] = (bool(ok), detail)
    assert ok, f"{key}: {detail}"


def meets(iv: Interval, lo, hi) -> bool:
    return iv.lo <= hi and lo <= iv.hi


def inside(iv: Interval, lo, hi) -> bool:
    return lo <= iv.lo and iv.hi <= hi


def test_ac1_mu_formula(capsys):
    t = time.perf_counter()
    assert main(["derive-mu"]) == 0
    out = capsys.readouterr().out.strip()
    dt = time.perf_counter() - t
    got = out.split("=", 1)[1].strip()
    canonical = str(parse_expr(MU_TEXT))
    record("AC-1", got == canonical and dt < 1, f"μ = {got} (canonical form of the printed formula: {canonical}), {dt:.2f} s")


def test_ac2_block_form(reduced_system, reference_T):
    t = time.perf_counter()
    bf = block_diagonalize(reduced_system, reference_T)
    dt = time.perf_counter() - t
    C = bf.C
    want = {
        "c11": (C[0][0], "1014026/684499"),
        "c21": (C[1][0], "-8896983*n/684499"),
        "c12": (C[0][1], "(416062526328888*λ*n + 384134040047899)/(3329414394639552*n)"),
        "λ_real": (bf.lam_real, "-11885/888"),
    }
    bad = [k for k, (v, w) in want.items() if v != parse_expr(w)]
    if C[1][1] != -C[0][0]:
        bad.append("c22")
    record("AC-2", not bad and dt < 10, f"mismatched: {bad or 'none'}, {dt:.2f} s")


def test_ac3_lv1_matches_printed_factorization(construction):
    t = time.perf_counter()
    N = construction.focal.LV1.num
    lin = parse_poly(F1_LINEAR).with_vars(N.vars)
    f1 = (lin * parse_poly(F1_CUBIC).with_vars(N.vars)).scale(F1_CONSTANT)
    g = poly_gcd(N, f1)
    ratio = f1.try_divexact(N)
    divides = N.try_divexact(lin) is not None
    const_ok = ratio is not None and ratio.is_constant() and ratio.constant_value() > 0
    dt = time.perf_counter() - t
    detail = (
        f"deg gcd = {g.total_degree()} (printed degree {f1.total_degree()}), "
        f"printed/computed = {ratio.constant_value() if const_ok else ratio}, linear factor divides: {divides}, {dt:.2f} s"
    )
    record("AC-3", g.total_degree() == f1.total_degree() and const_ok and divides, detail)


def test_ac4_degrees_and_terms(construction):
    LV2, LV3 = construction.focal.LV2, construction.focal.LV3
    d2, d3 = LV2.num.total_degree(), LV3.num.total_degree()
    t2, t3 = len(LV2.num), len(LV3.num)
    detail = f"LV2 numerator degree {d2} with {t2} terms (63 expected), LV3 numerator degree {d3} with {t3} terms (169 expected)"
    record("AC-4", d2 == 26 and d3 == 50 and (t2, t3) == (63, 169), detail)


def test_ac5_root_certificate(construction):
    cert = construction.certificate
    hits = [
        (i, b) for i, b in enumerate(cert.boxes) if meets(b.x, *LAMBDA_PRINTED) and meets(b.y, *N_PRINTED)
    ]
    sides = [construction.focal.LV3.num, construction.focal.LV3.den, construction.reduced_system().det()]
    lv = [construction.focal.LV1.num, construction.focal.LV2.num]
    t = time.perf_counter()
    fine = refine_certificate(cert, lv, Fraction(1, 2**96), sides)
    dt = time.perf_counter() - t
    parts = [f"precision {cert.precision}, {len(cert.boxes)} boxes"]
    ok = bool(hits)
    if hits:
        i, b = hits[0]
        signs = [s.value for s in b.signs]
        parts.append(f"box {i} meets the printed intervals with signs [{','.join(signs)}] (printed [+,-,-])")
        ok = ok and signs == ["+", "-", "-"]
        fb = min(fine.boxes, key=lambda c: abs(c.x.mid - b.x.mid) + abs(c.y.mid - b.y.mid))
        lam_in, n_in = inside(fb.x, *LAMBDA_PRINTED), inside(fb.y, *N_PRINTED)
        parts.append(
            f"at 2^-96 λ inside: {lam_in}, n inside: {n_in} "
            f"(printed n width {float(N_PRINTED[1] - N_PRINTED[0]):.2e}, box n width {float(fb.y.width):.2e}), {dt:.1f} s"
        )
        ok = ok and lam_in and n_in
    else:
        parts.append("no box meets the printed intervals")
    record("AC-5", ok, "; ".join(parts))


def test_ac6_competitive_and_class(construction):
    red = construction.reduced_system()
    box = construction.box.box()
    entry_signs = [certify_sign(e, box, 256) for row in red.A for e in row]
    mu_sign = certify_sign(construction.mu, box, 256)
    cls = construction.classification
    want = {"R12": 1, "Q33": 1, "R21": 1, "R23": -1, "R32": 1, "R31": -1, "R13": 1}
    rp = cls.relabeled_pattern or {}
    pattern_ok = all(rp.get(k) == v for k, v in want.items())
    ok = (
        construction.competitive is Competitive.CERTIFIED
        and all(s is Sign.NEG for s in entry_signs)
        and mu_sign is Sign.POS
        and cls.number == 28
        and pattern_ok
    )
    detail = f"competitive {construction.competitive.value}, μ {mu_sign.value}, class {cls.number} after relabeling {cls.permutation}, pattern match {pattern_ok}"
    record("AC-6", ok, detail)


def test_ac7_focal_oracles():
    t = time.perf_counter()
    zero = [v.constant_value() for v in focal_values(radial(1, []), 3).LV] == [0, 0, 0]
    cubic = focal_values(radial(1, [1]), 1).LV1.constant_value() > 0
    rng = random.Random(7)
    reversible = all(
        [v.constant_value() for v in focal_values(random_field(rng, True), 3).LV] == [0, 0, 0] for _ in range(20)
    )
    cm = center_manifold(_hand_field(), 6)
    h2 = [Fraction(cm.p(2, k)) for k in (2, 1, 0)]
    hand = h2 == [Fraction(3, 5), Fraction(2, 5), Fraction(2, 5)]
    dt = time.perf_counter() - t
    detail = f"linear center {zero}, r' = r^3 positive {cubic}, 20 reversible fields {reversible}, h2 = {[str(x) for x in h2]}, {dt:.2f} s"
    record("AC-7", zero and cubic and reversible and hand and dt < 60, detail)


def test_ac8_perturbation(capsys, construction, perturbed, cache_dir):
    outs = []
    for _ in range(2):
        assert main(["perturb", "--rho", "1/1000", "--cache", str(cache_dir)]) == 0
        outs.append(capsys.readouterr().out)
    rep = construction
    again = schedule_perturbation(rep.system, rep.focal, rep.mu, rep.block.omega_sq, rep.box.box(), Fraction(1, 1000), solve_for=rep.solve_for)
    signs = [s.value for s in perturbed.signs]
    deterministic = outs[0] == outs[1] and again.point() == perturbed.point()
    a, b = perturbed.ratios
    ok = signs == ["+", "-", "+", "-"] and perturbed.hierarchy() and deterministic and perturbed.real_part.sign() is Sign.POS
    detail = f"signs ({','.join(signs)}), |LV0/LV1| = {float(a):.2e}, |LV1/LV2| = {float(b):.2e}, deterministic {deterministic}"
    record("AC-8", ok, detail)


def test_ac9_numeric(numeric):
    fps = numeric.fixed_points
    scaled = all(c.scaled_ok for c in fps)
    literal = all(c.literal_ok for c in fps)
    cyc = ", ".join(f"r = {c.coarse.r:.6g} shift {c.shift:.2e} (10 tol = 1e-9, slope-scaled bound {c.allowed:.2e})" for c in fps)
    ok = bool(fps) and scaled and numeric.boundary == "boundary-attracting" and numeric.eig_ok
    detail = f"{len(fps)} fixed point(s): {cyc or 'none'}; within 10 tol: {literal}; boundary {numeric.boundary}"
    record("AC-9", ok, detail)


def test_ac10_integrator():
    t = time.perf_counter()

    def harmonic(_, v):
        return (-v[1], v[0], -v[2])

    tr = integrate(harmonic, (1.0, 0.0, 0.0), 100.0, 1e-10)
    drift = max(abs(x * x + y * y - 1.0) for x, y, _ in tr.y)

    def hopf(_, v):
        x, y, z = v
        g = 1.0 - (x * x + y * y)
        return (-y + x * g, x + y * g, -z)

    I3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    sec = Section(I3, I3, 1, (0.0, 0.0, 0.0))
    (fp,) = return_map(hopf, sec, (0.3, 1.7), 8, 1e-10, 20.0, burn_in=0, positive=False).fixed_points
    slope_err = abs(fp.slope - math.exp(-4 * math.pi))
    dt = time.perf_counter() - t
    ok = drift <= 1e-8 and abs(fp.r - 1) < 1e-8 and slope_err < 1e-4 and dt < 60
    record("AC-10", ok, f"energy drift {drift:.2e}, r* = {fp.r:.12f}, slope error {slope_err:.2e}, {dt:.2f} s")
