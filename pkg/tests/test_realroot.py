import random
from fractions import Fraction

import pytest

from lvcycles.exactnum import Sign
from lvcycles.mpoly import MPoly, parse_expr
from lvcycles.mpoly.algorithms import SturmChain
from lvcycles.realroot import (
    CommonFactorError,
    RealRootError,
    isolate_univariate,
    mrealroot,
    refine_certificate,
    simplest_rational,
    triangularize,
)

V = ("λ", "n")
WIDE = (-4, 4)


def P(text):
    return parse_expr(text).num


def X(text):
    return parse_expr(text).num.with_vars(("x",))


def test_sqrt2_pair():
    p = X("x^2 - 2")
    roots = isolate_univariate(p, Fraction(1, 10**10))
    assert len(roots) == 2
    ch = SturmChain(p)
    for r, s in zip(roots, (-1, 1)):
        assert r.hi - r.lo <= Fraction(1, 10**10)
        assert ch.count(r.lo, r.hi) == 1 or r.lo == r.hi
        assert r.lo <= s * 2**0.5 <= r.hi
    assert roots[0].hi < roots[1].lo


def test_double_root_flagged():
    roots = isolate_univariate(X("(x - 1)^2"))
    assert len(roots) == 1
    assert roots[0].lo <= 1 <= roots[0].hi and roots[0].multiplicity == 2


def test_cubic_three_roots():
    roots = isolate_univariate(X("x^3 - x"))
    assert len(roots) == 3
    for r, want in zip(roots, (-1, 0, 1)):
        assert r.lo <= want <= r.hi


def test_random_factored_roots():
    rng = random.Random(2)
    for _ in range(10):
        rs = sorted({Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(5)})
        p = MPoly.const(1, ("x",))
        x = MPoly.var("x", ("x",))
        for r in rs:
            p = p * (x * r.denominator - MPoly.const(r.numerator, ("x",)))
        got = isolate_univariate(p, Fraction(1, 10**6))
        assert len(got) == len(rs)
        assert all(g.lo <= r <= g.hi for g, r in zip(got, rs))


def test_region_restricts():
    roots = isolate_univariate(X("x^3 - x"), region=(0, 4))
    # (lo, hi] excludes the root at 0
    assert [r.lo <= 1 <= r.hi for r in roots] == [True]


def test_zero_and_multivariate_rejected():
    with pytest.raises(RealRootError):
        isolate_univariate(MPoly.const(0, ("x",)))
    with pytest.raises(RealRootError):
        isolate_univariate(P("λ*n - 1"))


def test_simplest_rational():
    assert simplest_rational(Fraction(3, 10), Fraction(4, 10)) == Fraction(1, 3)
    assert simplest_rational(Fraction(1), Fraction(5, 2)) == 1


def test_triangularize_linear_case():
    (ch,) = triangularize([P("λ^2 - 2"), P("n - λ")])
    assert ch.r.with_vars(V) == P("λ^2 - 2")
    assert ch.s.with_vars(V) == P("n - λ")


def test_triangularize_double_contact():
    # substituting n = 2 - λ gives λ^2 - 2λ + 1
    (ch,) = triangularize([P("λ*n - 1"), P("λ + n - 2")])
    assert ch.r.with_vars(V) == P("λ - 1") and ch.mult == 2


def test_common_factor_reported():
    with pytest.raises(CommonFactorError) as ei:
        triangularize([P("(λ - n)*(λ + 1)"), P("(λ - n)*(n + 2)")])
    assert ei.value.factor.with_vars(V) in (P("λ - n"), P("n - λ"))


def test_origin_box():
    cert = mrealroot([P("λ"), P("n")], V, side=[P("λ + n + 1")], region=WIDE)
    assert len(cert.boxes) == 1
    b = cert.boxes[0]
    assert b.x.contains(0) and b.y.contains(0) and b.signs == [Sign.POS]


def test_two_boxes_with_signs():
    cert = mrealroot([P("λ^2 - 2"), P("n - 1")], V, side=[P("λ")], region=WIDE)
    assert [b.signs for b in cert.boxes] == [[Sign.NEG], [Sign.POS]]
    assert all(b.x.width <= cert.precision and b.y.width <= cert.precision for b in cert.boxes)


def test_default_region_positive():
    cert = mrealroot([P("λ^2 - 2"), P("n - 1")], V)
    assert len(cert.boxes) == 1 and cert.boxes[0].x.lo > 0


def test_side_zero_on_exact_root():
    cert = mrealroot([P("λ - 1"), P("n - 2")], V, side=[P("λ + n - 3")], region=WIDE)
    assert cert.boxes[0].signs == [Sign.ZERO]


def _random_system(rng):
    while True:
        p = P(f"λ^2 + {rng.randint(-3, 3)}*λ*n - {rng.randint(1, 5)} + n^2")
        q = P(f"n - {rng.randint(1, 3)}*λ^2 + {rng.randint(0, 3)}")
        try:
            cert = mrealroot([p, q], V, Fraction(1, 10**10), [P("λ - n")], region=WIDE)
        except RealRootError:
            continue
        if cert.boxes:
            return p, q, cert


def test_width_cross_check_and_monotone():
    rng = random.Random(9)
    for _ in range(3):
        p, q, coarse = _random_system(rng)
        fine = mrealroot([p, q], V, Fraction(1, 10**20), [P("λ - n")], region=WIDE)
        assert len(fine.boxes) == len(coarse.boxes)
        for b in fine.boxes:
            assert any(o.x.contains(b.x) and o.y.contains(b.y) and o.signs == b.signs for o in coarse.boxes)
        again = refine_certificate(coarse, [p, q], Fraction(1, 2**80), [P("λ - n")])
        assert [b.signs for b in again.boxes] == [b.signs for b in coarse.boxes]


def test_boxes_disjoint_and_counted():
    p, q = P("λ^2 + n^2 - 4"), P("λ*n - 1")
    cert = mrealroot([p, q], V, region=WIDE)
    assert len(cert.boxes) == 4
    for i, a in enumerate(cert.boxes):
        for b in cert.boxes[i + 1:]:
            assert a.x.hi < b.x.lo or b.x.hi < a.x.lo or a.y.hi < b.y.lo or b.y.hi < a.y.lo


def test_certificate_round_trip():
    from lvcycles.realroot import IsolationCertificate

    cert = mrealroot([P("λ^2 - 2"), P("n - 1")], V, side=[P("λ")], region=WIDE)
    again = IsolationCertificate.from_json(cert.to_json())
    assert again.to_text() == cert.to_text()
    assert "signs=[+]" in cert.to_text()
