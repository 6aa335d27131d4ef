import itertools
import random
from fractions import Fraction

import pytest

from lvcycles.exactnum import Interval, Sign
from lvcycles.lvmodel import (
    ClassTable,
    Competitive,
    LVModelError,
    LVSystem,
    alpha_invariant,
    axial_equilibrium,
    beta_by_substitution,
    beta_invariant,
    classify,
    competitive_check,
    format_pattern,
    planar_equilibrium,
    relabel_pattern,
    zeeman_invariants,
)
from lvcycles.lvmodel import ClassificationError
from lvcycles.mpoly import RatFunc


def random_system(rng):
    return LVSystem.from_entries([[-Fraction(rng.randint(1, 64), rng.randint(1, 64)) for _ in range(3)] for _ in range(3)])


def may_leonard(a, b):
    return LVSystem.from_entries([[-1, -a, -b], [-b, -1, -a], [-a, -b, -1]])


def test_field_vanishes_at_unit_point(reference_system):
    rng = random.Random(0)
    for s in [reference_system] + [random_system(rng) for _ in range(5)]:
        one = {v: RatFunc.const(1) for v in ("x1", "x2", "x3")}
        for comp in s.vector_field():
            assert comp.subs(one).is_zero()


def test_axial_equilibrium():
    s = LVSystem.from_entries([[-1, 0, 0], [-1, -2, -3], [-2, -1, -5]])
    r = axial_equilibrium(s, 0)
    assert [x.constant_value() for x in r] == [1, 0, 0]
    with pytest.raises(LVModelError):
        axial_equilibrium(LVSystem.from_entries([[0, -1, -1], [-1, -1, -1], [-1, -1, -1]]), 0)


def test_axial_equilibrium_positive_on_root_box(construction):
    red = construction.reduced_system()
    box = construction.box.box()
    from lvcycles.mpoly.interval_eval import certify_sign

    assert certify_sign(red.b()[0], box) is Sign.NEG
    assert certify_sign(red.A[0][0], box) is Sign.NEG
    assert certify_sign(axial_equilibrium(red, 0)[0], box) is Sign.POS


def test_planar_equilibrium():
    s = LVSystem.from_entries([[-2, -1, 0], [-1, -2, 0], [-1, -1, -1]])
    q = planar_equilibrium(s, 2)
    assert [x.constant_value() for x in q] == [1, 1, 0]
    with pytest.raises(LVModelError):
        planar_equilibrium(LVSystem.from_entries([[-1, -1, -1], [-2, -2, -1], [-1, -1, -1]]), 2)


def test_face_equilibria_positive_on_root_box(construction):
    inv = zeeman_invariants(construction.reduced_system(), construction.box.box())
    # only the face x1 = 0 meets the closed orthant in a positive point here
    assert inv.face_positive[0] is True


def test_beta_two_ways():
    rng = random.Random(4)
    for _ in range(5):
        s = random_system(rng)
        for k in range(3):
            assert beta_invariant(s, k) == beta_by_substitution(s, k)


def test_alpha_formula():
    s = LVSystem.from_entries([[-1, -2, -3], [-4, -5, -6], [-7, -8, -10]])
    b = s.b()
    for i, j in itertools.permutations(range(3), 2):
        want = b[i].constant_value() * s.A[j][i].constant_value() / s.A[i][i].constant_value() - b[j].constant_value()
        assert alpha_invariant(s, i, j).constant_value() == want


def test_relabeling_permutes_invariants():
    rng = random.Random(9)
    s = random_system(rng)
    perm = (2, 0, 1)
    inv_perm = [perm.index(t) for t in range(3)]
    A2 = [[s.A[inv_perm[i]][inv_perm[j]] for j in range(3)] for i in range(3)]
    s2 = LVSystem.from_entries(A2)
    for i, j in itertools.permutations(range(3), 2):
        assert alpha_invariant(s2, perm[i], perm[j]) == alpha_invariant(s, i, j)


def test_diagonally_dominant_signs_certified():
    s = LVSystem.from_entries([[-5, -1, -2], [-1, -6, -1], [-2, -1, -7]])
    inv = zeeman_invariants(s, {})
    assert not inv.indeterminate()
    # oracle: direct rational evaluation of each alpha
    for (i, j), sg in inv.R.items():
        v = -alpha_invariant(s, i, j).constant_value()
        assert sg is (Sign.POS if v > 0 else Sign.NEG)


def test_classify_reference_pattern(construction):
    inv = zeeman_invariants(construction.reduced_system(), construction.box.box())
    cls = classify(inv, ClassTable.load())
    assert cls.number == 28
    rp = cls.relabeled_pattern
    assert rp["R12"] == rp["Q33"] == rp["R21"] == -rp["R23"] == rp["R32"] == -rp["R31"] == rp["R13"] == 1


def test_classify_not_in_table():
    s = LVSystem.from_entries([[-5, -1, -2], [-1, -6, -1], [-2, -1, -7]])
    c = classify(zeeman_invariants(s, {}), ClassTable.load())
    assert c.number is None and str(c).startswith("not in table")


def test_classify_may_leonard_is_27():
    # α + β > 2 with α < 1 < β: the cyclic heteroclinic pattern, built to satisfy the class-27 entry
    c = classify(zeeman_invariants(may_leonard(Fraction(3, 2), Fraction(3, 10)), {}), ClassTable.load())
    assert c.number == 27


def test_classify_relabel_consistency():
    table = ClassTable.load()
    s = may_leonard(Fraction(3, 2), Fraction(3, 10))
    base = classify(zeeman_invariants(s, {}), table)
    for perm in itertools.permutations(range(3)):
        inv_perm = [perm.index(t) for t in range(3)]
        s2 = LVSystem.from_entries([[s.A[inv_perm[i]][inv_perm[j]] for j in range(3)] for i in range(3)])
        pat = zeeman_invariants(s2, {}).pattern()
        assert pat == relabel_pattern(zeeman_invariants(s, {}).pattern(), perm)
        assert classify(zeeman_invariants(s2, {}), table).number == base.number


def test_classify_refuses_indeterminate():
    s = LVSystem.from_entries([["-λ", -1, -1], [-1, -1, -1], [-1, -1, -2]], ["λ"])
    inv = zeeman_invariants(s, {"λ": Interval(Fraction(1, 2), 2)})
    assert inv.indeterminate()
    with pytest.raises(ClassificationError):
        classify(inv, ClassTable.load())


def test_table_parse_errors():
    with pytest.raises(LVModelError):
        ClassTable.parse("class=3 R12=+1")
    t = ClassTable.parse("class=5 pattern R12=+1 R13=* R21=* R23=* R31=* R32=* Q11=* Q22=* Q33=*\n")
    assert t.lookup({"R12": 1}) == 5


def test_competitive_check():
    assert competitive_check(LVSystem.from_entries([[-1] * 3] * 3), {}) is Competitive.CERTIFIED
    s = LVSystem.from_entries([["-λ", -1, -1], [-1, -1, -1], [-1, -1, -1]], ["λ"])
    assert competitive_check(s, {"λ": Interval(-1, 1)}) is Competitive.INDETERMINATE
    assert competitive_check(s, {"λ": Interval(-2, -1)}) is Competitive.NOT


def test_competitive_on_root_box(construction):
    assert competitive_check(construction.reduced_system(), construction.box.box()) is Competitive.CERTIFIED


def test_sign_stable_under_refinement(construction):
    red = construction.reduced_system()
    box = construction.box.box()
    first = zeeman_invariants(red, box).R
    half = {"λ": box["λ"].bisect()[0], "n": box["n"].bisect()[1]}
    assert zeeman_invariants(red, half).R == first


def test_pattern_text():
    assert format_pattern({"R12": 1, "Q11": None}).startswith("R12=+1 R13=*")
