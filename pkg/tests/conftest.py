import json
from fractions import Fraction

import pytest

from lvcycles.lvmodel import data_path, paper_system
from lvcycles.mpoly import parse_expr

MU_TEXT = "-(607835112*λ*n - 7773334823)/(4864016448*n)"

LAMBDA_PRINTED = (
    Fraction(48083713211257141381227, 9444732965739290427392),
    Fraction(48083713211499877152963, 9444732965739290427392),
)
N_PRINTED = (
    Fraction(
        18617876387518095278417715070016705816645420386546066217507077513538675027145,
        57896044618658097711785492504343953926634992332820282019728792003956564819968,
    ),
    Fraction(
        9308938193759047639208857535008352908322710193273033108753538756769337513573,
        28948022309329048855892746252171976963317496166410141009864396001978282409984,
    ),
)

# the printed LV1 numerator, kept as its two factors and the constant -684499
F1_LINEAR = "71175864*n*λ - 30452821"
F1_CUBIC = (
    "1867427763509790559220459722237440*λ^3*n^3 - 8066558192490463098597559057769472*λ^2*n^3"
    " - 9284198345879360722318571367478464*λ^2*n^2 + 9630923381872490306204845292994048*λ*n^3"
    " + 18212185214244398672238510809517312*λ*n^2 + 5385169712442285368618043473601672*n*λ"
    " + 37509227186769280161709353461815488*n^2 + 1036086857152915319628573370644784*n"
    " - 604462354449619944145534311192809"
)
F1_CONSTANT = -684499

# acceptance lines collected by tests/test_acceptance.py
AC_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(AC_RESULTS, key=lambda k: int(k.split("-")[1])):
        ok, detail = AC_RESULTS[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.fixture(scope="session")
def reference_T():
    return json.loads(data_path("class28_T.json").read_text(encoding="utf-8"))["T"]


@pytest.fixture(scope="session")
def reference_system():
    return paper_system()


@pytest.fixture(scope="session")
def reduced_system(reference_system):
    return reference_system.substitute({"μ": parse_expr(MU_TEXT)})


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("lvcache")


@pytest.fixture(scope="session")
def construction(reference_system, reference_T, cache_dir):
    """Full exact construction on the class-28 system, computed once per session."""
    from lvcycles.pipeline.construct import build

    rep = build(reference_system, "μ", reference_T, cache=cache_dir)
    assert rep.ok, rep.failure
    return rep


@pytest.fixture(scope="session")
def perturbed(construction):
    from lvcycles.pipeline.construct import perturb

    return perturb(construction)


@pytest.fixture(scope="session")
def numeric(construction, perturbed):
    from lvcycles.pipeline.construct import verify

    return verify(construction, 1e-10)
