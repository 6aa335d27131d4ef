import json

import pytest

from lvcycles.cli import main
from lvcycles.mpoly import parse_expr
from lvcycles.pipeline.report import LEDGER

from conftest import MU_TEXT


def run(capsys, *argv):
    assert main(list(argv)) == 0
    return capsys.readouterr().out


def test_derive_mu(capsys):
    out = run(capsys, "derive-mu")
    assert out == "μ = (-607835112*λ*n + 7773334823)/(4864016448*n)\n"
    assert parse_expr(out.split("=", 1)[1]) == parse_expr(MU_TEXT)


def test_derive_mu_from_file(capsys, tmp_path):
    f = tmp_path / "sys.json"
    f.write_text(json.dumps({"A": [["-1", "-2", "-λ"], ["-1", "-1", "-μ"], ["-1", "-1", "-1"]], "params": ["λ", "μ"]}))
    out = run(capsys, "derive-mu", "--system", str(f))
    assert out.startswith("μ = ")


def test_focal_values(capsys, construction, cache_dir):
    out = run(capsys, "focal-values", "--cache", str(cache_dir))
    assert out.splitlines() == [
        "LV1: numerator degree 8 (12 terms), denominator degree 8 (5 terms)",
        "LV2: numerator degree 26 (63 terms), denominator degree 28 (15 terms)",
        "LV3: numerator degree 50 (169 terms), denominator degree " + out.splitlines()[2].split("denominator degree ")[1],
    ]


def test_isolate_output_reproducible(capsys, construction, cache_dir):
    a = run(capsys, "isolate", "--cache", str(cache_dir))
    b = run(capsys, "isolate", "--cache", str(cache_dir))
    assert a == b and "signs=[-,+,-]" in a


def test_classify(capsys, construction, cache_dir):
    out = run(capsys, "classify", "--cache", str(cache_dir))
    assert "competitive: certified" in out and "28" in out


def test_report_files(capsys, construction, cache_dir, tmp_path):
    out = run(capsys, "report", "--cache", str(cache_dir), "--out", str(tmp_path))
    assert str(tmp_path / LEDGER) in out
    assert "class=28" in (tmp_path / LEDGER).read_text(encoding="utf-8")


def test_search_attempts_validated():
    with pytest.raises(SystemExit):
        main(["search", "--template", "x.json", "--attempts", "0", "--seed", "1"])


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
