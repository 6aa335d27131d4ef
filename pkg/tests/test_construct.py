import json

import pytest

from lvcycles.exactnum import Sign
from lvcycles.lvmodel import Competitive
from lvcycles.pipeline.construct import SearchTemplate, lv3_sign, paper_template, search

CHEAP = {
    "A": [["rand", "rand", "-1"], ["rand", "rand", "-μ"], ["-1", "rand", "rand"]],
    "params": ["μ"],
    "rand_range": [1, 9],
}


def test_reference_build(construction):
    assert construction.classification.number == 28
    assert construction.competitive is Competitive.CERTIFIED
    assert construction.pd_certified
    assert lv3_sign(construction.box) is Sign.NEG
    assert construction.four_cycle_candidate()
    assert construction.status() == "four-cycle candidate"


def test_paper_template_search(construction, cache_dir):
    wins, fails = search(paper_template(), 2, seed=1, cache=cache_dir)
    # a template without random slots yields one system, de-duplicated
    assert len(wins) == 1 and not fails
    assert wins[0].classification.number == 28


def test_build_accepts_string_cache(construction, cache_dir):
    from lvcycles.pipeline.construct import build

    rep = build(construction.system, "μ", paper_template().T, cache=str(cache_dir))
    assert rep.ok and rep.box_index == construction.box_index


def test_search_deterministic(cache_dir):
    t = SearchTemplate.from_json(CHEAP)
    a = search(t, 4, seed=3)
    b = search(t, 4, seed=3)
    dump = lambda res: [json.dumps(r.summary(), sort_keys=True, ensure_ascii=False) for part in res for r in part]
    assert dump(a) == dump(b)
    assert all(r.failed_stage for r in a[1])


def test_failures_name_a_stage():
    wins, fails = search(SearchTemplate.from_json(CHEAP), 4, seed=1)
    assert not wins and len(fails) == 4
    assert {r.failed_stage for r in fails} <= {"mu", "block", "focal", "isolate", "select", "classify"}
    assert all(r.status().startswith("failed at") for r in fails)


def test_attempts_validated():
    with pytest.raises(ValueError):
        search(SearchTemplate.from_json(CHEAP), 0, seed=1)


def test_template_validation():
    with pytest.raises(ValueError):
        SearchTemplate.from_json({"A": [["1", "-1", "-1"], ["-1", "-1", "-μ"], ["-1", "-1", "-1"]], "params": ["μ"]})
    with pytest.raises(ValueError):
        SearchTemplate.from_json({"A": CHEAP["A"], "params": ["λ"]})


def test_instance_draws_negative_rationals():
    import random

    t = SearchTemplate.from_json(CHEAP)
    assert t.has_random_slots() and not paper_template().has_random_slots()
    s = t.instance(random.Random(0))
    entries = s.to_json()["A"]
    assert entries[0][2] == "-1" and entries[1][2] == "-μ"
    assert all(e.startswith("-") for row in entries for e in row)


def test_summary_fields(construction, perturbed):
    s = construction.summary()
    assert s["box"]["signs"] == ["-", "+", "-"]
    assert s["three_small_cycles"] is True
    assert [d["num_degree"] for d in s["focal"]] == [8, 26, 50]
