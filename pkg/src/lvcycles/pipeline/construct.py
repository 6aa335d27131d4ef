"""One construction attempt end to end, plus the seeded random search around it.

Each stage either returns data or raises; ``build`` turns the first failing
stage into a logged ``stage`` on the report instead of an exception, so a
search over many random matrices keeps going.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from ..exactnum import Interval, Sign, format_rational
from ..focal import FocalSet, PDCertificate, focal_values
from ..lvmodel import ClassTable, Classification, Competitive, LVSystem, competitive_check, classify, zeeman_invariants
from ..mpoly import RatFunc, parse_expr, parse_poly
from ..realroot import DEFAULT_WIDTH, IsolationCertificate, RootBox, mrealroot
from .perturb import DEFAULT_OUTER, DEFAULT_RHO, PerturbationError, PerturbedPoint, schedule_perturbation
from .verify import NumericVerification, verify_construction
from ..reduction import (
    BlockForm,
    block_diagonalize,
    center_manifold,
    eigencondition_solve,
    reduce_to_plane,
    transform_field,
)

log = logging.getLogger(__name__)

STAGES = ("mu", "block", "focal", "isolate", "select", "classify")
CANDIDATE_CLASSES = (26, 27, 28, 29)
CACHE_VERSION = 1


class StageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


# templates ------------------------------------------------------------------------
@dataclass
class SearchTemplate:
    """Matrix shape with fixed entries, parameter slots and ``"rand"`` slots.

    Random slots draw -p/q with p, q uniform in ``[lo, hi]``.
    """

    A: list[list[str]]
    params: list[str]
    solve_for: str = "μ"
    positive: list[str] = field(default_factory=list)
    target_class: int | None = 28
    rand_range: tuple[int, int] = (1, 64)
    T: list[list[str]] | None = None

    RAND = "rand"

    def __post_init__(self):
        for row in self.A:
            for e in row:
                if e == self.RAND:
                    continue
                r = parse_expr(e)
                if r.is_constant() and r.constant_value() >= 0:
                    raise ValueError(f"fixed entry {e!r} is not negative")
        if self.solve_for not in self.params:
            raise ValueError(f"solve_for {self.solve_for!r} is not a parameter")

    @classmethod
    def from_json(cls, source) -> "SearchTemplate":
        d = source if isinstance(source, dict) else json.loads(Path(source).read_text(encoding="utf-8"))
        return cls(
            A=[[str(e) for e in row] for row in d["A"]],
            params=list(d["params"]),
            solve_for=d.get("solve_for", "μ"),
            positive=list(d.get("positive", [])),
            target_class=d.get("target_class", 28),
            rand_range=tuple(d.get("rand_range", (1, 64))),
            T=d.get("T"),
        )

    def has_random_slots(self) -> bool:
        return any(e == self.RAND for row in self.A for e in row)

    def instance(self, rng: random.Random) -> LVSystem:
        lo, hi = self.rand_range
        rows = []
        for row in self.A:
            out = []
            for e in row:
                if e == self.RAND:
                    p, q = rng.randint(lo, hi), rng.randint(lo, hi)
                    out.append(RatFunc.const(-Fraction(p, q)))
                else:
                    out.append(parse_expr(e))
            rows.append(out)
        return LVSystem.from_entries(rows, self.params)


# report ---------------------------------------------------------------------------
@dataclass
class ConstructionReport:
    system: LVSystem
    solve_for: str
    mu: RatFunc | None = None
    block: BlockForm | None = None
    focal: FocalSet | None = None
    certificate: IsolationCertificate | None = None
    box_index: int | None = None
    competitive: Competitive | None = None
    classification: Classification | None = None
    pd_certified: bool = False
    failed_stage: str | None = None
    failure: str = ""
    timings: dict[str, float] = field(default_factory=dict)
    perturbed: object = None
    numeric: object = None

    @property
    def box(self) -> RootBox | None:
        if self.certificate is None or self.box_index is None:
            return None
        return self.certificate.boxes[self.box_index]

    @property
    def ok(self) -> bool:
        return self.failed_stage is None

    def reduced_system(self) -> LVSystem:
        return self.system.substitute({self.solve_for: self.mu})

    def four_cycle_candidate(self) -> bool:
        b = self.box
        if b is None or not self.pd_certified or self.competitive is not Competitive.CERTIFIED:
            return False
        if lv3_sign(b) is not Sign.NEG:
            return False
        cls = self.classification
        if cls is not None and cls.number in CANDIDATE_CLASSES:
            return True
        num = self.numeric
        return num is not None and getattr(num, "boundary", None) == "boundary-attracting"

    def three_cycles_scheduled(self) -> bool:
        """Only with alternating signs, the hierarchy and a positive definite V2 on record."""
        pp = self.perturbed
        return (
            pp is not None
            and pp.alternating()
            and pp.hierarchy()
            and pp.small_cycles == 3
            and self.focal is not None
            and self.focal.pd_certificate.certified_on is not None
        )

    def status(self) -> str:
        if not self.ok:
            return f"failed at {self.failed_stage}: {self.failure}"
        return "four-cycle candidate" if self.four_cycle_candidate() else "constructed"

    def summary(self) -> dict:
        out: dict = {"A": self.system.to_json()["A"], "params": list(self.system.params), "status": self.status()}
        if self.mu is not None:
            out[self.solve_for] = str(self.mu)
        if self.focal is not None:
            out["focal"] = focal_summary(self.focal)
        b = self.box
        if b is not None:
            out["box"] = {
                "λ": [format_rational(b.x.lo), format_rational(b.x.hi)],
                "n": [format_rational(b.y.lo), format_rational(b.y.hi)],
                "signs": [str(s) for s in b.signs],
            }
        if self.competitive is not None:
            out["competitive"] = str(self.competitive)
        if self.classification is not None:
            out["class"] = str(self.classification)
        pp = self.perturbed
        if pp is not None:
            out["perturbed"] = {k: format_rational(v) for k, v in pp.point().items()}
            out["perturbed_signs"] = [str(x) for x in pp.signs]
            out["three_small_cycles"] = self.three_cycles_scheduled()
        if self.numeric is not None:
            out["numeric"] = {
                "cycles": [[c.coarse.r, c.coarse.slope] for c in self.numeric.fixed_points],
                "boundary": self.numeric.boundary,
                "spectrum_ok": self.numeric.eig_ok,
            }
        return out


def lv3_sign(b: RootBox) -> Sign:
    """Sign of LV3 = num/den from the first two side signs of a box."""
    return b.signs[0] * b.signs[1]


def focal_summary(fs: FocalSet) -> list[dict]:
    return [
        {
            "num_degree": v.num.total_degree(),
            "num_terms": len(v.num),
            "den_degree": v.den.total_degree(),
            "den_terms": len(v.den),
        }
        for v in fs.LV
    ]


# cache ----------------------------------------------------------------------------
def _cache_key(kind: str, payload: dict) -> str:
    blob = json.dumps({"kind": kind, "v": CACHE_VERSION, **payload}, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:24]


def _cache_get(cache: Path | str | None, key: str):
    if cache is None:
        return None
    p = Path(cache) / f"{key}.json"
    if p.exists():
        return json.loads(p.read_text(encoding="utf-8"))
    return None


def _cache_put(cache: Path | str | None, key: str, data) -> None:
    if cache is None:
        return
    cache = Path(cache)
    cache.mkdir(parents=True, exist_ok=True)
    tmp = cache / f"{key}.json.tmp"
    tmp.write_text(json.dumps(data, ensure_ascii=False), encoding="utf-8")
    tmp.replace(cache / f"{key}.json")


def _focal_to_json(fs: FocalSet) -> dict:
    return {
        "LV": [[str(v.num), str(v.den)] for v in fs.LV],
        "normalization": fs.normalization,
        "measure": fs.measure,
        "omega_sq": str(fs.pd_certificate.omega_sq),
        "form": fs.pd_certificate.quadratic_form,
    }


def _focal_from_json(d: dict) -> FocalSet:
    LV = [RatFunc(parse_poly(n), parse_poly(m), normalized=True) for n, m in d["LV"]]
    cert = PDCertificate(d["form"], parse_expr(d["omega_sq"]))
    return FocalSet(LV, cert, d["normalization"], None, [], d["measure"])


# stages ---------------------------------------------------------------------------
def derive_mu(sys: LVSystem, solve_for: str = "μ") -> RatFunc:
    return eigencondition_solve(sys, solve_for)


def compute_focal(reduced: LVSystem, bf: BlockForm, cache: Path | None = None, order: int = 6) -> FocalSet:
    key = _cache_key("focal", {"A": reduced.to_json(), "T": [[str(e) for e in r] for r in bf.T], "order": order})
    hit = _cache_get(cache, key)
    if hit is not None:
        log.info("focal values loaded from cache %s", key)
        return _focal_from_json(hit)
    tf = transform_field(reduced, bf)
    cm = center_manifold(tf, order, lower=False)
    pl = reduce_to_plane(tf, cm, order + 1)
    fs = focal_values(pl, 3)
    _cache_put(cache, key, _focal_to_json(fs))
    return fs


def isolate_focal_roots(
    reduced: LVSystem, fs: FocalSet, width=DEFAULT_WIDTH, cache: Path | None = None
) -> IsolationCertificate:
    p, q = fs.LV1.num, fs.LV2.num
    side = [fs.LV3.num, fs.LV3.den, reduced.det()]
    key = _cache_key(
        "isolate",
        {"p": str(p), "q": str(q), "side": [str(s) for s in side], "width": format_rational(Fraction(width))},
    )
    hit = _cache_get(cache, key)
    if hit is not None:
        log.info("root certificate loaded from cache %s", key)
        return IsolationCertificate.from_json(hit)
    cert = mrealroot([p, q], ("λ", "n"), width, side, side_names=["num(LV3)", "den(LV3)", "det(A)"])
    _cache_put(cache, key, cert.to_json())
    return cert


def build(
    sys: LVSystem,
    solve_for: str = "μ",
    T=None,
    width=DEFAULT_WIDTH,
    cache: Path | None = None,
    table: ClassTable | None = None,
) -> ConstructionReport:
    """Run every stage on one matrix; the report records the first failure."""
    rep = ConstructionReport(sys, solve_for)
    table = table or ClassTable.load()
    stage = "mu"
    try:
        t0 = time.perf_counter()
        rep.mu = derive_mu(sys, solve_for)
        reduced = rep.reduced_system()
        rep.timings["mu"] = time.perf_counter() - t0

        stage = "block"
        t0 = time.perf_counter()
        rep.block = block_diagonalize(reduced, T)
        rep.timings["block"] = time.perf_counter() - t0

        stage = "focal"
        t0 = time.perf_counter()
        rep.focal = compute_focal(reduced, rep.block, cache)
        rep.timings["focal"] = time.perf_counter() - t0

        stage = "isolate"
        t0 = time.perf_counter()
        rep.certificate = isolate_focal_roots(reduced, rep.focal, width, cache)
        rep.timings["isolate"] = time.perf_counter() - t0

        stage = "select"
        _select_box(rep, reduced)

        stage = "classify"
        t0 = time.perf_counter()
        inv = zeeman_invariants(reduced, rep.box.box())
        rep.classification = classify(inv, table)
        rep.timings["classify"] = time.perf_counter() - t0
    except StageError as exc:
        rep.failed_stage, rep.failure = exc.stage, str(exc).split(": ", 1)[1]
    except Exception as exc:  # noqa: BLE001 - failures are data in a search
        rep.failed_stage, rep.failure = stage, f"{type(exc).__name__}: {exc}"
    if rep.failed_stage:
        log.info("attempt failed at %s: %s", rep.failed_stage, rep.failure)
    return rep


def _select_box(rep: ConstructionReport, reduced: LVSystem) -> None:
    """First certified box with LV3 < 0, a competitive matrix and a positive definite V2."""
    tried = []
    for i, b in enumerate(rep.certificate.boxes):
        if lv3_sign(b) is not Sign.NEG:
            tried.append(f"box {i}: LV3 sign {lv3_sign(b)}")
            continue
        box = b.box()
        comp = competitive_check(reduced, box)
        if comp is not Competitive.CERTIFIED:
            tried.append(f"box {i}: {comp}")
            continue
        if not rep.focal.pd_certificate.certify(box):
            tried.append(f"box {i}: quadratic form not certified positive definite")
            continue
        rep.box_index, rep.competitive, rep.pd_certified = i, comp, True
        return
    raise StageError("select", "no usable root box (" + "; ".join(tried or ["no boxes"]) + ")")


def perturb(rep: ConstructionReport, rho=DEFAULT_RHO, outer=DEFAULT_OUTER) -> PerturbedPoint:
    if rep.box is None or lv3_sign(rep.box) is not Sign.NEG:
        raise PerturbationError("report has no certified box with LV3 < 0")
    rep.perturbed = schedule_perturbation(
        rep.system, rep.focal, rep.mu, rep.block.omega_sq, rep.box.box(), rho, outer, solve_for=rep.solve_for
    )
    return rep.perturbed


def verify(rep: ConstructionReport, tol: float = 1e-10, **kw) -> NumericVerification:
    if rep.perturbed is None:
        raise ValueError("verification needs a perturbed point")
    rep.numeric = verify_construction(rep.system, rep.block, rep.perturbed.point(), rep.solve_for, tol=tol, **kw)
    return rep.numeric


# search ---------------------------------------------------------------------------
def _workers() -> int:
    try:
        return max(1, int(os.environ.get("LVCYCLES_WORKERS", "1")))
    except ValueError:
        return 1


def _attempt(args) -> ConstructionReport:
    template, seed, k, width, cache = args
    rng = random.Random(f"{seed}:{k}")
    sys = template.instance(rng)
    return build(sys, template.solve_for, template.T, width, cache)


def search(
    template: SearchTemplate,
    attempts: int,
    seed: int,
    width=DEFAULT_WIDTH,
    cache: Path | None = None,
) -> tuple[list[ConstructionReport], list[ConstructionReport]]:
    """Run ``attempts`` seeded attempts; returns (successes, failures).

    Successes hit the template's target class (or any cycle class when the
    target is None) and are de-duplicated by matrix.  Attempt k draws from
    ``random.Random(f"{seed}:{k}")`` so results do not depend on scheduling.
    """
    if attempts < 1:
        raise ValueError("attempts must be at least 1")
    jobs = [(template, seed, k, width, cache) for k in range(attempts)]
    n = _workers()
    if n > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=n) as ex:
            reports = list(ex.map(_attempt, jobs))
    else:
        reports = [_attempt(j) for j in jobs]
    wins, fails, seen = [], [], set()
    for rep in reports:
        hit = rep.ok and rep.classification is not None and (
            rep.classification.number == template.target_class
            if template.target_class is not None
            else rep.classification.number in CANDIDATE_CLASSES
        )
        if not hit:
            if rep.ok:
                rep.failed_stage, rep.failure = "classify", f"class {rep.classification} is not the target"
            fails.append(rep)
            continue
        key = json.dumps(rep.system.to_json(), sort_keys=True, ensure_ascii=False)
        if key not in seen:
            seen.add(key)
            wins.append(rep)
    return wins, fails


def paper_template() -> SearchTemplate:
    from ..lvmodel import data_path

    d = json.loads(data_path("class28_system.json").read_text(encoding="utf-8"))
    d["T"] = json.loads(data_path("class28_T.json").read_text(encoding="utf-8"))["T"]
    d["target_class"] = 28
    return SearchTemplate.from_json(d)
