"""Files written for constructed systems.

``systems.txt`` is an append-only ledger with one line per system.  A line
that is already present is not written again, so re-running a fixed-seed
search leaves the ledger byte-identical.  Per-system files go under a
directory named by a short hash of the matrix.
"""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable

from ..exactnum import format_rational
from .construct import ConstructionReport

LEDGER = "systems.txt"


def ledger_line(rep: ConstructionReport) -> str:
    A = rep.system.to_json()["A"]
    mat = "[" + "; ".join(", ".join(row) for row in A) + "]"
    cls = rep.classification.number if rep.classification is not None else None
    parts = [f"A={mat}", f"class={cls}", f"status={rep.status()}"]
    pp = rep.perturbed
    if pp is not None:
        parts.append("point=" + ", ".join(f"{k}={format_rational(v)}" for k, v in pp.point().items()))
    return " | ".join(parts)


def system_id(rep: ConstructionReport) -> str:
    blob = json.dumps(rep.system.to_json(), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def certificate_text(rep: ConstructionReport) -> str:
    out = [f"system {system_id(rep)}", f"status: {rep.status()}"]
    out.append("A = " + json.dumps(rep.system.to_json()["A"], ensure_ascii=False))
    if rep.mu is not None:
        out.append(f"{rep.solve_for} = {rep.mu}")
    if rep.block is not None:
        out.append(f"omega^2 = {rep.block.omega_sq}")
        out.append(f"real eigenvalue = {rep.block.lam_real}")
    if rep.focal is not None:
        for k, v in enumerate(rep.focal.LV, 1):
            out.append(
                f"LV{k}: numerator degree {v.num.total_degree()} with {len(v.num)} terms, "
                f"denominator degree {v.den.total_degree()} with {len(v.den)} terms"
            )
        out.append(f"V2 = {rep.focal.pd_certificate.quadratic_form} certified: {rep.pd_certified}")
    if rep.certificate is not None:
        out.append(rep.certificate.to_text().rstrip("\n"))
        if rep.box_index is not None:
            out.append(f"selected box: {rep.box_index}")
    if rep.competitive is not None:
        out.append(f"competitive: {rep.competitive}")
    if rep.classification is not None:
        out.append(f"class: {rep.classification}")
    if rep.perturbed is not None:
        out.append(rep.perturbed.to_text().rstrip("\n"))
        out.append(f"three small-amplitude cycles scheduled: {rep.three_cycles_scheduled()}")
    if rep.numeric is not None:
        out.append(rep.numeric.to_text().rstrip("\n"))
    return "\n".join(out) + "\n"


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def report_emit(reports: ConstructionReport | Iterable[ConstructionReport], dir, trajectory=None) -> list[Path]:
    """Append ledger lines and write per-system files; returns the paths touched.

    ``trajectory`` is an optional list of (t, x1, x2, x3) rows written for
    every report that has one to go with it.
    """
    if isinstance(reports, ConstructionReport):
        reports = [reports]
    reports = list(reports)
    if not reports:
        return []
    root = Path(dir)
    root.mkdir(parents=True, exist_ok=True)
    ledger = root / LEDGER
    have = set(ledger.read_text(encoding="utf-8").splitlines()) if ledger.exists() else set()
    written: list[Path] = []
    new = []
    for rep in reports:
        line = ledger_line(rep)
        if line not in have:
            have.add(line)
            new.append(line)
        sub = root / system_id(rep)
        sub.mkdir(exist_ok=True)
        cert = sub / "certificate.txt"
        cert.write_text(certificate_text(rep), encoding="utf-8")
        written.append(cert)
        if rep.numeric is not None and rep.numeric.return_map is not None:
            p = sub / "return_map.csv"
            _write_csv(p, ["r", "P(r)"], rep.numeric.return_map.samples)
            written.append(p)
        if trajectory is not None:
            p = sub / "trajectory.csv"
            _write_csv(p, ["t", "x1", "x2", "x3"], trajectory)
            written.append(p)
    if new:
        with ledger.open("a", encoding="utf-8") as fh:
            for line in new:
                fh.write(line + "\n")
    written.insert(0, ledger)
    return written
