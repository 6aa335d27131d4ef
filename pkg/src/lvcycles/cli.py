"""Command line entry points.

Every subcommand reads one system file (JSON with Rational strings) and runs
the stages it needs; ``--cache`` keeps the expensive ones between runs.
Without ``--system`` the bundled class-28 system and its transformation are
used.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .exactnum import parse_rational
from .lvmodel import ClassTable, LVSystem, classify, competitive_check, data_path, zeeman_invariants
from .pipeline import construct
from .pipeline.perturb import DEFAULT_RHO
from .pipeline.report import certificate_text, report_emit
from .realroot import mrealroot
from .reduction import block_diagonalize, center_manifold, transform_field

SIDE_CHOICES = ("num-LV3", "den-LV3", "det")


def _load_system(args):
    if args.system:
        d = json.loads(Path(args.system).read_text(encoding="utf-8"))
    else:
        d = json.loads(data_path("class28_system.json").read_text(encoding="utf-8"))
        d["T"] = json.loads(data_path("class28_T.json").read_text(encoding="utf-8"))["T"]
    sys_ = LVSystem.from_entries(d["A"], d.get("params"))
    T = d.get("T")
    if getattr(args, "T", None):
        T = json.loads(Path(args.T).read_text(encoding="utf-8"))["T"]
    return sys_, d.get("solve_for", "μ"), T


def _cache(args):
    return Path(args.cache) if args.cache else None


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        # decimal forms such as 1e-20 are accepted and read exactly
        return Fraction(text)


def _reduced(args):
    sys_, solve_for, T = _load_system(args)
    mu = construct.derive_mu(sys_, solve_for)
    return sys_, solve_for, T, mu, sys_.substitute({solve_for: mu})


def _full(args, table=None):
    sys_, solve_for, T = _load_system(args)
    width = _rational(getattr(args, "width", None) or "1/100000000000000000000")
    rep = construct.build(sys_, solve_for, T, width, _cache(args), table)
    if not rep.ok:
        raise SystemExit(f"construction failed at {rep.failed_stage}: {rep.failure}")
    return rep


def cmd_derive_mu(args):
    sys_, solve_for, _ = _load_system(args)
    print(f"{solve_for} = {construct.derive_mu(sys_, solve_for)}")


def cmd_block_diag(args):
    _, _, T, _, red = _reduced(args)
    print(block_diagonalize(red, T).to_text(), end="")


def cmd_center_manifold(args):
    _, _, T, _, red = _reduced(args)
    bf = block_diagonalize(red, T)
    cm = center_manifold(transform_field(red, bf), args.order, lower=False)
    print(cm.to_text(), end="")


def cmd_focal_values(args):
    _, _, T, _, red = _reduced(args)
    fs = construct.compute_focal(red, block_diagonalize(red, T), _cache(args))
    for k, s in enumerate(construct.focal_summary(fs), 1):
        print(
            f"LV{k}: numerator degree {s['num_degree']} ({s['num_terms']} terms), "
            f"denominator degree {s['den_degree']} ({s['den_terms']} terms)"
        )
    if args.full:
        print(fs.to_text(), end="")


def cmd_isolate(args):
    _, _, T, _, red = _reduced(args)
    fs = construct.compute_focal(red, block_diagonalize(red, T), _cache(args))
    table = {"num-LV3": fs.LV3.num, "den-LV3": fs.LV3.den, "det": red.det()}
    names = args.side or list(SIDE_CHOICES)
    width = _rational(args.width)
    if names == list(SIDE_CHOICES):
        cert = construct.isolate_focal_roots(red, fs, width, _cache(args))
    else:
        cert = mrealroot([fs.LV1.num, fs.LV2.num], ("λ", "n"), width, [table[s] for s in names], side_names=names)
    print(cert.to_text(), end="")


def cmd_classify(args):
    table = ClassTable.load(args.table) if args.table else ClassTable.load()
    rep = _full(args, table)
    red = rep.reduced_system()
    box = rep.box.box()
    print(f"competitive: {competitive_check(red, box)}")
    print(classify(zeeman_invariants(red, box), table))


def cmd_perturb(args):
    rep = _full(args)
    pp = construct.perturb(rep, _rational(args.rho))
    print(pp.to_text(), end="")
    print(f"three small-amplitude cycles scheduled: {rep.three_cycles_scheduled()}")


def cmd_verify(args):
    rep = _full(args)
    construct.perturb(rep, _rational(args.rho))
    nv = construct.verify(rep, args.tol, samples=args.samples)
    print(nv.to_text(), end="")


def cmd_search(args):
    template = construct.SearchTemplate.from_json(args.template)
    wins, fails = construct.search(template, args.attempts, args.seed, cache=_cache(args))
    for rep in fails:
        print(f"failed: {rep.failed_stage}: {rep.failure}")
    for rep in wins:
        print(json.dumps(rep.summary(), ensure_ascii=False, sort_keys=True))
    if args.out:
        report_emit(wins, args.out)


def cmd_report(args):
    rep = _full(args)
    construct.perturb(rep, _rational(args.rho))
    if args.tol:
        construct.verify(rep, args.tol)
    paths = report_emit(rep, args.out)
    if args.out is None:
        print(certificate_text(rep), end="")
    for p in paths:
        print(p)


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lvcycles", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", help="system JSON (A, params, solve_for, optional T)")
    common.add_argument("--cache", help="directory for cached focal values and root certificates")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("derive-mu", parents=[common], help="solve the eigenvalue condition")
    s.set_defaults(func=cmd_derive_mu)
    s = sub.add_parser("block-diag", parents=[common], help="block form C = T A T^-1")
    s.add_argument("--T", help="JSON file with the transformation matrix")
    s.set_defaults(func=cmd_block_diag)
    s = sub.add_parser("center-manifold", parents=[common], help="center manifold coefficients")
    s.add_argument("--order", type=int, default=6)
    s.set_defaults(func=cmd_center_manifold)
    s = sub.add_parser("focal-values", parents=[common], help="LV1..LV3 degrees and terms")
    s.add_argument("--full", action="store_true", help="print the polynomials too")
    s.set_defaults(func=cmd_focal_values)
    s = sub.add_parser("isolate", parents=[common], help="certified roots of LV1 = LV2 = 0")
    s.add_argument("--width", default="1/100000000000000000000")
    s.add_argument("--side", nargs="*", choices=SIDE_CHOICES)
    s.set_defaults(func=cmd_isolate)
    s = sub.add_parser("classify", parents=[common], help="Zeeman class at the root box")
    s.add_argument("--table")
    s.set_defaults(func=cmd_classify)
    s = sub.add_parser("perturb", parents=[common], help="exact point with three small cycles")
    s.add_argument("--rho", default=str(DEFAULT_RHO))
    s.set_defaults(func=cmd_perturb)
    s = sub.add_parser("verify", parents=[common], help="numeric return map and boundary probe")
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--rho", default=str(DEFAULT_RHO))
    s.add_argument("--samples", type=int, default=12)
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("search", parents=[common], help="seeded random search over a template")
    s.add_argument("--template", required=True)
    s.add_argument("--attempts", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", help="directory for the systems ledger and certificates")
    s.set_defaults(func=cmd_search)
    s = sub.add_parser("report", parents=[common], help="write the ledger line and certificate")
    s.add_argument("--out")
    s.add_argument("--rho", default=str(DEFAULT_RHO))
    s.add_argument("--tol", type=float, default=None, help="also run the numeric checks")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "command", None) == "search" and args.attempts < 1:
        raise SystemExit("--attempts must be at least 1")
    args.func(args)
    return 0
