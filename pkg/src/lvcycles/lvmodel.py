"""Three-species Lotka–Volterra systems  x_i' = x_i * sum_j a_ij (x_j - 1).

The interior equilibrium is (1, 1, 1) for every parameter value.  Zeeman's
boundary invariants are computed exactly as rational functions and their
signs certified on parameter boxes.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .exactnum import Interval, Sign
from .mpoly import MPoly, RatFunc, merge_vars, parse_expr
from .mpoly.interval_eval import certify_sign

Box = Mapping[str, Interval]
Matrix = tuple[tuple[RatFunc, ...], ...]
X_VARS = ("x1", "x2", "x3")


class LVModelError(ValueError):
    pass


@dataclass(frozen=True)
class LVSystem:
    A: Matrix
    params: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.A) != 3 or any(len(r) != 3 for r in self.A):
            raise LVModelError("interaction matrix must be 3x3")

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence], params: Sequence[str] | None = None) -> "LVSystem":
        A = tuple(tuple(RatFunc.coerce(e) for e in row) for row in rows)
        if params is None:
            params = merge_vars(*[e.used_vars() for row in A for e in row])
        return cls(A, tuple(params))

    @classmethod
    def from_json(cls, source) -> "LVSystem":
        data = _load_json(source)
        return cls.from_entries(data["A"], data.get("params"))

    def to_json(self) -> dict:
        return {"params": list(self.params), "A": [[str(e) for e in row] for row in self.A]}

    # structure ------------------------------------------------------------
    def b(self) -> list[RatFunc]:
        return [self.A[i][0] + self.A[i][1] + self.A[i][2] for i in range(3)]

    def substitute(self, mapping: Mapping[str, object]) -> "LVSystem":
        A = tuple(tuple(e.subs(mapping) for e in row) for row in self.A)
        params = tuple(p for p in self.params if p not in mapping)
        extra = merge_vars(*[e.used_vars() for row in A for e in row])
        return LVSystem(A, merge_vars(params, tuple(v for v in extra if v not in params)))

    def at(self, point: Mapping[str, object]) -> "LVSystem":
        vals = {k: Fraction(v) for k, v in point.items()}
        A = tuple(tuple(RatFunc.const(e.eval(vals)) for e in row) for row in self.A)
        return LVSystem(A, ())

    def float_matrix(self, point: Mapping[str, object] | None = None) -> list[list[float]]:
        vals = {k: Fraction(v) for k, v in (point or {}).items()}
        return [[float(e.eval(vals)) for e in row] for row in self.A]

    def rational_matrix(self, point: Mapping[str, object] | None = None) -> list[list[Fraction]]:
        vals = {k: Fraction(v) for k, v in (point or {}).items()}
        return [[Fraction(e.eval(vals)) for e in row] for row in self.A]

    def vector_field(self) -> list[RatFunc]:
        """Components of the field as rational functions in params and x1..x3."""
        vs = merge_vars(self.params, X_VARS)
        xs = [RatFunc(MPoly.var(v, vs)) for v in X_VARS]
        out = []
        for i in range(3):
            s = sum(((self.A[i][j] * (xs[j] - 1)) for j in range(3)), RatFunc.const(0))
            out.append(xs[i] * s)
        return out

    def trace(self) -> RatFunc:
        return self.A[0][0] + self.A[1][1] + self.A[2][2]

    def det(self) -> RatFunc:
        return det3(self.A)

    def principal_minor_sum(self) -> RatFunc:
        a = self.A
        return (a[1][1] * a[2][2] - a[1][2] * a[2][1]) + (a[0][0] * a[2][2] - a[0][2] * a[2][0]) + (
            a[0][0] * a[1][1] - a[0][1] * a[1][0]
        )


def det3(a) -> RatFunc:
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def _load_json(source) -> dict:
    if isinstance(source, dict):
        return source
    p = Path(source)
    return json.loads(p.read_text(encoding="utf-8"))


def data_path(name: str) -> Path:
    return Path(str(resources.files("lvcycles") / "data" / name))


def paper_system() -> LVSystem:
    """The worked class-28 construction matrix with free parameters λ, n, μ."""
    return LVSystem.from_json(data_path("class28_system.json"))


# equilibria ---------------------------------------------------------------------
def axial_equilibrium(sys: LVSystem, i: int) -> list[RatFunc]:
    """R_i: the equilibrium on the x_i axis (0-based index)."""
    aii = sys.A[i][i]
    if not aii:
        raise LVModelError(f"a_{i + 1}{i + 1} vanishes identically; no axial equilibrium")
    out = [RatFunc.const(0)] * 3
    out[i] = sys.b()[i] / aii
    return out


def planar_equilibrium(sys: LVSystem, k: int) -> list[RatFunc]:
    """Q_k: the equilibrium on the face x_k = 0 (0-based index)."""
    i, j = [t for t in range(3) if t != k]
    a = sys.A
    b = sys.b()
    det = a[i][i] * a[j][j] - a[i][j] * a[j][i]
    if not det:
        raise LVModelError(f"face x{k + 1}=0 subsystem is singular")
    xi = (b[i] * a[j][j] - a[i][j] * b[j]) / det
    xj = (a[i][i] * b[j] - a[j][i] * b[i]) / det
    out = [RatFunc.const(0)] * 3
    out[i], out[j] = xi, xj
    return out


# competitiveness --------------------------------------------------------------------
class Competitive(enum.Enum):
    CERTIFIED = "certified-competitive"
    NOT = "certified-not"
    INDETERMINATE = "indeterminate"

    def __str__(self) -> str:
        return self.value


def competitive_check(sys: LVSystem, box: Box, budget: int = 256) -> Competitive:
    signs = [certify_sign(e, box, budget) for row in sys.A for e in row]
    if all(s is Sign.NEG for s in signs):
        return Competitive.CERTIFIED
    if any(s in (Sign.POS, Sign.ZERO) for s in signs):
        return Competitive.NOT
    return Competitive.INDETERMINATE


# Zeeman invariants --------------------------------------------------------------------
CONVENTIONS = ("positive", "literal")
PAIRS = [(i, j) for i in range(3) for j in range(3) if i != j]


@dataclass
class ZeemanInvariants:
    """Boundary invariants with certified signs.

    ``convention="positive"`` writes the system as x_i' = x_i (r_i - sum_j c_ij x_j)
    with c = -A and r = -b, the form the classification tables use; the
    ``literal`` convention keeps A and b = row sums as given.  The two differ
    by a global sign of every invariant.
    """

    b: list[RatFunc]
    alpha: dict[tuple[int, int], RatFunc]
    beta: dict[int, RatFunc | None]
    R: dict[tuple[int, int], Sign]
    Q: dict[int, Sign | None]
    face_positive: dict[int, bool]
    convention: str = "positive"

    def pattern(self) -> dict[str, int | None]:
        out: dict[str, int | None] = {}
        for i, j in PAIRS:
            out[f"R{i + 1}{j + 1}"] = _sign_int(self.R[(i, j)])
        for k in range(3):
            s = self.Q[k]
            out[f"Q{k + 1}{k + 1}"] = _sign_int(s) if s is not None else None
        return out

    def indeterminate(self) -> list[str]:
        bad = [f"R{i + 1}{j + 1}" for (i, j), s in self.R.items() if s is Sign.UNKNOWN]
        bad += [f"Q{k + 1}{k + 1}" for k, s in self.Q.items() if s is Sign.UNKNOWN]
        return bad


def _sign_int(s: Sign) -> int | None:
    return {Sign.POS: 1, Sign.NEG: -1, Sign.ZERO: 0}.get(s)


def alpha_invariant(sys: LVSystem, i: int, j: int) -> RatFunc:
    """alpha_ij = b_i a_ji / a_ii - b_j in the literal convention."""
    b = sys.b()
    return b[i] * sys.A[j][i] / sys.A[i][i] - b[j]


def beta_invariant(sys: LVSystem, k: int) -> RatFunc:
    q = planar_equilibrium(sys, k)
    b = sys.b()
    return sum((sys.A[k][j] * q[j] for j in range(3)), RatFunc.const(0)) - b[k]


def beta_by_substitution(sys: LVSystem, k: int) -> RatFunc:
    """Per-capita growth rate of species k at Q_k, read off the vector field."""
    q = planar_equilibrium(sys, k)
    return sum((sys.A[k][j] * (q[j] - 1) for j in range(3)), RatFunc.const(0))


def zeeman_invariants(sys: LVSystem, box: Box, convention: str = "positive", budget: int = 256) -> ZeemanInvariants:
    if convention not in CONVENTIONS:
        raise LVModelError(f"unknown convention {convention!r}")
    flip = -1 if convention == "positive" else 1
    b = sys.b()
    alpha = {(i, j): alpha_invariant(sys, i, j) * flip for i, j in PAIRS}
    R = {ij: certify_sign(a, box, budget) for ij, a in alpha.items()}
    beta: dict[int, RatFunc | None] = {}
    Q: dict[int, Sign | None] = {}
    face_pos: dict[int, bool] = {}
    for k in range(3):
        try:
            q = planar_equilibrium(sys, k)
        except LVModelError:
            beta[k], Q[k], face_pos[k] = None, None, False
            continue
        coords = [q[t] for t in range(3) if t != k]
        pos = all(certify_sign(c, box, budget) is Sign.POS for c in coords)
        face_pos[k] = pos
        if pos:
            beta[k] = beta_invariant(sys, k) * flip
            Q[k] = certify_sign(beta[k], box, budget)
        else:
            beta[k], Q[k] = None, None
    return ZeemanInvariants([x * flip for x in b], alpha, beta, R, Q, face_pos, convention)


# classification table ----------------------------------------------------------------
KEYS = ["R12", "R13", "R21", "R23", "R31", "R32", "Q11", "Q22", "Q33"]


@dataclass(frozen=True)
class ClassEntry:
    number: int
    pattern: dict[str, int | None]  # None = wildcard

    def matches(self, pat: Mapping[str, int | None]) -> bool:
        for k in KEYS:
            want = self.pattern.get(k)
            if want is None:
                continue
            if pat.get(k) != want:
                return False
        return True


@dataclass
class ClassTable:
    entries: list[ClassEntry] = field(default_factory=list)

    def __post_init__(self):
        for a, b in itertools.combinations(self.entries, 2):
            if all(a.pattern.get(k) is None or b.pattern.get(k) is None or a.pattern[k] == b.pattern[k] for k in KEYS):
                raise LVModelError(f"table entries for classes {a.number} and {b.number} overlap")

    @classmethod
    def parse(cls, text: str) -> "ClassTable":
        entries = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            if not toks[0].startswith("class=") or len(toks) < 2 or toks[1] != "pattern":
                raise LVModelError(f"line {lineno}: expected 'class=<int> pattern ...'")
            number = int(toks[0][len("class="):])
            pat: dict[str, int | None] = {}
            for t in toks[2:]:
                k, _, v = t.partition("=")
                if k not in KEYS:
                    raise LVModelError(f"line {lineno}: unknown key {k!r}")
                pat[k] = None if v == "*" else int(v)
                if pat[k] not in (None, 1, -1):
                    raise LVModelError(f"line {lineno}: sign must be +1, -1 or *")
            entries.append(ClassEntry(number, {k: pat.get(k) for k in KEYS}))
        return cls(entries)

    @classmethod
    def load(cls, path=None) -> "ClassTable":
        p = Path(path) if path else data_path("zeeman_classes.txt")
        return cls.parse(p.read_text(encoding="utf-8"))

    def lookup(self, pat: Mapping[str, int | None]) -> int | None:
        for e in self.entries:
            if e.matches(pat):
                return e.number
        return None


@dataclass(frozen=True)
class Classification:
    number: int | None
    permutation: tuple[int, int, int] | None  # new label (1-based) of species 1, 2, 3
    pattern: dict[str, int | None]
    relabeled_pattern: dict[str, int | None] | None

    @property
    def found(self) -> bool:
        return self.number is not None

    def __str__(self) -> str:
        if self.number is None:
            return "not in table " + format_pattern(self.pattern)
        return f"class={self.number}"


def format_pattern(pat: Mapping[str, int | None]) -> str:
    def s(v):
        return "*" if v is None else f"{v:+d}"

    return " ".join(f"{k}={s(pat.get(k))}" for k in KEYS)


def relabel_pattern(pat: Mapping[str, int | None], perm: Sequence[int]) -> dict[str, int | None]:
    """Pattern seen after renaming species i as perm[i] (0-based lists)."""
    out: dict[str, int | None] = {}
    for i, j in PAIRS:
        out[f"R{perm[i] + 1}{perm[j] + 1}"] = pat[f"R{i + 1}{j + 1}"]
    for k in range(3):
        out[f"Q{perm[k] + 1}{perm[k] + 1}"] = pat[f"Q{k + 1}{k + 1}"]
    return out


class ClassificationError(LVModelError):
    pass


def classify(inv: ZeemanInvariants, table: ClassTable) -> Classification:
    """Look the sign pattern up, allowing any relabeling of the species.

    The identity labeling is tried first, then the other five permutations in
    lexicographic order; the first hit is returned with its permutation.
    """
    bad = inv.indeterminate()
    if bad:
        raise ClassificationError(f"indeterminate signs: {', '.join(bad)}")
    pat = inv.pattern()
    for perm in itertools.permutations(range(3)):
        rp = relabel_pattern(pat, perm)
        hit = table.lookup(rp)
        if hit is not None:
            return Classification(hit, tuple(p + 1 for p in perm), pat, rp)
    return Classification(None, None, pat, None)
