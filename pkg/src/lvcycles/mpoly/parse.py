"""Expression parsing into rational functions.

Accepts Python-like arithmetic with ``^`` or ``**`` for integer powers,
decimal integers, ``p/q`` rationals and identifiers.  ``lam``/``lambda`` and
``mu`` are aliases for ``λ`` and ``μ``; the Unicode minus is accepted.
"""
from __future__ import annotations

import ast
from fractions import Fraction

from .poly import MPoly
from .ratfunc import RatFunc

ALIASES = {"lam": "λ", "lambda_": "λ", "mu": "μ"}


def canonical_name(name: str) -> str:
    return ALIASES.get(name, name)


def _prepare(text: str) -> str:
    s = text.strip().replace("^", "**").replace("−", "-").replace("·", "*").replace("×", "*")
    # `lambda` is a Python keyword; rename before handing the text to ast
    out = []
    i = 0
    while i < len(s):
        if s.startswith("lambda", i) and (i == 0 or not (s[i - 1].isalnum() or s[i - 1] == "_")):
            j = i + len("lambda")
            if j >= len(s) or not (s[j].isalnum() or s[j] == "_"):
                out.append("lambda_")
                i = j
                continue
        out.append(s[i])
        i += 1
    return "".join(out)


def parse_expr(text: str) -> RatFunc:
    try:
        tree = ast.parse(_prepare(text), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}: {exc.msg}") from None
    return _walk(tree.body, text)


def parse_poly(text: str) -> MPoly:
    r = parse_expr(text)
    if not r.is_polynomial():
        raise ValueError(f"{text!r} is not a polynomial")
    return r.as_poly()


def _walk(node, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ValueError(f"only integer literals are allowed in {text!r}")
        return RatFunc.const(node.value)
    if isinstance(node, ast.Name):
        return RatFunc.var(canonical_name(node.id))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _walk(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            e = _int_exponent(node.right, text)
            return _walk(node.left, text) ** e
        a, b = _walk(node.left, text), _walk(node.right, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
    raise ValueError(f"unsupported syntax in {text!r}")


def _int_exponent(node, text) -> int:
    neg = False
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        neg, node = True, node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return -node.value if neg else node.value
    raise ValueError(f"exponents must be integer literals in {text!r}")


def parse_rational_text(text: str) -> Fraction:
    r = parse_expr(text)
    if not r.is_constant():
        raise ValueError(f"{text!r} is not a constant")
    return r.constant_value()
