"""Small dense linear algebra over any exact field.

Only ``+ - * /`` and truth testing are used on entries, so the same code runs
over Fractions, rational functions and the factored or quadratic-extension
fields.
"""
from __future__ import annotations

from typing import Sequence


class SingularMatrixError(ZeroDivisionError):
    pass


def matmul(X, Y):
    n, m, p = len(X), len(Y), len(Y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = X[i][0] * Y[0][j]
            for k in range(1, m):
                s = s + X[i][k] * Y[k][j]
            row.append(s)
        out.append(row)
    return out


def matvec(M, v):
    out = []
    for row in M:
        s = row[0] * v[0]
        for a, b in zip(row[1:], v[1:]):
            s = s + a * b
        out.append(s)
    return out


def det3(a):
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def adj3(a):
    """Adjugate of a 3x3 matrix: adj(a) @ a = det(a) I."""
    out = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != j]
            c = [x for x in range(3) if x != i]
            m = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]]
            out[i][j] = m if (i + j) % 2 == 0 else -m
    return out


def inv3(a):
    d = det3(a)
    if not d:
        raise SingularMatrixError("matrix is singular")
    adj = adj3(a)
    return [[x / d for x in row] for row in adj]


def solve(M: Sequence[Sequence], b: Sequence, zero=0):
    """Gauss-Jordan elimination with first-nonzero pivoting."""
    n = len(b)
    rows = [list(M[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            raise SingularMatrixError(f"singular system (column {c})")
        rows[c], rows[piv] = rows[piv], rows[c]
        p = rows[c][c]
        rows[c] = [x / p for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [rows[i][n] for i in range(n)]


def inverse(M: Sequence[Sequence], zero, one):
    n = len(M)
    rows = [list(M[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            raise SingularMatrixError(f"singular matrix (column {c})")
        rows[c], rows[piv] = rows[piv], rows[c]
        p = rows[c][c]
        rows[c] = [x / p for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [row[n:] for row in rows]
