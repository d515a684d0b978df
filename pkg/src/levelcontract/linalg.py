"""Exact Gauss-Jordan elimination over the rationals.

Rows are scaled to integers and eliminated fraction-free; each row is kept
primitive (content 1), so entries stay small on the sparse 0/1 systems built
from level graphs.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def _integral(row: Sequence) -> list[int]:
    if all(type(x) is int for x in row):
        return list(row)
    fr = [Fraction(x) for x in row]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    return [int(x * den) for x in fr]


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
    return [x // g for x in row] if g > 1 else row


def _eliminate(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[int]], list[int]]:
    m = [_integral(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        p = m[r][c]
        for k in range(len(m)):
            f = m[k][c]
            if k != r and f != 0:
                m[k] = _primitive([p * a - f * b for a, b in zip(m[k], m[r])])
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (pivots equal to 1) and pivot columns."""
    red, pivots = _eliminate(rows, ncols)
    return [[Fraction(x, row[p]) for x in row] for row, p in zip(red, pivots)], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(_eliminate(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    red, pivots = _eliminate(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            if row[f]:
                x[p] = Fraction(-row[f], row[p])
        basis.append(x)
    return basis
