"""
Exact linear algebra over Q on sparse rows, backed by sympy's DomainMatrix.

Rows are dicts column -> Fraction; every solver call is independent.
"""

from fractions import Fraction
from typing import Sequence, TypeAlias

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Row: TypeAlias = dict[int, Fraction]


def _to_qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def _from_qq(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _matrix(rows: Sequence[Row], ncols: int) -> DomainMatrix:
    data = {i: {j: _to_qq(Fraction(c)) for j, c in row.items() if c} for i, row in enumerate(rows)}
    data = {i: r for i, r in data.items() if r}
    return DomainMatrix(data, (len(rows), ncols), QQ)


def rref(rows: Sequence[Row], ncols: int) -> tuple[list[Row], tuple[int, ...]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns."""
    if not rows or not ncols:
        return [], ()
    reduced, pivots = _matrix(rows, ncols).rref()
    out: list[Row] = [{} for _ in pivots]
    for (i, j), c in reduced.to_dok().items():
        if i < len(out) and c:
            out[i][j] = _from_qq(c)
    return out, tuple(pivots)


def rank(rows: Sequence[Row], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Row], ncols: int) -> list[Row]:
    """Basis of {v : rows . v = 0}, one vector per free column in increasing order."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis: list[Row] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v: Row = {free: Fraction(1)}
        for row, p in zip(reduced, pivots):
            c = row.get(free)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def row_space(rows: Sequence[Row], ncols: int) -> list[Row]:
    return rref(rows, ncols)[0]


def solve(rows: Sequence[Row], rhs: Sequence[Fraction], ncols: int) -> Row | None:
    """One solution of rows . v = rhs, or None when the system is inconsistent."""
    augmented = [dict(row) for row in rows]
    for row, b in zip(augmented, rhs):
        if b:
            row[ncols] = Fraction(b)
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    v: Row = {}
    for row, p in zip(reduced, pivots):
        c = row.get(ncols)
        if c:
            v[p] = c
    return v
