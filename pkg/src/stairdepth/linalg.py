"""
Exact linear algebra over the rationals: row reduction, rank, null spaces and
solving square-or-tall systems. Matrices are sequences of rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .util import Point, dot

Matrix = Sequence[Sequence[Fraction]]


def rref(rows: Matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """
    Reduce to reduced row echelon form. Returns the nonzero rows and the pivot
    column of each.
    """
    width = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    a = [[Fraction(v) for v in row] for row in rows]
    for row in a:
        if len(row) != width:
            raise ValueError(f"Row has {len(row)} entries, expected {width}")
    pivots: list[int] = []
    i = 0
    for j in range(width):
        src = next((r for r in range(i, len(a)) if a[r][j] != 0), None)
        if src is None:
            continue
        a[i], a[src] = a[src], a[i]
        lead = a[i][j]
        a[i] = [v / lead for v in a[i]]
        for r in range(len(a)):
            if r != i and a[r][j] != 0:
                factor = a[r][j]
                a[r] = [v - factor * w for v, w in zip(a[r], a[i])]
        pivots.append(j)
        i += 1
        if i == len(a):
            break
    return a[: len(pivots)], pivots


def rank(rows: Matrix, ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Matrix, ncols: int) -> list[Point]:
    """
    A basis of ``{x : row . x = 0 for every row}``. With no rows, this is the
    standard basis of ``Q^ncols``.
    """
    reduced, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis: list[Point] = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(tuple(vec))
    return basis


def row_space(rows: Matrix, ncols: int) -> list[Point]:
    """A basis of the span of the rows"""
    return [tuple(r) for r in rref(rows, ncols)[0]]


def solve(rows: Matrix, rhs: Sequence[Fraction]) -> Point | None:
    """
    Return one solution of ``A x = rhs``, or `None` if the system is
    inconsistent. Free variables are set to zero.
    """
    if len(rows) != len(rhs):
        raise ValueError(f"{len(rows)} rows but {len(rhs)} right-hand sides")
    if not rows:
        raise ValueError("Cannot solve an empty system")
    ncols = len(rows[0])
    augmented = [list(row) + [Fraction(b)] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[ncols]
    return tuple(x)


def apply(rows: Matrix, x: Sequence[Fraction]) -> Point:
    """The matrix-vector product"""
    return tuple(dot(row, x) for row in rows)


def transpose_apply(rows: Matrix, y: Sequence[Fraction], ncols: int) -> Point:
    """The product ``A^T y``"""
    out = [Fraction(0)] * ncols
    for row, c in zip(rows, y):
        for j, a in enumerate(row):
            out[j] += a * c
    return tuple(out)
