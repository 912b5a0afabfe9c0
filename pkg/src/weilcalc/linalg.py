"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def _pick_pivot(rows: Matrix, col: int, start: int) -> int | None:
    best = None
    best_size = None
    for r in range(start, len(rows)):
        v = rows[r][col]
        if v:
            size = abs(v.numerator) + v.denominator
            if best is None or size < best_size:
                best, best_size = r, size
    return best


def rref(matrix: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are chosen by smallest numerator/denominator size to keep
    intermediate fractions small.
    """
    rows = [[Fraction(v) for v in row] for row in matrix]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = _pick_pivot(rows, c, r)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        pivot_row = [v * inv for v in rows[r]]
        rows[r] = pivot_row
        nz = [j for j in range(c, ncols) if pivot_row[j]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] -= f * pivot_row[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank(matrix: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(matrix, ncols)[1])


def nullspace(matrix: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : matrix @ x = 0}`` (one vector per free column)."""
    reduced, pivots = rref(matrix, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def independent_rows(matrix: Sequence[Sequence], ncols: int) -> list[int]:
    """Indices of a maximal set of linearly independent rows (greedy, in order)."""
    reduced = rref([list(r) for r in zip(*matrix)] if matrix else [], len(matrix))[1]
    return reduced


def inverse(matrix: Sequence[Sequence]) -> Matrix:
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    reduced, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in reduced]


def matvec(matrix: Sequence[Sequence], vec: Sequence):
    """Matrix times a vector whose entries may be any module elements."""
    out = []
    for row in matrix:
        acc = None
        for a, v in zip(row, vec):
            if a and v:
                t = v * a
                acc = t if acc is None else acc + t
        out.append(acc if acc is not None else Fraction(0))
    return out
