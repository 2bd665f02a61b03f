"""Exact rank and nullity of small rational matrices (Bareiss elimination)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        scale = lcm(1, *(x.denominator for x in fr))
        out.append([int(x * scale) for x in fr])
    return out


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    """Rank over Q of a matrix given as a list of rows.

    Rows are cleared of denominators and reduced with fraction-free
    (Bareiss) elimination, so every intermediate entry stays an integer.
    """
    a = _integer_rows(rows)
    if not a:
        return 0
    ncols = len(a[0]) if ncols is None else ncols
    nrows = len(a)
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == nrows:
            break
    return r


def nullity(rows: Sequence[Sequence], ncols: int) -> int:
    """Dimension of the solution space of ``rows @ x = 0`` in Q^ncols."""
    if ncols == 0:
        return 0
    return ncols - rank(rows, ncols)
