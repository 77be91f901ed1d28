"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form.

    Pivoting takes the first row with a nonzero entry in the leftmost
    remaining column; no scaling heuristics, so the result is deterministic.
    Rows may have ``ncols`` or ``ncols + 1`` entries (augmented column is
    carried along but never pivoted on).
    """
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r] + [row for row in m[r:] if any(row)], pivots


def kernel(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column."""
    red, pivots = rref([list(r)[:ncols] for r in rows], ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


class InconsistentSystemError(ValueError):
    pass


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int):
    """Particular solution (free variables 0) and kernel basis of ``A x = rhs``."""
    aug = [list(r) + [y] for r, y in zip(rows, rhs)]
    red, pivots = rref(aug, ncols)
    for row in red:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            raise InconsistentSystemError("linear system has no solution")
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return x, kernel(rows, ncols)
