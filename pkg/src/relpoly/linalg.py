"""Exact rank and inertia for small rational matrices."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

__all__ = ["rank", "inertia"]


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by Bareiss fraction-free elimination.

    Rows are scaled to integers first, so every intermediate entry stays an
    integer (each Bareiss step divides exactly by the previous pivot).
    """
    m = _integer_rows(rows)
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    prev = 1
    for col in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for i in range(r + 1, n_rows):
            a = m[i][col]
            m[i] = [(p * m[i][j] - a * m[r][j]) // prev for j in range(n_cols)]
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


def inertia(matrix: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric matrix.

    Symmetric Gaussian elimination with 1x1 pivots where the diagonal allows
    and 2x2 pivots ``[[d_i, h], [h, d_j]]`` otherwise.  Each step is a
    congruence, so Sylvester's law of inertia makes the counts exact.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    for i in range(n):
        if len(a[i]) != n:
            raise ValueError("matrix must be square")
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix must be symmetric")
    pos = neg = 0
    idx = list(range(n))
    while idx:
        k = next((i for i in idx if a[i][i]), None)
        if k is not None:
            d = a[k][k]
            if d > 0:
                pos += 1
            else:
                neg += 1
            idx.remove(k)
            for i in idx:
                f = a[i][k] / d
                if f:
                    for j in idx:
                        a[i][j] -= f * a[k][j]
            continue
        pair = next(((i, j) for i in idx for j in idx if i < j and a[i][j]), None)
        if pair is None:
            break
        i0, j0 = pair
        h = a[i0][j0]
        # zero diagonal: block [[0, h], [h, 0]] has eigenvalues +-|h|
        pos += 1
        neg += 1
        idx.remove(i0)
        idx.remove(j0)
        # block inverse of [[0, h], [h, 0]] is [[0, 1/h], [1/h, 0]]
        for i in idx:
            ui, vi = a[i][i0], a[i][j0]
            if not (ui or vi):
                continue
            for j in idx:
                uj, vj = a[i0][j], a[j0][j]
                a[i][j] -= (ui * vj + vi * uj) / h
    zero = n - pos - neg
    return pos, neg, zero
