"""Exact integer linear algebra for small matrices (dimension <= 6)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

IntMatrix = list[list[int]]


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence[int]]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def pivot_columns(rows: Sequence[Sequence[int]]) -> list[int]:
    """Columns carrying the pivots of a row echelon form of ``rows``."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return []
    cols = []
    r = 0
    for c in range(len(a[0])):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        cols.append(c)
        r += 1
        if r == len(a):
            break
    return cols


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def hyperplane_normal(points: Sequence[Sequence[int]]) -> list[int]:
    """Integer normal of the hyperplane through k points in Z^k (generalized cross product)."""
    k = len(points[0])
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    normal = []
    for j in range(k):
        minor = [[row[c] for c in range(k) if c != j] for row in diffs]
        normal.append((-1) ** j * det(minor))
    g = 0
    for x in normal:
        g = gcd(g, x)
    if g > 1:
        normal = [x // g for x in normal]
    return normal


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def row_echelon_unimodular(cols: Sequence[Sequence[int]], n: int) -> tuple[IntMatrix, int]:
    """Find unimodular U with U @ v supported on the first r coordinates for every v in ``cols``.

    ``cols`` is a list of integer vectors of length n. Returns (U, r) where r is
    the rank of the span.
    """
    # work on the n x m matrix whose columns are the vectors
    a = [[int(v[i]) for v in cols] for i in range(n)]
    u = identity(n)
    m = len(cols)
    r = 0
    for c in range(m):
        if r == n:
            break
        # Euclid on column c among rows r..n-1
        while True:
            nz = [i for i in range(r, n) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, n):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                if a[i][c] != 0:
                    done = False
            if done:
                break
        if a[r][c] != 0:
            r += 1
    return u, r


def inverse_unimodular(m: Sequence[Sequence[int]]) -> IntMatrix:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = [[a[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def matvec(m: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)
