"""Dense exact matrices over Q as lists of lists of Fractions.

Sizes in this package stay in the tens, so plain Gaussian elimination is
plenty.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        target = out[i]
        for k in range(inner):
            aik = row[k]
            if aik:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        target[j] += aik * brow[j]
    return out


def matvec(a: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in a]


def matadd(a: Matrix, b: Matrix, scale: Fraction = ONE) -> Matrix:
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scaled(a: Matrix, c: Fraction) -> Matrix:
    return [[c * x for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (leading entries 1) and pivot columns."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(a: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    """Basis of {x : a x = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    reduced, pivots = rref(a) if a else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in reduced]


def in_span(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    """Exact membership test by rank comparison."""
    if not any(v):
        return True
    return rank(list(basis) + [list(v)]) == rank(basis) if basis else False


def solve_in_basis(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector | None:
    """Coordinates c with sum c_i basis_i = v, or None if v is outside the span."""
    k = len(basis)
    if k == 0:
        return [] if not any(v) else None
    # columns = basis vectors; augmented with v
    aug = [[basis[i][r] for i in range(k)] + [v[r]] for r in range(len(v))]
    reduced, pivots = rref(aug)
    if k in pivots:
        return None
    coords = [ZERO] * k
    for row, p in zip(reduced, pivots):
        coords[p] = row[k]
    return coords
