"""Exact dense linear algebra over Q with fraction-free (Bareiss) elimination."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def _integer_rows(M: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Scale each row to integers; returns the integer rows and the row scales."""
    out, scales = [], []
    for row in M:
        s = 1
        for x in row:
            s = lcm(s, Fraction(x).denominator)
        out.append([int(Fraction(x) * s) for x in row])
        scales.append(s)
    return out, scales


def bareiss_echelon(A: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free row echelon form of an integer matrix (modified in a copy).

    Returns ``(R, pivot_columns, sign)`` where ``sign`` is the parity of the
    row swaps performed.  Every intermediate division is exact.
    """
    R = [list(r) for r in A]
    m = len(R)
    ncols = len(R[0]) if m else 0
    pivots: list[int] = []
    prev = 1
    sign = 1
    row = 0
    for col in range(ncols):
        if row >= m:
            break
        piv = next((i for i in range(row, m) if R[i][col] != 0), None)
        if piv is None:
            continue
        if piv != row:
            R[row], R[piv] = R[piv], R[row]
            sign = -sign
        p = R[row][col]
        for i in range(row + 1, m):
            a = R[i][col]
            Ri = R[i]
            Rr = R[row]
            for j in range(col, ncols):
                Ri[j] = (p * Ri[j] - a * Rr[j]) // prev
            # entries left of the pivot column in lower rows are already zero
        prev = p
        pivots.append(col)
        row += 1
    return R, pivots, sign


def determinant(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    if all(Fraction(M[i][j]) == 0 for i in range(n) for j in range(n) if i != j):
        out = Fraction(1)
        for i in range(n):
            out *= Fraction(M[i][i])
        return out
    A, scales = _integer_rows(M)
    R, pivots, sign = bareiss_echelon(A)
    if len(pivots) < n:
        return Fraction(0)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * R[n - 1][n - 1], denom)


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    A, _ = _integer_rows(M)
    return len(bareiss_echelon(A)[1])


def _primitive(vec: list[Fraction]) -> list[int]:
    den = 1
    for x in vec:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return ints


def kernel_basis(M: Sequence[Sequence], ncols: int | None = None) -> list[list[int]]:
    """Basis of the right kernel ``{v : M v = 0}`` as primitive integer vectors.

    One vector per non-pivot column; each is normalised to coprime integer
    entries with a positive first nonzero entry.
    """
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    A, _ = _integer_rows(M)
    R, pivots, _ = bareiss_echelon(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            pc = pivots[k]
            s = sum((R[k][j] * v[j] for j in range(pc + 1, ncols)), Fraction(0))
            v[pc] = -s / R[k][pc]
        basis.append(_primitive(v))
    return basis


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list:
    return [sum(Fraction(a) * b for a, b in zip(row, v)) for row in M]


def solve_in_span(columns: list[list], target: list) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum_j c_j columns[j] = target``, or ``None`` if impossible."""
    if not columns:
        return [] if all(Fraction(x) == 0 for x in target) else None
    k = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(len(target))]
    A, _ = _integer_rows(rows)
    R, pivots, _ = bareiss_echelon(A)
    if k in pivots:
        return None
    c = [Fraction(0)] * k
    for r in range(len(pivots) - 1, -1, -1):
        pc = pivots[r]
        s = sum((R[r][j] * c[j] for j in range(pc + 1, k)), Fraction(0))
        c[pc] = (R[r][k] - s) / R[r][pc]
    return c
