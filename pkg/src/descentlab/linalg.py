"""Exact linear algebra over Q and Z.

Small dense matrices only (a few dozen rows at most); everything is plain
Python integers and Fractions so results are exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import flint


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators."""
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = lcm(den, x.denominator)
        out.append([int(x * den) for x in fr])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination."""
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == nrows:
            break
    return r


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over Q."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def primitive(v: Sequence) -> list[int]:
    """Integer multiple of a rational vector with content 1 (first nonzero entry positive)."""
    iv = _integer_rows([v])[0]
    g = 0
    for x in iv:
        g = gcd(g, x)
    if g == 0:
        return iv
    iv = [x // g for x in iv]
    lead = next(x for x in iv if x != 0)
    return [-x for x in iv] if lead < 0 else iv


def integer_kernel(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[int]]:
    """LLL-reduced Z-basis of the saturated lattice {x in Z^n : A x = 0}.

    Uses the embedding [I_n | K*A^T]; for K large the reduced basis starts
    with a basis of the kernel lattice.  The result is checked exactly.
    """
    if ncols is None:
        ncols = len(rows[0])
    A = _integer_rows(rows) if rows else []
    dim = ncols - (rank(A) if A else 0)
    if dim == 0:
        return []
    if not A:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    big = max(abs(x) for row in A for x in row) + 1
    K = big * (2 ** (ncols + 64))
    lat = []
    for j in range(ncols):
        lat.append([int(i == j) for i in range(ncols)] + [K * A[r][j] for r in range(len(A))])
    red = flint.fmpz_mat(lat).lll(delta=0.99)
    out = []
    for i in range(red.nrows()):
        row = [int(red[i, c]) for c in range(red.ncols())]
        if all(x == 0 for x in row[ncols:]):
            out.append(row[:ncols])
    if len(out) != dim:
        raise ArithmeticError("integer kernel extraction failed")
    return out
