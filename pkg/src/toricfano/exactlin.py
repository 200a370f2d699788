"""Exact rational linear algebra on small integer and rational vectors.

Everything here is plain Python arithmetic over ``int`` and
``fractions.Fraction``, so results are exact by construction: every rational
is stored in lowest terms with a positive denominator, and there is no
rounding anywhere. Vectors are tuples, matrices are sequences of row tuples.
The solvers are sized for the 4-dimensional lattice work in this package
(systems never have more than four columns).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple
Scalar = "int | Fraction"


def dot(a: Sequence, b: Sequence):
    """Exact inner product of two equal-length vectors."""
    return sum(x * y for x, y in zip(a, b, strict=True))


def _det3(a, b, c) -> int:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _drop(row, j):
    return tuple(row[:j]) + tuple(row[j + 1 :])


def det4(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a 4x4 integer matrix given as four rows.

    Cofactor expansion along the first row; all intermediate values stay
    integral, so the result is exact for arbitrarily large entries.
    """
    r0, r1, r2, r3 = rows
    total = 0
    sign = 1
    for j in range(4):
        if r0[j] != 0:
            total += sign * r0[j] * _det3(_drop(r1, j), _drop(r2, j), _drop(r3, j))
        sign = -sign
    return total


def _rref(m: list[list[Fraction]], ncols: int) -> list[int]:
    """Reduce ``m`` in place to reduced row echelon form.

    Pivoting is fixed: columns are scanned left to right, and within a column
    the first row (top to bottom) with a nonzero entry becomes the pivot.
    Only the first ``ncols`` columns are eligible as pivots, so an augmented
    right-hand-side column can ride along untouched. Returns the pivot column
    indices in order.
    """
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return pivots


def solve(rows: Sequence[Sequence], rhs: Sequence):
    """Solve ``A x = b`` exactly.

    Returns ``(x, rank)`` where ``x`` is one exact solution as a tuple of
    ``Fraction``, or ``None`` when the system is inconsistent. When the
    system is underdetermined the canonical solution is returned: free
    variables (the non-pivot columns under the fixed left-to-right pivoting
    of :func:`_rref`) are set to zero, which makes the output deterministic.
    ``rank`` is the rank of the coefficient matrix, so callers can detect
    underdetermination via ``rank < ncols``.
    """
    if len(rows) != len(rhs):
        raise ValueError("matrix and right-hand side have different heights")
    ncols = len(rows[0])
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = _rref(m, ncols)
    for i in range(len(pivots), len(m)):
        if m[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return tuple(x), len(pivots)


def nullspace(rows: Sequence[Sequence]) -> list[tuple]:
    """Basis of the solution space of ``A x = 0``.

    One basis vector per free column: the free variable is set to 1, all
    other free variables to 0, and the pivot variables are back-substituted.
    Returns an empty list for a full-rank matrix.
    """
    ncols = len(rows[0])
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = _rref(m, ncols)
    basis = []
    for fc in range(ncols):
        if fc in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][fc]
        basis.append(tuple(v))
    return basis
