"""Exact rational linear algebra on small dense matrices.

Rows are lists of :class:`fractions.Fraction` (ints are accepted and
promoted).  Everything here is exact; no floating point.
"""

from fractions import Fraction


def _as_rows(matrix):
    return [[Fraction(x) for x in row] for row in matrix]


def rref(matrix, ncols=None):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``rows`` holds only the nonzero rows
    and ``pivots[i]`` is the pivot column of ``rows[i]``.
    """
    rows = _as_rows(matrix)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                row = rows[i]
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix, ncols=None):
    if not matrix:
        return 0
    return len(rref(matrix, ncols)[1])


def nullspace(matrix, ncols):
    """Basis of ``{x : matrix @ x = 0}`` as a list of Fraction vectors.

    Basis vectors are the standard ones attached to free columns, so the
    output is deterministic.
    """
    if not matrix:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    rows, pivots = rref(matrix, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


def matmul(a, b):
    """Plain product of two list-of-lists matrices (exact for ints/Fractions)."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        if len(row) != inner:
            raise ValueError("inner dimensions differ")
        out.append([sum(row[t] * b[t][j] for t in range(inner)) for j in range(cols)])
    return out


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def independent_subset(vectors):
    """Indices of a maximal linearly independent subset, greedy in input order."""
    kept = []
    basis_rows = []
    current = 0
    for i, v in enumerate(vectors):
        trial = basis_rows + [list(v)]
        r = rank(trial, len(v))
        if r > current:
            kept.append(i)
            basis_rows.append(list(v))
            current = r
    return kept
