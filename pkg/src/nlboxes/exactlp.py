"""Exact rational linear algebra: phase-1 simplex feasibility and matrix rank.

No floating point anywhere.  The simplex uses Bland's rule, so it terminates
on degenerate problems (which are the norm here: polytope-membership LPs
have many redundant equality rows).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


def _pivot(tableau, obj, r, j):
    prow = tableau[r]
    pv = prow[j]
    prow = [v / pv if v else ZERO for v in prow]
    tableau[r] = prow
    nz = [k for k, v in enumerate(prow) if v]
    for i, row in enumerate(tableau):
        if i == r:
            continue
        f = row[j]
        if f:
            for k in nz:
                row[k] -= f * prow[k]
    f = obj[j]
    if f:
        for k in nz:
            obj[k] -= f * prow[k]


def feasible_point(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Find ``x >= 0`` with ``A x = b`` or return None.

    Phase 1 of the simplex method with one artificial variable per row.
    Ties are broken by Bland's rule, so the returned point is a fixed,
    reproducible basic feasible solution.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    tableau = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        art = [ZERO] * m
        art[i] = Fraction(1)
        tableau.append(row + art + [rhs])
    width = n + m + 1
    # reduced costs of "minimise the sum of artificials"
    obj = [ZERO] * width
    for row in tableau:
        for k in range(n):
            if row[k]:
                obj[k] -= row[k]
        obj[-1] -= row[-1]
    basis = [n + i for i in range(m)]

    while True:
        # artificials never re-enter once they leave
        entering = next((j for j in range(n) if obj[j] < 0), None)
        if entering is None:
            break
        best = None
        for i, row in enumerate(tableau):
            if row[entering] > 0:
                key = (row[-1] / row[entering], basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # cannot happen in phase 1 (objective is bounded below by 0)
            raise RuntimeError("phase-1 simplex reported unbounded")
        r = best[1]
        _pivot(tableau, obj, r, entering)
        basis[r] = entering

    if obj[-1] != 0:
        return None
    x = [ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tableau[i][-1]
    return x


def convex_combination(points: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Weights ``w >= 0`` summing to 1 with ``sum w_i points[i] == target``."""
    if not points:
        return None
    dim = len(target)
    A = [[p[k] for p in points] for k in range(dim)]
    A.append([1] * len(points))
    return feasible_point(A, list(target) + [1])


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank by fraction-valued Gaussian elimination."""
    mat = [[Fraction(v) for v in row] for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        prow = mat[r]
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            if f:
                q = f / prow[c]
                row = mat[i]
                for k in range(c, ncols):
                    if prow[k]:
                        row[k] -= q * prow[k]
        r += 1
        if r == len(mat):
            break
    return r


def affine_dimension(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of ``points``."""
    if not points:
        return -1
    base = points[0]
    return rank([[p[k] - base[k] for k in range(len(base))] for p in points[1:]])
