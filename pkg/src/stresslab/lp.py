"""Exact rational linear programming (phase-1 simplex, Bland's rule).

Only feasibility problems are needed here: find x with A x >= b over Q.  The
instances are tiny (tens of rows), so a dense tableau with Fractions is the
simple, exact choice.
"""

from __future__ import annotations

from fractions import Fraction


def feasible_point(a_rows, b):
    """Return rational x with A x >= b, or None if infeasible.

    Free variables are split into positive parts; artificial variables drive
    a phase-1 objective.  Bland's rule guarantees termination.
    """
    m = len(a_rows)
    if m == 0:
        return []
    n = len(a_rows[0])
    # columns: u (n) | w (n) | slack (m) | artificial (m)
    ncols = 2 * n + 2 * m
    tableau = []
    basis = []
    for i, (row, bi) in enumerate(zip(a_rows, b)):
        row = [Fraction(v) for v in row]
        bi = Fraction(bi)
        # A x - s = b  with s >= 0
        coeffs = row + [-v for v in row] + [Fraction(0)] * (2 * m)
        coeffs[2 * n + i] = Fraction(-1)
        if bi < 0:
            coeffs = [-v for v in coeffs]
            bi = -bi
        coeffs[2 * n + m + i] = Fraction(1)
        tableau.append(coeffs + [bi])
        basis.append(2 * n + m + i)
    # phase-1 objective: minimize sum of artificials
    obj = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        for j in range(ncols + 1):
            obj[j] -= tableau[i][j]
    # columns of artificials start with cost 1 - 1 = 0 netted out below
    for i in range(m):
        obj[2 * n + m + i] = Fraction(0)

    def pivot(r, c):
        inv = Fraction(1) / tableau[r][c]
        tableau[r] = [v * inv for v in tableau[r]]
        for i in range(m):
            if i != r and tableau[i][c]:
                f = tableau[i][c]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[r])]
        f = obj[c]
        if f:
            for j in range(ncols + 1):
                obj[j] -= f * tableau[r][j]
        basis[r] = c

    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if tableau[i][enter] > 0:
                ratio = tableau[i][ncols] / tableau[i][enter]
                if best is None or ratio < best[0] or (
                    ratio == best[0] and basis[i] < basis[best[1]]
                ):
                    best = (ratio, i)
        if best is None:
            return None  # unbounded phase-1: cannot happen, but stay safe
        pivot(best[1], enter)

    infeasibility = sum(
        (tableau[i][ncols] for i in range(m) if basis[i] >= 2 * n + m),
        Fraction(0),
    )
    if infeasibility != 0:
        return None
    x = [Fraction(0)] * (2 * n)
    for i, bv in enumerate(basis):
        if bv < 2 * n:
            x[bv] = tableau[i][ncols]
    return [x[j] - x[n + j] for j in range(n)]
