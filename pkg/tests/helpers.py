"""Independent oracles shared by the tests (deliberately naive implementations)."""

from fractions import Fraction

import sympy


def cofactor_det(rows):
    """Laplace expansion along the first row; works for any ring elements."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def sym(rows):
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r]
                         for r in rows])


def sympy_rank(rows):
    return sym(rows).rank() if rows else 0


def sympy_left_nullity(rows):
    M = sym(rows)
    return len(M.T.nullspace())
