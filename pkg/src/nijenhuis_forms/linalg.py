"""Exact linear algebra on Fraction matrices (lists of rows), delegated to sympy."""

from __future__ import annotations

from fractions import Fraction

import sympy

from .errors import InputError


def _to_sym(M):
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in M])


def _to_frac(M) -> list:
    return [[Fraction(int(M[i, j].p), int(M[i, j].q)) for j in range(M.cols)] for i in range(M.rows)]


def rref(M) -> tuple:
    """(reduced rows, pivot columns); pivots are the canonical lowest-index ones."""
    if not M:
        return [], ()
    R, pivots = _to_sym(M).rref()
    return _to_frac(R), tuple(pivots)


def rank(M) -> int:
    return len(rref(M)[1]) if M and M[0] else 0


def nullspace(M, cols: int) -> list:
    """Basis of the kernel as a list of column vectors (lists)."""
    if not M:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    out = []
    for v in _to_sym(M).nullspace():
        out.append([Fraction(int(v[i].p), int(v[i].q)) for i in range(cols)])
    return out


def solve(A, b) -> list:
    """The unique solution x of A x = b; raises when none exists or it is not unique."""
    cols = len(A[0]) if A else 0
    As, bs = _to_sym(A), sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in b])
    sol, params = As.gauss_jordan_solve(bs)  # raises ValueError if inconsistent
    if params.shape[0]:
        raise InputError("linear system has no unique solution")
    return [Fraction(int(sol[i].p), int(sol[i].q)) for i in range(cols)]


def try_solve(A, b):
    try:
        return solve(A, b)
    except ValueError:
        return None


def inverse(M) -> list:
    S = _to_sym(M)
    if S.det() == 0:
        raise InputError("matrix is singular")
    return _to_frac(S.inv())


def matmul(A, B) -> list:
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def matvec(A, v) -> list:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def transpose(A) -> list:
    return [list(col) for col in zip(*A)] if A else []


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def scalar_matrix(n: int, c) -> list:
    return [[Fraction(c) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def add(A, B, b_coeff=1) -> list:
    return [[a + b_coeff * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def fmatrix(M) -> list:
    from .graded import to_fraction
    return [[to_fraction(c) for c in row] for row in M]
