"""Finite-dimensional Lie algebras given by structure constants."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import InputError
from .graded import fraction_str, to_fraction


class LieAlgebra:
    """[e_i, e_j] = sum_k c[i][j][k] e_k."""

    def __init__(self, constants, labels=None):
        d = len(constants)
        self.dim = d
        self.c = [[[to_fraction(x) for x in constants[i][j]] for j in range(d)] for i in range(d)]
        if any(len(constants[i]) != d or any(len(v) != d for v in constants[i]) for i in range(d)):
            raise InputError("structure constants must form a d x d x d array")
        self.labels = tuple(labels) if labels else tuple(f"e{i + 1}" for i in range(d))
        if len(self.labels) != d:
            raise InputError("label count differs from the dimension")

    @classmethod
    def from_brackets(cls, labels, brackets: Mapping):
        """Build from {(a, b): {c: coeff}} on labels; [b, a] is filled in by skew-symmetry."""
        labels = list(labels)
        idx = {lab: i for i, lab in enumerate(labels)}
        d = len(labels)
        c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for (a, b), out in brackets.items():
            for k, v in out.items():
                v = to_fraction(v)
                c[idx[a]][idx[b]][idx[k]] = v
                c[idx[b]][idx[a]][idx[k]] = -v
        return cls(c, labels)

    def bracket(self, u, v) -> list:
        d = self.dim
        out = [Fraction(0)] * d
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                row = self.c[i][j]
                for k in range(d):
                    if row[k]:
                        out[k] += a * b * row[k]
        return out

    def basis(self, i) -> list:
        return [Fraction(int(k == i)) for k in range(self.dim)]

    def skew_residual(self):
        for i in range(self.dim):
            for j in range(i, self.dim):
                if any(self.c[i][j][k] + self.c[j][i][k] for k in range(self.dim)):
                    return (i, j)
        return None

    def jacobi_residual(self):
        """First basis triple (i<j<k) violating Jacobi, with the residual vector, or None."""
        e = self.basis
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    r = [a + b + c for a, b, c in zip(self.bracket(self.bracket(e(i), e(j)), e(k)),
                                                      self.bracket(self.bracket(e(j), e(k)), e(i)),
                                                      self.bracket(self.bracket(e(k), e(i)), e(j)))]
                    if any(r):
                        return (i, j, k), r
        return None

    def is_lie(self) -> bool:
        return self.skew_residual() is None and self.jacobi_residual() is None

    def ad(self, i) -> list:
        """Matrix of ad_{e_i}, rows indexed by output."""
        return [[self.c[i][j][k] for j in range(self.dim)] for k in range(self.dim)]

    def killing(self) -> list:
        d = self.dim
        ads = [self.ad(i) for i in range(d)]
        return [[sum(ads[i][a][b] * ads[j][b][a] for a in range(d) for b in range(d)) for j in range(d)]
                for i in range(d)]

    def invariance_residual(self, pairing):
        """First (i, j, k) with <[e_i,e_j], e_k> + <e_j, [e_i,e_k]> != 0."""
        d = self.dim

        def pair(u, v):
            return sum(u[a] * pairing[a][b] * v[b] for a in range(d) for b in range(d))

        for i in range(d):
            for j in range(d):
                for k in range(d):
                    r = pair(self.bracket(self.basis(i), self.basis(j)), self.basis(k)) + \
                        pair(self.basis(j), self.bracket(self.basis(i), self.basis(k)))
                    if r:
                        return (i, j, k), r
        return None

    def to_json(self) -> dict:
        return {"labels": list(self.labels),
                "structure_constants": [[[fraction_str(x) for x in v] for v in row] for row in self.c]}

    @classmethod
    def from_json(cls, doc):
        try:
            return cls(doc["structure_constants"], doc.get("labels"))
        except (KeyError, TypeError, IndexError):
            raise InputError("lie algebra needs structure_constants c[i][j][k]") from None

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.c == other.c

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim})"


def abelian(d: int) -> LieAlgebra:
    return LieAlgebra.from_brackets([f"e{i + 1}" for i in range(d)], {})


def nonabelian_2d() -> LieAlgebra:
    return LieAlgebra.from_brackets(["e1", "e2"], {("e1", "e2"): {"e2": 1}})


def heisenberg() -> LieAlgebra:
    return LieAlgebra.from_brackets(["e1", "e2", "e3"], {("e1", "e2"): {"e3": 1}})


def sl2() -> LieAlgebra:
    return LieAlgebra.from_brackets(["h", "e", "f"], {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}})


def so3() -> LieAlgebra:
    return LieAlgebra.from_brackets(["e1", "e2", "e3"], {("e1", "e2"): {"e3": 1}, ("e2", "e3"): {"e1": 1},
                                                         ("e3", "e1"): {"e2": 1}})


def direct_sum(g: LieAlgebra, h: LieAlgebra, suffixes=("", "'")) -> LieAlgebra:
    d = g.dim + h.dim
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for i in range(g.dim):
        for j in range(g.dim):
            c[i][j][:g.dim] = g.c[i][j]
    for i in range(h.dim):
        for j in range(h.dim):
            c[g.dim + i][g.dim + j][g.dim:] = h.c[i][j]
    labels = [lab + suffixes[0] for lab in g.labels] + [lab + suffixes[1] for lab in h.labels]
    return LieAlgebra(c, labels)


def lie_algebra_structure(g: LieAlgebra, degree: int = -1):
    """g placed in one odd degree, with l2(e_i, e_j) = [e_i, e_j]."""
    from .graded import GradedVectorSpace
    from .symforms import FormSum, SymValForm
    if degree % 2 == 0:
        raise InputError("a Lie bracket becomes a symmetric form only in odd degree")
    E = GradedVectorSpace([(degree, list(g.labels))])
    table = {(i, j): {k: c for k, c in enumerate(g.c[i][j]) if c}
             for i in range(g.dim) for j in range(i + 1, g.dim)}
    return FormSum(E, 1, [SymValForm(E, 2, 1, table)])
