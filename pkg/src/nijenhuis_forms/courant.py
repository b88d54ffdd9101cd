"""Courant algebroids: a quadratic Lie algebra over a point and TM + T*M over R^m.

Sections of a rank-r bundle are tuples of r coefficients.  Over a point the
coefficients are rationals and every function is a constant; on R^m they are
polynomials, the first m components forming the vector field and the last m
the 1-form.  Fiber tensors are constant rational r x r matrices acting on
components (rows index the output).

Verification is exhaustive over basis triples for the point model and
sampled from a seeded generator for the standard model.  Every report names
the regime that produced it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg
from .errors import InputError, PreconditionError
from .funcalg import Poly
from .graded import GradedVectorSpace, fraction_str, to_fraction
from .liealg import LieAlgebra
from .opforms import ZERO, GElem, OpForm, OpSum, rn
from .report import Report, Residual, combine
from .symforms import FormSum, SymValForm, linear_form

HALF = Fraction(1, 2)


class Section:
    """A section given by its components in a fixed local frame."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        self.comps = tuple(comps)

    def __add__(self, other):
        if not other:
            return self
        return Section(a + b for a, b in zip(self.comps, other.comps))

    __radd__ = __add__

    def __neg__(self):
        return Section(-a for a in self.comps)

    def __sub__(self, other):
        return self + (-other) if other else self

    def __mul__(self, c):
        """Scale by a number or by a function."""
        return Section(a * c for a in self.comps)

    def __bool__(self):
        return any(bool(a) for a in self.comps)

    def __eq__(self, other):
        if not other:
            return not self
        return isinstance(other, Section) and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return "(" + ", ".join(map(str, self.comps)) + ")"

    def to_json(self):
        return [fraction_str(a) if isinstance(a, Fraction) else a.to_json() for a in self.comps]


def _is_scalar_matrix(M):
    c = M[0][0]
    return all(M[i][j] == (c if i == j else 0) for i in range(len(M)) for j in range(len(M))), c


class CourantModel:
    """Operations shared by every model; subclasses supply the primitives."""

    rank: int
    pairing_matrix: list
    kind = "abstract"

    # primitives
    def dorfman(self, X: Section, Y: Section) -> Section:
        raise NotImplementedError

    def anchor(self, X: Section, f):
        """rho(X) f."""
        raise NotImplementedError

    def pairing(self, X: Section, Y: Section):
        raise NotImplementedError

    def D(self, f) -> Section:
        raise NotImplementedError

    def function(self, c):
        raise NotImplementedError

    # derived operations
    def zero_section(self) -> Section:
        z = self.function(0)
        return Section([z] * self.rank)

    def unit_section(self, a: int) -> Section:
        return Section([self.function(int(b == a)) for b in range(self.rank)])

    def bracket(self, X, Y) -> Section:
        """Skew-symmetrized bracket [X,Y] = (X o Y - Y o X) / 2."""
        return (self.dorfman(X, Y) - self.dorfman(Y, X)) * HALF

    def apply(self, N, X: Section) -> Section:
        zero = self.function(0)
        out = []
        for row in N:
            acc = zero
            for c, a in zip(row, X.comps):
                if c and a:
                    acc = acc + a * c
            out.append(acc)
        return Section(out)

    def transpose(self, N) -> list:
        """N* with <N X, Y> = <X, N* Y>."""
        P = self.pairing_matrix
        return linalg.matmul(linalg.inverse(P), linalg.matmul(linalg.transpose(N), P))

    def is_casimir(self, f) -> bool:
        return all(not self.anchor(self.unit_section(a), f) for a in range(self.rank))

    def deformed(self, N) -> "DeformedCourant":
        return DeformedCourant(self, N)

    # sampling
    def cases(self, samples: int, seed: int):
        """(label, X, Y, Z, f) tuples and the regime they represent."""
        raise NotImplementedError

    def casimir_sample(self, rng):
        return self.function(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))


class PointCourant(CourantModel):
    """A Lie algebra with a symmetric nondegenerate pairing, over a point (rho = 0)."""

    kind = "point"

    def __init__(self, g: LieAlgebra, pairing):
        P = linalg.fmatrix(pairing)
        if len(P) != g.dim or any(len(r) != g.dim for r in P):
            raise InputError("pairing matrix must be dim x dim")
        if P != linalg.transpose(P):
            raise InputError("pairing must be symmetric")
        if linalg.rank(P) != g.dim:
            raise InputError("pairing must be nondegenerate")
        self.g, self.pairing_matrix, self.rank = g, P, g.dim

    @classmethod
    def with_killing_form(cls, g: LieAlgebra):
        return cls(g, g.killing())

    @property
    def labels(self):
        return self.g.labels

    def dorfman(self, X, Y):
        return Section(self.g.bracket(X.comps, Y.comps))

    def anchor(self, X, f):
        return Fraction(0)

    def pairing(self, X, Y):
        P = self.pairing_matrix
        return sum((X.comps[a] * P[a][b] * Y.comps[b] for a in range(self.rank) for b in range(self.rank)
                    if X.comps[a] and Y.comps[b]), Fraction(0))

    def D(self, f):
        return self.zero_section()

    def function(self, c):
        return to_fraction(c)

    def cases(self, samples=None, seed=None):
        basis = [self.unit_section(a) for a in range(self.rank)]
        one = Fraction(1)
        out = [((self.labels[i], self.labels[j], self.labels[k]), basis[i], basis[j], basis[k], one)
               for i, j, k in itertools.product(range(self.rank), repeat=3)]
        return out, "exhaustive"

    def to_json(self):
        return {"kind": "point", "lie_algebra": self.g.to_json(),
                "pairing": [[fraction_str(c) for c in row] for row in self.pairing_matrix]}


class StandardCourant(CourantModel):
    """TM + T*M over R^m with polynomial sections and the Dorfman bracket.

    The pairing is ``scale * (eta(X) + xi(Y))`` with ``scale = 1/2`` by default.
    D is fixed by <D f, X> = rho(X) f, which gives D f = (0, df / scale).
    """

    kind = "standard"

    def __init__(self, m: int, degree_cap: int = 3, pairing_scale=HALF, cap: int | None = None):
        if m < 1:
            raise InputError("dimension must be positive")
        self.m, self.rank, self.degree_cap = m, 2 * m, degree_cap
        self.scale = to_fraction(pairing_scale)
        if not self.scale:
            raise InputError("pairing scale must be nonzero")
        self.cap = cap if cap is not None else 4 * degree_cap + 4
        z, s = Fraction(0), self.scale
        self.pairing_matrix = [[s if abs(a - b) == m and (a < m) != (b < m) else z for b in range(2 * m)]
                               for a in range(2 * m)]

    @property
    def labels(self):
        return tuple(f"d/dx{i}" for i in range(self.m)) + tuple(f"dx{i}" for i in range(self.m))

    def function(self, c):
        if isinstance(c, Poly):
            return c.with_cap(self.cap) if c.cap != self.cap else c
        return Poly.const(self.m, c, self.cap)

    def section(self, vector=(), form=()) -> Section:
        vector = list(vector) or [0] * self.m
        form = list(form) or [0] * self.m
        if len(vector) != self.m or len(form) != self.m:
            raise InputError(f"sections of TM + T*M over R^{self.m} have {self.m} + {self.m} components")
        return Section(self.function(c) for c in vector + form)

    def split(self, X):
        return X.comps[:self.m], X.comps[self.m:]

    def dorfman(self, X, Y):
        """(X, xi) o (Y, eta) = ([X, Y], L_X eta - i_Y d xi)."""
        m = self.m
        Xv, xi = self.split(X)
        Yv, eta = self.split(Y)
        zero = self.function(0)
        vec = []
        for i in range(m):
            acc = zero
            for j in range(m):
                acc = acc + Xv[j] * Yv[i].diff(j) - Yv[j] * Xv[i].diff(j)
            vec.append(acc)
        form = []
        for i in range(m):
            acc = zero
            for j in range(m):
                acc = acc + Xv[j] * eta[i].diff(j) + eta[j] * Xv[j].diff(i)
                acc = acc - Yv[j] * (xi[i].diff(j) - xi[j].diff(i))
            form.append(acc)
        return Section(vec + form)

    def anchor(self, X, f):
        f = self.function(f)
        acc = self.function(0)
        for i, a in enumerate(X.comps[:self.m]):
            if a:
                acc = acc + a * f.diff(i)
        return acc

    def pairing(self, X, Y):
        Xv, xi = self.split(X)
        Yv, eta = self.split(Y)
        acc = self.function(0)
        for i in range(self.m):
            acc = acc + eta[i] * Xv[i] + xi[i] * Yv[i]
        return acc * self.scale

    def D(self, f):
        f = self.function(f)
        zero = self.function(0)
        return Section([zero] * self.m + [f.diff(i) * (1 / self.scale) for i in range(self.m)])

    def random_function(self, rng, density=0.4):
        from .sampling import random_poly
        return random_poly(rng, self.m, self.degree_cap, self.cap, density)

    def random_section(self, rng, density=0.4):
        return Section(self.random_function(rng, density) for _ in range(self.rank))

    def cases(self, samples=100, seed=0):
        rng = random.Random(seed)
        out = []
        for i in range(samples):
            X, Y, Z = (self.random_section(rng) for _ in range(3))
            out.append(((f"sample {i}", "X", "Y", "Z", "f"), X, Y, Z, self.random_function(rng)))
        return out, f"sampled (seed={seed}, samples={samples}, degree<={self.degree_cap})"

    def to_json(self):
        return {"kind": "standard", "m": self.m, "degree_cap": self.degree_cap,
                "pairing_scale": fraction_str(self.scale)}


class DeformedCourant(CourantModel):
    """(E, o^N, rho^N, <.,.>) for a constant fiber tensor N."""

    def __init__(self, base: CourantModel, N):
        N = linalg.fmatrix(N)
        if len(N) != base.rank or any(len(r) != base.rank for r in N):
            raise InputError(f"fiber tensor must be {base.rank} x {base.rank}")
        self.base, self.N = base, N
        self.rank, self.pairing_matrix, self.kind = base.rank, base.pairing_matrix, base.kind
        self._Nt = base.transpose(N)

    @property
    def labels(self):
        return self.base.labels

    def dorfman(self, X, Y):
        b, N = self.base, self.N
        return b.dorfman(b.apply(N, X), Y) + b.dorfman(X, b.apply(N, Y)) - b.apply(N, b.dorfman(X, Y))

    def anchor(self, X, f):
        return self.base.anchor(self.base.apply(self.N, X), f)

    def pairing(self, X, Y):
        return self.base.pairing(X, Y)

    def D(self, f):
        # <N* D f, X> = <D f, N X> = rho(N X) f
        return self.base.apply(self._Nt, self.base.D(f))

    def function(self, c):
        return self.base.function(c)

    def cases(self, samples=100, seed=0):
        return self.base.cases(samples, seed)

    def casimir_sample(self, rng):
        return self.base.casimir_sample(rng)

    def to_json(self):
        return {"kind": "deformed", "base": self.base.to_json(),
                "N": [[fraction_str(c) for c in row] for row in self.N]}


# --------------------------------------------------------------------- checks


def _residual_report(name, regime, items) -> Report:
    """items yields (inputs, value); the first nonzero value becomes the witness."""
    count = 0
    for inputs, value in items:
        count += 1
        if value:
            return Report(name, False, regime, [Residual(name, tuple(inputs), value)], {"evaluated": count})
    return Report(name, True, regime, [], {"evaluated": count})


def check_courant_axioms(model: CourantModel, samples: int = 100, seed: int = 0) -> Report:
    """Axioms (i)-(iii) plus their standard consequences on the model's cases."""
    cases, regime = model.cases(samples, seed)
    o, rho, pr, D = model.dorfman, model.anchor, model.pairing, model.D
    rng = random.Random(seed + 1)

    def leibniz():
        for lab, X, Y, Z, _ in cases:
            yield lab, o(X, o(Y, Z)) - o(o(X, Y), Z) - o(Y, o(X, Z))

    def invariance():
        for lab, X, Y, Z, _ in cases:
            yield lab, rho(X, pr(Y, Z)) - pr(o(X, Y), Z) - pr(Y, o(X, Z))

    def symmetric_part():
        for lab, X, Y, Z, _ in cases:
            yield lab, rho(X, pr(Y, Z)) - pr(X, o(Y, Z)) - pr(X, o(Z, Y))

    def leibniz_rule():
        for lab, X, Y, _, f in cases:
            yield lab, o(X, Y * f) - o(X, Y) * f - Y * rho(X, f)

    def skew_rule():
        for lab, X, Y, _, f in cases:
            yield lab, (model.bracket(X, Y * f) - model.bracket(X, Y) * f - Y * rho(X, f)
                        + D(f) * (pr(X, Y) * HALF))

    def d_dual():
        for lab, X, _, _, f in cases:
            yield lab, pr(D(f), X) - rho(X, f)

    def casimir():
        for lab, X, Y, _, _ in cases:
            c = model.casimir_sample(rng)
            lhs = o(X, Y) * c
            yield lab, (o(X * c, Y) - lhs) + (o(X, Y * c) - lhs)

    reports = [
        _residual_report("(i) Leibniz identity", regime, leibniz()),
        _residual_report("(ii) rho(X)<Y,Z> = <X o Y, Z> + <Y, X o Z>", regime, invariance()),
        _residual_report("(iii) rho(X)<Y,Z> = <X, Y o Z> + <X, Z o Y>", regime, symmetric_part()),
        _residual_report("X o (fY) = f X o Y + (rho(X) f) Y", regime, leibniz_rule()),
        _residual_report("[X, fY] = f[X,Y] + (rho(X) f) Y - 1/2 <X,Y> D f", regime, skew_rule()),
        _residual_report("<D f, X> = rho(X) f", regime, d_dual()),
        _residual_report("Casimir functions factor out of o", regime, casimir()),
    ]
    rep = combine("courant axioms", reports, regime, seed=seed, model=model.to_json())
    checks = rep.details["checks"]
    rep.details["pre_courant"] = all(v for k, v in checks.items() if not k.startswith("(i)"))
    rep.details["anchor_nonzero_dense"] = model.kind != "point"
    return rep


def recover_anchor(model: CourantModel, X: Section, f):
    """rho(X) f read off from X o (f e_0) - f (X o e_0) = (rho(X) f) e_0."""
    e = model.unit_section(0)
    return (model.dorfman(X, e * f) - model.dorfman(X, e) * f).comps[0]


# ------------------------------------------------------------ torsion, deform


def torsion(model: CourantModel, N) -> Callable:
    """T(X, Y) = NX o NY - N(X o^N Y)."""
    deformed = model.deformed(N)

    def T(X, Y):
        return model.dorfman(model.apply(N, X), model.apply(N, Y)) - model.apply(N, deformed.dorfman(X, Y))
    return T


def sum_with_transpose(model, N):
    return linalg.add(N, model.transpose(N))


def scalar_part(model, N):
    """c when N + N* = c Id, else None."""
    ok, c = _is_scalar_matrix(sum_with_transpose(model, N))
    return c if ok else None


@dataclass
class Deformation:
    deformed: DeformedCourant
    torsion: Callable
    lam: Fraction | None
    gamma: Fraction | None
    predicates: dict
    report: Report


def deform_and_torsion(model: CourantModel, N, lam=None, samples: int = 100, seed: int = 0) -> Deformation:
    N = linalg.fmatrix(N)
    cases, regime = model.cases(samples, seed)
    deformed = model.deformed(N)
    NN = deformed.deformed(N)
    N2 = model.deformed(linalg.matmul(N, N))
    T = torsion(model, N)
    found = scalar_part(model, N)
    lam = found if lam is None else to_fraction(lam)
    gamma = scalar_part(model, linalg.matmul(N, N))
    predicates = {
        "N + N* = lambda Id": found is not None and found == lam,
        "N^2 + (N^2)* = gamma Id": gamma is not None,
        "lambda is a Casimir": lam is not None and model.is_casimir(model.function(lam)),
    }

    def torsion_identity():
        for lab, X, Y, _, _ in cases:
            yield lab, T(X, Y) - (NN.dorfman(X, Y) - N2.dorfman(X, Y)) * HALF

    reports = [_residual_report("T = 1/2 (o^{N,N} - o^{N^2})", regime, torsion_identity())]
    torsion_free = _residual_report("torsion vanishes", regime,
                                    ((lab, T(X, Y)) for lab, X, Y, _, _ in cases))
    if predicates["N + N* = lambda Id"]:
        M = linalg.add(linalg.scalar_matrix(model.rank, lam), N, -1)
        reports.append(_residual_report(
            "D^N = (-N + lambda Id) D", regime,
            ((lab, deformed.D(f) - model.apply(M, model.D(f))) for lab, _, _, _, f in cases)))
    details = {"torsion_vanishes": torsion_free.passed, "predicates": predicates,
               "lambda": lam, "gamma": gamma}
    if not torsion_free.passed:
        details["torsion_witness"] = torsion_free.witness
    if torsion_free.passed and all(predicates.values()):
        axioms = check_courant_axioms(deformed, samples, seed)
        axioms.name = "deformed structure is Courant"
        reports.append(axioms)
    rep = combine("deformation by N", reports, regime, **details)
    return Deformation(deformed, T, lam, gamma, predicates, rep)


# ------------------------------------------------------ associated Lie 2-algebra


LITERAL_L3_SIGN = 1


def associated_lie2(model: CourantModel, l3_sign: int = -1) -> OpSum:
    """l1 + l2 + l3 on C(M) (degree -2) + Gamma(E) (degree -1), evaluated on GElems.

    l1 f = D f, l2(X, Y) = [X, Y], l2(X, f) = 1/2 <X, D f> and
    l3 = l3_sign/12 (<X o Y - Y o X, Z> + c.p.).  With l1 and l2 fixed this way the
    generalized Jacobi identities need l3_sign = -1 once the anchor is nonzero;
    ``LITERAL_L3_SIGN`` gives the other sign, which only works over a point.
    """
    o, pr = model.dorfman, model.pairing
    coeff = Fraction(l3_sign, 12)

    def l1(x):
        return GElem(-1, model.D(x.value)) if x.degree == -2 else ZERO

    def l2(x, y):
        if x.degree == -1 and y.degree == -1:
            return GElem(-1, model.bracket(x.value, y.value))
        if {x.degree, y.degree} == {-1, -2}:
            X, f = (x.value, y.value) if x.degree == -1 else (y.value, x.value)
            return GElem(-2, pr(X, model.D(f)) * HALF)
        return ZERO

    def l3(x, y, z):
        if x.degree == y.degree == z.degree == -1:
            X, Y, Z = x.value, y.value, z.value
            total = sum((pr(o(a, b) - o(b, a), c) for a, b, c in ((X, Y, Z), (Y, Z, X), (Z, X, Y))),
                        model.function(0))
            return GElem(-2, total * coeff)
        return ZERO

    return OpSum(1, [OpForm(1, 1, l1, "l1"), OpForm(2, 1, l2, "l2"), OpForm(3, 1, l3, "l3")])


def l3_closed_form(model: CourantModel) -> OpForm:
    """1/2 <[X,Y], Z>, which the 1/12 formula reduces to when the pairing is invariant and rho = 0."""
    def fn(x, y, z):
        if x.degree == y.degree == z.degree == -1:
            return GElem(-2, model.pairing(model.bracket(x.value, y.value), z.value) * HALF)
        return ZERO
    return OpForm(3, 1, fn, "l3 closed form")


def lie2_space(model: PointCourant) -> GradedVectorSpace:
    if "1" in model.labels:
        raise InputError("label '1' is reserved for the constant function")
    return GradedVectorSpace([(-2, ["1"]), (-1, list(model.labels))])


def _to_gelem(model, V, s):
    if V.slot_degree[s] == -2:
        return GElem(-2, Fraction(1))
    return GElem(-1, model.unit_section(s - V.slots(-1).start))


def _from_gelem(V, x) -> dict:
    if not x:
        return {}
    if x.degree == -2:
        return {V.slots(-2).start: x.value}
    start = V.slots(-1).start
    return {start + a: c for a, c in enumerate(x.value.comps) if c}


def tabulate(model: PointCourant, forms, degree: int | None = None) -> FormSum:
    """Exact FormSum on R + g from OpForms (point model only)."""
    if model.kind != "point":
        raise InputError("only point models have a finite basis")
    V = lie2_space(model)
    forms = list(forms)
    deg = forms[0].degree if degree is None else degree
    parts = [SymValForm.from_function(V, f.arity, f.degree,
                                      (lambda f: lambda mono: _from_gelem(V, f(*(_to_gelem(model, V, s) for s in mono))))(f))
             for f in forms]
    return FormSum(V, deg, parts)


def fiber_form(model: CourantModel, N, lam) -> OpForm:
    """The degree-0 unary form: lambda on functions, N on sections."""
    lam = to_fraction(lam)

    def fn(x):
        if x.degree == -2:
            return GElem(-2, x.value * lam)
        return GElem(-1, model.apply(N, x.value))
    return OpForm(1, 0, fn, "N")


def skew_two_form(model: CourantModel, A) -> OpForm:
    """alpha(X, Y) = sum A[a][b] X_a Y_b for a skew matrix A, valued in functions."""
    A = linalg.fmatrix(A)
    if A != [[-c for c in row] for row in linalg.transpose(A)]:
        raise InputError("alpha needs a skew-symmetric matrix")

    def fn(x, y):
        if x.degree == y.degree == -1:
            acc = model.function(0)
            for a, b in itertools.product(range(model.rank), repeat=2):
                if A[a][b] and x.value.comps[a] and y.value.comps[b]:
                    acc = acc + x.value.comps[a] * y.value.comps[b] * A[a][b]
            return GElem(-2, acc)
        return ZERO
    return OpForm(2, 0, fn, "alpha")


def _graded_tuples(model, cases, n):
    """Each case gives one argument tuple per degree pattern of length n."""
    for lab, X, Y, Z, f in cases:
        secs = [X, Y, Z, X + Y]
        funs = [f, f * f + model.function(1)]
        for k in range(n + 1):  # k functions, n - k sections
            args = [GElem(-2, funs[i % 2]) for i in range(k)] + [GElem(-1, secs[i % 4]) for i in range(n - k)]
            yield lab, tuple(args)


def _minus(a, b):
    if not b:
        return a
    return -b if not a else a - b


def _compare_report(name, model, cases, regime, lhs: OpSum, rhs: OpSum, arities) -> Report:
    L = {a: lhs.part(a) for a in arities}
    R = {a: rhs.part(a) for a in arities}

    def items():
        for a in arities:
            for lab, args in _graded_tuples(model, cases, a):
                yield (lab, f"arity {a}", tuple(x.degree for x in args)), _minus(L[a](*args), R[a](*args))
    return _residual_report(name, regime, items())


def check_associated_lie2(model: CourantModel, samples: int = 50, seed: int = 0) -> Report:
    """Exact check_linfty for the point model; sampled generalized Jacobi otherwise."""
    mu = associated_lie2(model)
    if model.kind == "point":
        from .linfty import check_linfty
        rep = check_linfty(tabulate(model, mu.forms))
        rep.details["regime"] = "exhaustive"
        return rep
    from .opforms import generalized_jacobi
    cases, regime = model.cases(samples, seed)

    def items():
        for n in (1, 2, 3, 4):
            for lab, args in _graded_tuples(model, cases, n):
                yield (lab, f"n={n}", tuple(x.degree for x in args)), generalized_jacobi(mu, args)
    rep = _residual_report("associated Lie 2-algebra: generalized Jacobi", regime, items())
    return rep


def lemma_deformed_lie2(model: CourantModel, N, lam, samples: int = 100, seed: int = 0) -> Report:
    """Lie 2-algebra of (o^N, rho^N) equals [calN, l1 + l2 + l3] arity by arity."""
    mu = associated_lie2(model)
    lhs = associated_lie2(model.deformed(N))
    rhs = rn(fiber_form(model, N, lam), mu)
    cases, regime = model.cases(samples, seed)
    return _compare_report("l^N_i = [calN, l_i]", model, cases, regime, lhs, rhs, (1, 2, 3))


# ------------------------------------------------------------------ lifting


@dataclass
class Lift:
    calN: OpForm
    calK: OpForm
    K: list
    lam: Fraction | None
    gamma: Fraction | None
    report: Report
    verdict: object = None
    details: dict = field(default_factory=dict)


def lift_tensor(model: CourantModel, N, lam=None, gamma=None, samples: int = 100, seed: int = 0) -> Lift:
    """Lift a torsion-free N with N + N* = lambda Id to a Nijenhuis form with square calK."""
    N = linalg.fmatrix(N)
    K = linalg.matmul(N, N)
    dfm = deform_and_torsion(model, N, lam, samples, seed)
    lam = dfm.lam
    gamma_found = dfm.gamma
    gamma = gamma_found if gamma is None else to_fraction(gamma)
    regime = dfm.report.regime
    preds = dict(dfm.predicates)
    preds["N^2 + (N^2)* = gamma Id"] = gamma_found is not None and gamma_found == gamma
    preds["gamma is a Casimir"] = gamma is not None and model.is_casimir(model.function(gamma))
    preds["torsion vanishes"] = dfm.report.details["torsion_vanishes"]
    pred_reports = [Report(k, v, regime) for k, v in preds.items()]
    calN = fiber_form(model, N, lam if lam is not None else 0)
    calK = fiber_form(model, K, gamma if gamma is not None else 0)
    failed = [k for k, v in preds.items() if not v]
    if failed:
        rep = combine("lift of N", pred_reports, regime, rejected_at=failed[0])
        return Lift(calN, calK, K, lam, gamma, rep)

    expected_K = linalg.add(linalg.scalar_matrix(model.rank, (gamma - lam * lam) / 2),
                            [[lam * c for c in row] for row in N])
    reports = pred_reports + [Report("N^2 = lambda N + (gamma - lambda^2)/2 Id", expected_K == K, "exact")]
    reports.append(lemma_deformed_lie2(model, N, lam, samples, seed))
    verdict = None
    mu = associated_lie2(model)
    if model.kind == "point":
        from .linfty import nijenhuis_classify
        V = lie2_space(model)
        tN, tK = tabulate(model, [calN]), tabulate(model, [calK])
        verdict = nijenhuis_classify(tN, tabulate(model, mu.forms), [("calK", tK)], defaults=False)
        reports.append(Report("calN Nijenhuis with square calK", verdict.is_nijenhuis and verdict.square == tK,
                              "exhaustive", list(verdict.residuals), {"space": V.to_json()}))
    else:
        cases, _ = model.cases(samples, seed)
        NNmu = rn(calN, rn(calN, mu))
        Kmu = rn(calK, mu)
        reports.append(_compare_report("[calN, [calN, mu]] = [calK, mu]", model, cases, regime,
                                       NNmu, Kmu, (1, 2, 3)))
        reports.append(_compare_report("[calN, calK] = 0", model, cases, regime,
                                       rn(calN, calK), OpSum(0, []), (1,)))
    rep = combine("lift of N", reports, regime, lam=lam, gamma=gamma)
    return Lift(calN, calK, K, lam, gamma, rep, verdict)


def quadruple_conditions(model: CourantModel, N, K, lam, gamma, samples: int = 100, seed: int = 0) -> Report:
    """The five conditions pairing (N, K, lambda, gamma) with Nijenhuis forms, plus the Casimir hypotheses."""
    N, K = linalg.fmatrix(N), linalg.fmatrix(K)
    lam, gamma = to_fraction(lam), to_fraction(gamma)
    cases, regime = model.cases(samples, seed)
    NN, oK, oN = model.deformed(N).deformed(N), model.deformed(K), model.deformed(N)
    I = linalg.identity(model.rank)

    def leibniz(mdl):
        o = mdl.dorfman
        for lab, X, Y, Z, _ in cases:
            yield lab, o(X, o(Y, Z)) - o(o(X, Y), Z) - o(Y, o(X, Z))

    reports = [
        _residual_report("o^{N,N} = o^K", regime,
                         ((lab, NN.dorfman(X, Y) - oK.dorfman(X, Y)) for lab, X, Y, _, _ in cases)),
        Report("NK - KN = 0", linalg.matmul(N, K) == linalg.matmul(K, N), "exact"),
        Report("N + N* = lambda Id", sum_with_transpose(model, N) == [[lam * c for c in r] for r in I], "exact"),
        Report("K + K* = gamma Id", sum_with_transpose(model, K) == [[gamma * c for c in r] for r in I], "exact"),
        _residual_report("(Gamma(E), o^N) is Leibniz", regime, leibniz(oN)),
        _residual_report("(Gamma(E), o^K) is Leibniz", regime, leibniz(oK)),
        Report("lambda and gamma are Casimir", model.is_casimir(model.function(lam))
               and model.is_casimir(model.function(gamma)), "exact"),
    ]
    return combine("quadruple conditions", reports, regime)


def rigidity_witness(model: CourantModel, N, lam, alpha, samples: int = 100, seed: int = 0) -> Report:
    """Sample the skew-bracket rule for B = [lambda + N + alpha, mu]; alpha != 0 should break it.

    The rule is B2(X, fY) = f B2(X,Y) + 2 B2(X,f) Y - 1/2 <X,Y> B1(f).  A failing
    report carries the first violating sample as its witness.
    """
    if model.kind == "point":
        raise PreconditionError("the rigidity statement needs an anchor that is nonzero on a dense set")
    mu = associated_lie2(model)
    calN = OpSum(0, [fiber_form(model, N, lam), skew_two_form(model, alpha)])
    B = rn(calN, mu)
    B1, B2 = B.part(1), B.part(2)
    cases, regime = model.cases(samples, seed)

    def sec(g):
        return g.value if g else model.zero_section()

    def fun(g):
        return g.value if g else model.function(0)

    def items():
        for lab, X, Y, _, f in cases:
            x, y, F = GElem(-1, X), GElem(-1, Y), GElem(-2, f)
            yield lab, (sec(B2(x, GElem(-1, Y * f))) - sec(B2(x, y)) * f - Y * (fun(B2(x, F)) * 2)
                        + sec(B1(F)) * (model.pairing(X, Y) * HALF))

    rep = _residual_report("skew bracket rule for [lambda + N + alpha, mu]", regime, items())
    rep.details["alpha_is_zero"] = not any(c for row in linalg.fmatrix(alpha) for c in row)
    return rep


def random_compatible_tensor(model: CourantModel, rng: random.Random, lam) -> list:
    """lambda/2 Id + A with A* = -A, so that N + N* = lambda Id."""
    from .sampling import small_rational
    r = model.rank
    S = [[Fraction(0)] * r for _ in range(r)]
    for a in range(r):
        for b in range(a + 1, r):
            c = small_rational(rng)
            S[a][b], S[b][a] = c, -c
    A = linalg.matmul(linalg.inverse(model.pairing_matrix), S)
    return linalg.add(linalg.scalar_matrix(r, to_fraction(lam) / 2), A)
