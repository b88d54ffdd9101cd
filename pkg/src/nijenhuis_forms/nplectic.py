"""Constant-coefficient n-plectic forms on R^m and their Lie n-algebras.

An element of degree j (-n <= j <= -1) is a GElem whose value is a PolyForm of
exterior degree n + j.  Degree -1 elements must be Hamiltonian; their vector
fields are solved for on demand and cached per space.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import linalg
from .errors import InputError, NotHamiltonian, PreconditionError
from .funcalg import Poly, PolyForm, PolyMultivector, contract, contract_many, d, lie_bracket
from .opforms import ZERO, GElem, OpForm, OpSum, euler, generalized_jacobi, insert, rn
from .report import Report, Residual, combine

SAMPLE_CAP = 10


@dataclass
class HamiltonianPair:
    alpha: PolyForm
    chi: PolyMultivector

    def verify(self, space: "MultisymplecticSpace") -> bool:
        return d(self.alpha) == -contract(self.chi, space.omega)

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_json(), "chi": self.chi.to_json()}

    @classmethod
    def from_json(cls, space: "MultisymplecticSpace", doc) -> "HamiltonianPair":
        try:
            pair = cls(PolyForm.from_json(space.m, doc["alpha"], SAMPLE_CAP),
                       PolyMultivector.from_json(space.m, doc["chi"], SAMPLE_CAP))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad Hamiltonian pair: {exc}") from exc
        if not pair.verify(space):
            raise InputError("Hamiltonian pair fails d alpha = -i_chi omega")
        return pair


class MultisymplecticSpace:
    """R^m with a constant closed nondegenerate (n+1)-form."""

    def __init__(self, m: int, n: int, omega: PolyForm, name: str = ""):
        if n < 1 or omega.m != m:
            raise InputError("need n >= 1 and omega on R^m")
        if omega.degrees - {n + 1}:
            raise InputError(f"omega must be an {n + 1}-form")
        if any(not p.is_constant() for p in omega.coeffs.values()):
            raise InputError("omega must have constant coefficients")
        if d(omega):
            raise PreconditionError("omega is not closed")
        self.m, self.n, self.omega, self.name = m, n, omega, name
        self.rows = list(itertools.combinations(range(m), n))
        # column j holds the coefficients of i_{d/dx_j} omega
        cols = [contract(PolyMultivector.partial(m, j), omega) for j in range(m)]
        self.matrix = [[_const(cols[j].coeffs.get(I)) for j in range(m)] for I in self.rows]
        self.rank = linalg.rank(self.matrix)
        if self.rank < m:
            raise PreconditionError(f"omega is degenerate: rank {self.rank} < {m}")
        # m independent rows give a left inverse of the contraction map
        _, pivots = linalg.rref(linalg.transpose(self.matrix))
        self._pivot_rows = [self.rows[r] for r in pivots]
        self._left_inverse = linalg.inverse([self.matrix[r] for r in pivots])
        self._cache: dict = {}

    def __repr__(self):
        return f"MultisymplecticSpace({self.name or 'R^%d' % self.m}, n={self.n})"

    def e_degree(self, form: PolyForm) -> int:
        return form.degree - self.n

    def element(self, form: PolyForm) -> GElem:
        """Wrap a homogeneous form as an element of E, checking E_{-1} membership."""
        deg = self.e_degree(form)
        if not -self.n <= deg <= -1:
            raise InputError(f"a {form.degree}-form is not in E (degrees -{self.n}..-1)")
        if deg == -1:
            self.chi(form)
        return GElem(deg, form)

    def chi(self, form: PolyForm) -> PolyMultivector:
        if form not in self._cache:
            self._cache[form] = hamiltonian_vector_field(form, self).chi
        return self._cache[form]

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "omega": self.omega.to_json(), "name": self.name}

    @classmethod
    def from_json(cls, doc) -> "MultisymplecticSpace":
        try:
            m, n = int(doc["m"]), int(doc["n"])
            omega = PolyForm.from_json(m, doc["omega"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad n-plectic document: {exc}") from exc
        return cls(m, n, omega, doc.get("name", ""))


def _const(p) -> Fraction:
    if p is None:
        return Fraction(0)
    return p.terms.get((0,) * p.m, Fraction(0))


def hamiltonian_vector_field(alpha: PolyForm, space: MultisymplecticSpace) -> HamiltonianPair:
    """Solve d alpha = -i_chi omega for chi; the solution is certified before returning."""
    if alpha.m != space.m or (alpha and alpha.degrees - {space.n - 1}):
        raise InputError(f"expected an {space.n - 1}-form on R^{space.m}")
    target = -d(alpha)
    zero = Poly.zero(space.m, SAMPLE_CAP)
    rhs = [target.coeffs.get(I, zero) for I in space._pivot_rows]
    comps = []
    for row in space._left_inverse:
        acc = zero
        for c, p in zip(row, rhs):
            if c and p:
                acc = acc + p * c
        comps.append(acc)
    chi = PolyMultivector.vector(comps)
    if contract(chi, space.omega) != target:
        raise NotHamiltonian(f"d alpha is not of the form -i_chi omega for alpha = {alpha!r}")
    return HamiltonianPair(alpha, chi)


def insert_all(vectors, form: PolyForm) -> PolyForm:
    """form(v_1, ..., v_k, ...): v_1 goes into the first slot."""
    return contract_many(list(vectors)[::-1], form)


SIGN_CONVENTIONS = ("literal", "graded")


def bracket_sign(k: int, convention: str = "literal") -> int:
    """literal: (-1)^{k/2+1} for even k, (-1)^{(k-1)/2} for odd k.  graded: (-1)^k.

    The two agree for k <= 3, so they give the same structure when n <= 2.
    """
    if convention == "graded":
        return -1 if k % 2 else 1
    if convention != "literal":
        raise InputError(f"unknown sign convention {convention!r}")
    e = k // 2 + 1 if k % 2 == 0 else (k - 1) // 2
    return -1 if e % 2 else 1


@dataclass
class LieNAlgebra:
    space: MultisymplecticSpace
    brackets: dict
    convention: str = "literal"

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def mu(self) -> OpSum:
        return OpSum(1, [self.brackets[k] for k in sorted(self.brackets)])

    def l(self, k: int) -> OpForm:
        return self.brackets[k]


def build_lie_n(space: MultisymplecticSpace, convention: str = "literal") -> LieNAlgebra:
    """l1 = (-1)^{|a|} d off E_{-1}; l_k = sign(k) omega(chi_1, ..., chi_k, ...) on E_{-1}."""
    n = space.n

    def l1(x):
        if x.degree == -1:
            return ZERO
        return GElem(x.degree + 1, d(x.value) * (-1 if x.degree % 2 else 1))

    def lk(k):
        sign = bracket_sign(k, convention)

        def fn(*xs):
            if any(x.degree != -1 for x in xs):
                return ZERO
            val = insert_all([space.chi(x.value) for x in xs], space.omega)
            return GElem(1 - k, val * sign) if val else ZERO
        return OpForm(k, 1, fn, f"l{k}")

    brackets = {1: OpForm(1, 1, l1, "l1")}
    for k in range(2, n + 2):
        brackets[k] = lk(k)
    return LieNAlgebra(space, brackets, convention)


def poisson_bracket(space: MultisymplecticSpace, alpha: PolyForm, beta: PolyForm) -> PolyForm:
    """{alpha, beta} = omega(chi_alpha, chi_beta, ...)."""
    return insert_all([space.chi(alpha), space.chi(beta)], space.omega)


# ------------------------------------------------------------------ sampling


def random_form(rng: random.Random, m: int, k: int, max_deg: int = 2, density: float = 0.5) -> PolyForm:
    coeffs = {}
    for I in itertools.combinations(range(m), k):
        if rng.random() < density:
            terms = {e: Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2)))
                     for e in itertools.product(range(max_deg + 1), repeat=m)
                     if sum(e) <= max_deg and rng.random() < 0.3}
            coeffs[I] = Poly(m, terms, SAMPLE_CAP)
    return PolyForm(m, coeffs)


def random_hamiltonian(rng: random.Random, space: MultisymplecticSpace, max_deg: int = 2,
                       tries: int = 20) -> HamiltonianPair:
    """Rejection-sample a nonconstant Hamiltonian (n-1)-form, else fall back to an exact one."""
    m, n = space.m, space.n
    for _ in range(tries):
        alpha = random_form(rng, m, n - 1, max_deg)
        if not d(alpha):
            continue
        try:
            return hamiltonian_vector_field(alpha, space)
        except NotHamiltonian:
            continue
    alpha = d(random_form(rng, m, n - 2, max_deg)) if n >= 2 else PolyForm(m)
    return hamiltonian_vector_field(alpha, space)


@dataclass
class SamplePool:
    """Per-sample argument pools: Hamiltonian forms for degree -1, random forms below."""

    by_degree: dict
    label: str

    def tuple_for(self, pattern) -> tuple:
        used: dict = {}
        out = []
        for deg in pattern:
            i = used.get(deg, 0)
            used[deg] = i + 1
            out.append(self.by_degree[deg][i])
        return tuple(out)


def pool_width(n: int) -> int:
    """Enough elements per degree for Jacobi up to arity n+2 and for [eta~_n, eta~_n]."""
    return max(n + 3, 3 * n)


def sample_pools(space: MultisymplecticSpace, samples: int, seed: int, width: int | None = None):
    """Seeded pools; checks sharing (samples, seed) and the default width see the same elements."""
    rng = random.Random(seed)
    n = space.n
    width = width or pool_width(n)
    pools = []
    for s in range(samples):
        by_degree = {-1: [GElem(-1, random_hamiltonian(rng, space).alpha) for _ in range(width)]}
        for j in range(2, n + 1):
            by_degree[-j] = [GElem(-j, random_form(rng, space.m, n - j, 2, 0.7)) for _ in range(width)]
        pools.append(SamplePool(by_degree, f"sample {s}"))
    return pools


def degree_patterns(n: int, arity: int):
    return itertools.combinations_with_replacement(range(-1, -n - 1, -1), arity)


def regime_of(samples: int, seed: int) -> str:
    return f"sampled({samples}, {seed})"


def _residual_report(name, regime, items) -> Report:
    count = 0
    for inputs, value in items:
        count += 1
        if value:
            return Report(name, False, regime, [Residual(name, tuple(inputs), value)], {"evaluated": count})
    return Report(name, True, regime, [], {"evaluated": count})


def _minus(a, b):
    if not b:
        return a
    return -b if not a else a - b


def _compare(name, pools, regime, lhs, rhs, arities) -> Report:
    lhs, rhs = _as_sum(lhs), _as_sum(rhs)
    L = {a: lhs.part(a) for a in arities}
    R = {a: rhs.part(a) for a in arities}
    n = _pool_n(pools)

    def items():
        for pool in pools:
            for a in arities:
                for pattern in degree_patterns(n, a):
                    args = pool.tuple_for(pattern)
                    yield (pool.label, f"arity {a}", pattern), _minus(L[a](*args), R[a](*args))
    return _residual_report(name, regime, items())


def _pool_n(pools) -> int:
    return len(pools[0].by_degree) if pools else 1


def _as_sum(x) -> OpSum:
    if isinstance(x, OpSum):
        return x
    if isinstance(x, OpForm):
        return OpSum(x.degree, [x])
    return OpSum(0, [])


# ------------------------------------------------------------------ checks


def check_nplectic(space: MultisymplecticSpace, samples: int = 25, seed: int = 0,
                   convention: str = "literal") -> Report:
    """Generalized Jacobi identities of the Lie n-algebra on sampled tuples, arities 1..n+2."""
    alg = build_lie_n(space, convention)
    mu = alg.mu
    pools = sample_pools(space, samples, seed)
    regime = regime_of(samples, seed)
    n = space.n

    def items():
        for pool in pools:
            for a in range(1, n + 3):
                for pattern in degree_patterns(n, a):
                    args = pool.tuple_for(pattern)
                    yield (pool.label, f"arity {a}", pattern), generalized_jacobi(mu, args)
    jac = _residual_report("generalized Jacobi", regime, items())

    def hamiltonian_of_bracket():
        for pool in pools:
            a, b = pool.by_degree[-1][:2]
            h = poisson_bracket(space, a.value, b.value)
            yield (pool.label,), space.chi(h) - lie_bracket(space.chi(a.value), space.chi(b.value))

    def exact_chi_vanishes():
        for pool in pools[: 1 if n < 2 else None]:
            if n >= 2 and alg.l(1)(pool.by_degree[-2][0]):
                yield (pool.label,), space.chi(alg.l(1)(pool.by_degree[-2][0]).value)

    reports = [
        Report("omega nondegenerate", space.rank == space.m, "exact", [], {"rank": space.rank}),
        jac,
        _residual_report("chi of {a, b} = [chi_a, chi_b]", regime, hamiltonian_of_bracket()),
        _residual_report("chi of l1(E_-2) vanishes", regime, exact_chi_vanishes()),
    ]
    return combine("n-plectic Lie n-algebra", reports, regime, samples=samples, seed=seed, n=n, m=space.m,
                   rank=space.rank, convention=convention)


def tilde_eta(space: MultisymplecticSpace, eta: PolyForm, i: int) -> OpForm:
    """Arity-i degree-0 form: eta(chi_1, ..., chi_i, ...) on E_{-1} tuples, zero otherwise."""
    n = space.n
    if not 2 <= i <= n:
        raise InputError(f"i must lie in 2..{n}")
    if eta.m != space.m or (eta and eta.degrees - {n}):
        raise InputError(f"eta must be an {n}-form on R^{space.m}")

    def fn(*xs):
        if any(x.degree != -1 for x in xs):
            return ZERO
        val = insert_all([space.chi(x.value) for x in xs], eta)
        if val and val.degree != n - i:
            raise AssertionError("tilde eta left E_{-i}")
        return GElem(-i, val) if val else ZERO
    return OpForm(i, 0, fn, f"eta~{i}")


def _d_after(form: OpForm) -> OpForm:
    def fn(*xs):
        v = form(*xs)
        if not v:
            return ZERO
        dv = d(v.value)
        return GElem(v.degree + 1, dv) if dv else ZERO
    return OpForm(form.arity, 1, fn, f"d.{form.name}")


def _l1_after(alg: LieNAlgebra, form: OpForm) -> OpForm:
    return OpForm(form.arity, 1, lambda *xs: alg.l(1)(form(*xs)) if form(*xs) else ZERO, f"l1.{form.name}")


def lemma_items(alg: LieNAlgebra, eta_i: OpForm, pools, regime) -> list:
    """Items (1)-(3) of the eta lemma for one tilde eta, plus the literal d-composite comparison."""
    n, i = alg.n, eta_i.arity
    l1 = alg.l(1)
    reports = []

    def item1():
        for pool in pools:
            for pattern in degree_patterns(n, i):
                args = pool.tuple_for(pattern)
                yield (pool.label, pattern), eta_i(l1(args[0]), *args[1:])
    reports.append(_residual_report("eta~(l1(a1), a2, ...) = 0", regime, item1()))
    for m in range(3, n + 2):
        reports.append(_compare(f"[eta~, l{m}] = 0", pools, regime, rn(eta_i, alg.l(m)), None, (i + m - 1,)))
    minus_l2_into = OpSum(1, [insert(alg.l(2), eta_i)]) * -1
    reports.append(_compare("[eta~, l2] = -i_{l2} eta~", pools, regime, rn(eta_i, alg.l(2)), minus_l2_into, (i + 1,)))
    reports.append(_compare("[eta~, l1] = l1 o eta~", pools, regime, rn(eta_i, l1), _l1_after(alg, eta_i), (i,)))
    literal = _compare("[eta~, l1] = d o eta~", pools, regime, rn(eta_i, l1), _d_after(eta_i), (i,))
    for m in range(1, n + 2):
        lm = alg.l(m)
        reports.append(_compare(f"[eta~, [eta~, l{m}]] = 0", pools, regime, rn(eta_i, rn(eta_i, lm)), None,
                                (2 * i + m - 2,)))
    return reports, literal


@dataclass
class EtaVerdict:
    classification: str
    report: Report
    deformed: OpSum
    calN: OpSum
    calK: OpSum
    literal_d_matches: bool
    details: dict = field(default_factory=dict)


def check_nijen_eta(etas, space: MultisymplecticSpace, samples: int = 25, seed: int = 0,
                    degrees=None, convention: str = "literal") -> EtaVerdict:
    """S + sum of tilde eta^j_i is Nijenhuis with square S + 2 sum, on sampled tuples.

    ``degrees`` restricts the arities i used (default 2..n).  The deformed
    structure [calN, mu] is compared with mu + [eta~, l1] + [eta~, l2].
    """
    alg = build_lie_n(space, convention)
    n = space.n
    degrees = list(degrees or range(2, n + 1))
    tildes = [tilde_eta(space, eta, i) for eta in etas for i in degrees]
    top = max((t.arity for t in tildes), default=1)
    pools = sample_pools(space, samples, seed, width=max(pool_width(n), 2 * top + n))
    regime = regime_of(samples, seed)
    mu = alg.mu
    reports, literal_ok = [], True
    for t in tildes:
        items, literal = lemma_items(alg, t, pools, regime)
        reports.extend(items)
        literal_ok = literal_ok and literal.passed

    S = euler()
    calN = OpSum(0, [S] + tildes)
    calK = OpSum(0, [S] + [OpForm(t.arity, 0, (lambda t: lambda *xs: t(*xs) * 2 if t(*xs) else ZERO)(t),
                                  f"2{t.name}") for t in tildes])
    deformed = mu + OpSum(1, [f for t in tildes for f in rn(t, alg.l(1)).forms + rn(t, alg.l(2)).forms])
    NNmu = rn(calN, rn(calN, mu))
    Kmu = rn(calK, mu)
    arities = tuple(range(1, 2 * (top - 1) + n + 2))
    reports.append(_compare("[calN, mu] = mu + [eta~, l1] + [eta~, l2]", pools, regime,
                            rn(calN, mu), deformed, arities))
    reports.append(_compare("[calN, [calN, mu]] = [calK, mu]", pools, regime, NNmu, Kmu, arities))
    reports.append(_compare("[calN, calK] = 0", pools, regime, rn(calN, calK), None,
                            tuple(range(1, 2 * top))))
    rep = combine("S + eta~ Nijenhuis", reports, regime, samples=samples, seed=seed,
                  arities=degrees, etas=len(etas))
    weak = all(r.passed for r in reports if r.name == "[calN, [calN, mu]] = [calK, mu]")
    commutes = all(r.passed for r in reports if r.name == "[calN, calK] = 0")
    classification = "nijenhuis" if weak and commutes else ("coboundary" if weak else "none")
    rep.details["classification"] = classification
    rep.details["square"] = "S + 2 eta~"
    rep.details["literal_d_composite"] = literal_ok
    return EtaVerdict(classification, rep, deformed, calN, calK, literal_ok)


# ------------------------------------------------------------------ catalog spaces


def volume_form(m: int) -> MultisymplecticSpace:
    return MultisymplecticSpace(m, m - 1, PolyForm.dx(m, *range(m)), f"R^{m} volume")


def symplectic_r2() -> MultisymplecticSpace:
    return MultisymplecticSpace(2, 1, PolyForm.dx(2, 0, 1), "R^2 symplectic")


def symplectic(m: int) -> MultisymplecticSpace:
    if m % 2:
        raise InputError("symplectic needs even dimension")
    omega = PolyForm(m, {(2 * j, 2 * j + 1): 1 for j in range(m // 2)})
    return MultisymplecticSpace(m, 1, omega, f"R^{m} symplectic")


def contraction_rank(m: int, omega: PolyForm) -> int:
    """Rank of v -> i_v omega, without requiring nondegeneracy."""
    if not omega:
        return 0
    k = omega.degree - 1
    rows = list(itertools.combinations(range(m), k))
    cols = [contract(PolyMultivector.partial(m, j), omega) for j in range(m)]
    assert len(rows) == comb(m, k)
    return linalg.rank([[_const(cols[j].coeffs.get(I)) for j in range(m)] for I in rows])
