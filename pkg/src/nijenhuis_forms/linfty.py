"""L-infinity structures, deformations by degree-0 forms and Nijenhuis forms."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .errors import InputError, PreconditionError
from .graded import Element, koszul_sign, unshuffles
from .report import Report, Residual, first_residual
from .symforms import (
    FormSum,
    SymValForm,
    as_formsum,
    compose_unary,
    euler_form,
    identity_form,
    insertion,
    monomials,
    rn_bracket,
)


def generalized_jacobi(mu: FormSum, mono, curved: bool = False) -> dict:
    """Direct value of sum_{i+j=n+1} sum_{Sh(i,n-i)} eps l_j(l_i(...), ...) at a basis tuple."""
    deg = mu.space.slot_degree
    n = len(mono)
    acc: dict = defaultdict(Fraction)
    degrees = [deg[s] for s in mono]
    for i in range(0 if curved else 1, n + 1):
        j = n + 1 - i
        if i not in mu.parts or j not in mu.parts:
            continue
        li, lj = mu.parts[i], mu.parts[j]
        for sigma in unshuffles(i, n - i):
            xs = [mono[p] for p in sigma]
            sign = koszul_sign(sigma, degrees)
            for s, c in li.on_basis(xs[:i]).items():
                for o, d in lj.on_basis((s, *xs[i:])).items():
                    acc[o] += sign * c * d
    return {s: c for s, c in acc.items() if c}


def check_linfty(mu, curved: bool = False) -> Report:
    """[mu, mu] = 0, cross-checked against the generalized Jacobi identities."""
    mu = as_formsum(mu)
    if mu.parts and mu.degree != 1:
        raise InputError(f"an L-infinity structure has degree 1, got {mu.degree}")
    if 0 in mu.parts and not curved:
        raise InputError("structure has an arity-0 part; check it as a curved structure")
    square = rn_bracket(mu, mu)
    residuals = []
    agree = True
    top = 2 * mu.max_arity - 1
    for n in range(0 if curved else 1, max(top, 0) + 1):
        sq = square.part(n)
        for mono in monomials(mu.space, n, 2):
            direct = generalized_jacobi(mu, mono, curved)
            via_rn = sq.table.get(mono, {})
            if via_rn != {s: 2 * c for s, c in direct.items()}:
                agree = False
            if direct:
                labels = tuple(mu.space.labels[s] for s in mono)
                residuals.append(Residual(f"generalized Jacobi, arity {n}", labels, Element(mu.space, direct)))
    if bool(square) == (not residuals):
        agree = False
    passed = not square and not residuals
    details = {"methods_agree": agree, "curved": curved}
    return Report("L-infinity", passed, "exact", residuals[:1], details)


@dataclass
class LInftyStructure:
    """A (curved) L-infinity structure; curvature is checked on construction."""

    mu: FormSum
    curved: bool = False
    verified: bool = field(default=False, init=False)

    def __post_init__(self):
        self.mu = as_formsum(self.mu)
        if self.mu.parts and self.mu.degree != 1:
            raise InputError("L-infinity brackets must have degree 1")
        if 0 in self.mu.parts:
            self.curved = True
            l0 = self.mu.parts[0].element()
            if 1 in self.mu.parts and self.mu.parts[1](l0):
                raise PreconditionError("curvature is not l1-closed")

    def verify(self) -> Report:
        rep = check_linfty(self.mu, self.curved)
        self.verified = rep.passed
        return rep


def deform(mu, N) -> FormSum:
    """The deformation [N, mu] of mu by a degree-0 form N."""
    N, mu = as_formsum(N), as_formsum(mu)
    if N.parts and N.degree != 0:
        raise InputError("a deforming form has degree 0")
    return rn_bracket(N, mu)


@dataclass
class NijenhuisVerdict:
    deformer: FormSum
    square: FormSum | None
    square_name: str | None
    classification: str
    weak: bool
    coboundary: bool
    commutes: bool
    with_curvature: bool
    residuals: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def is_nijenhuis(self) -> bool:
        return self.classification == "nijenhuis"

    def to_json(self) -> dict:
        from .report import jsonable
        return {
            "classification": self.classification,
            "square": self.square_name,
            "weak": self.weak,
            "coboundary": self.coboundary,
            "commutes": self.commutes,
            "with_curvature": self.with_curvature,
            "residuals": [r.to_json() for r in self.residuals],
            "details": jsonable(self.details),
        }


def default_squares(N: FormSum) -> list:
    space = N.space
    S = as_formsum(euler_form(space))
    cands = [("S", S), ("Id", as_formsum(identity_form(space))), ("iota_N N", insertion(N, N))]
    if 1 in N.parts:
        cands.append(("N o N", as_formsum(compose_unary(N.parts[1], N.parts[1]))))
    cands.append(("2N - S", N * 2 - S))
    return cands


def nijenhuis_classify(N, mu, square_candidates=(), defaults: bool = True, check_deformed: bool = True) -> NijenhuisVerdict:
    """Weak / co-boundary / Nijenhuis classification of N relative to mu.

    ``square_candidates`` holds forms or (name, form) pairs, tried before the
    defaults.  The verdict records the first candidate that works.
    """
    N, mu = as_formsum(N), as_formsum(mu)
    if N.parts and N.degree != 0:
        raise InputError("a Nijenhuis candidate has degree 0")
    cands = []
    for i, c in enumerate(square_candidates):
        name, form = c if isinstance(c, tuple) else (f"user[{i}]", c)
        cands.append((name, as_formsum(form)))
    if defaults:
        cands += default_squares(N)
    Nmu = rn_bracket(N, mu)
    NNmu = rn_bracket(N, Nmu)
    weak_res = rn_bracket(mu, NNmu)
    weak = not weak_res
    residuals = []
    details = {}
    if not weak:
        residuals.append(first_residual(weak_res, "[mu,[N,[N,mu]]] = 0"))
    if check_deformed:
        curved = 0 in Nmu.parts
        deformed_ok = check_linfty(Nmu, curved=curved).passed
        details["deformed_is_linfty"] = deformed_ok
        details["weak_agrees_with_deformed"] = deformed_ok == weak
    chosen, chosen_name, cob, comm = None, None, False, False
    seen = []
    first_cob_res = None
    for name, K in cands:
        if K.parts and K.degree != 0:
            continue
        if any(K == other for other in seen):
            continue
        seen.append(K)
        diff = NNmu - rn_bracket(K, mu)
        if diff:
            if first_cob_res is None:
                first_cob_res = first_residual(diff, f"[N,[N,mu]] = [{name},mu]")
            continue
        commutator = rn_bracket(N, K)
        if not commutator:
            chosen, chosen_name, cob, comm = K, name, True, True
            break
        if chosen is None:
            chosen, chosen_name, cob = K, name, True
            residuals.append(first_residual(commutator, f"[N,{name}] = 0"))
    if not cob and first_cob_res is not None:
        residuals.append(first_cob_res)
    if weak and cob and comm:
        cls = "nijenhuis"
    elif weak and cob:
        cls = "coboundary"
    elif weak:
        cls = "weak"
    else:
        cls = "none"
    if cls == "nijenhuis":
        residuals = []
    return NijenhuisVerdict(N, chosen, chosen_name, cls, weak, cob, comm, 0 in N.parts,
                            [r for r in residuals if r is not None], details)


def hierarchy(mu, N, kmax: int, square=None) -> tuple:
    """mu_1 .. mu_kmax with mu_k = [N, mu_{k-1}], plus a report on the hierarchy identities."""
    mu, N = as_formsum(mu), as_formsum(N)
    mus = []
    cur = mu
    for _ in range(kmax):
        cur = rn_bracket(N, cur)
        mus.append(cur)
    residuals = []
    status = {}
    for k, mk in enumerate(mus, 1):
        rep = check_linfty(mk, curved=0 in mk.parts)
        status[f"mu_{k} is L-infinity"] = rep.passed
        residuals += [Residual(f"mu_{k}: {r.identity}", r.inputs, r.value) for r in rep.residuals]
        if square is not None:
            K = as_formsum(square)
            diff = rn_bracket(N, rn_bracket(N, mk)) - rn_bracket(K, mk)
            status[f"N Nijenhuis for mu_{k}"] = not diff and not rn_bracket(N, K)
            if diff:
                residuals.append(first_residual(diff, f"[N,[N,mu_{k}]] = [K,mu_{k}]"))
    for k in range(1, kmax + 1):
        for l in range(k, kmax + 1):
            br = rn_bracket(mus[k - 1], mus[l - 1])
            status[f"[mu_{k},mu_{l}] = 0"] = not br
            if br:
                residuals.append(first_residual(br, f"[mu_{k},mu_{l}] = 0"))
    def fails_at(k):
        keys = [f"mu_{k} is L-infinity", f"N Nijenhuis for mu_{k}"] + [f"[mu_{j},mu_{k}] = 0" for j in range(1, k + 1)]
        return any(status.get(key) is False for key in keys)

    first_fail = next((k for k in range(1, kmax + 1) if fails_at(k)), None)
    report = Report("hierarchy", all(status.values()), "exact", residuals[:1],
                    {"status": status, "first_failing_k": first_fail, "kmax": kmax})
    return mus, report


def classical_torsion(N: SymValForm, bracket: SymValForm) -> SymValForm:
    """T(X,Y) = mu(NX,NY) - N(mu(NX,Y) + mu(X,NY) - N mu(X,Y)), by direct evaluation."""
    if N.arity != 1 or N.degree != 0 or bracket.arity != 2:
        raise InputError("torsion needs a unary degree-0 N and a binary bracket")

    def apply(form, *vecs):
        # multilinear evaluation on slot dicts
        out: dict = defaultdict(Fraction)
        if len(vecs) == 1:
            for s, c in vecs[0].items():
                for o, d in form.on_basis((s,)).items():
                    out[o] += c * d
        else:
            for s, c in vecs[0].items():
                for t, e in vecs[1].items():
                    for o, d in form.on_basis((s, t)).items():
                        out[o] += c * e * d
        return dict(out)

    def value(mono):
        x, y = {mono[0]: Fraction(1)}, {mono[1]: Fraction(1)}
        nx, ny = apply(N, x), apply(N, y)
        inner = defaultdict(Fraction)
        for vec, sgn in ((apply(bracket, nx, y), 1), (apply(bracket, x, ny), 1), (apply(N, apply(bracket, x, y)), -1)):
            for s, c in vec.items():
                inner[s] += sgn * c
        out = defaultdict(Fraction, apply(bracket, nx, ny))
        for s, c in apply(N, dict(inner)).items():
            out[s] -= c
        return dict(out)

    return SymValForm.from_function(N.space, 2, bracket.degree, value)


def torsion_via_rn(N: SymValForm, bracket: SymValForm) -> SymValForm:
    """1/2 ([N,[N,mu]] - [N o N, mu]) restricted to arity 2."""
    twice = rn_bracket(N, rn_bracket(N, bracket))
    once = rn_bracket(compose_unary(N, N), bracket)
    return ((twice - once) * Fraction(1, 2)).part(2)


def _dgla_parts(dgla):
    mu = dgla.mu if isinstance(dgla, LInftyStructure) else as_formsum(dgla)
    if mu.parts and mu.degree != 1:
        raise InputError("a DGLA has degree 1 brackets")
    if any(k > 2 for k in mu.parts):
        raise PreconditionError("a DGLA has brackets of arity at most 2")
    return mu


def _pi_form(space, pi: Element) -> SymValForm:
    if pi and pi.degree != 0:
        raise PreconditionError("pi must lie in degree 0")
    return SymValForm.from_element(pi, 0)


def dgla_poisson_deformer(dgla, pi: Element) -> tuple:
    """N = pi + S with square 2 pi + S; Nijenhuis iff l2(pi, pi) = 0."""
    mu = _dgla_parts(dgla)
    space = mu.space
    P = _pi_form(space, pi)
    S = euler_form(space)
    N = FormSum(space, 0, [P, S])
    K = FormSum(space, 0, [P * 2, S])
    verdict = nijenhuis_classify(N, mu, [("2pi + S", K)], defaults=False)
    l1, l2 = mu.part(1), mu.part(2)
    c = mu.part(0).element() if 0 in mu.parts else space.zero()
    l2pipi = l2(pi, pi)
    expected = FormSum(space, 1, [
        SymValForm.from_element(c + l1(pi), 1),
        as_formsum(insertion(P, l2)).part(1) + l1,
        l2,
    ])
    deformed = rn_bracket(N, mu)
    verdict.details.update({
        "l2(pi,pi)": l2pipi,
        "criterion_matches": verdict.is_nijenhuis == (not l2pipi),
        "deformed_matches_formula": deformed == expected,
    })
    if l2pipi and not verdict.is_nijenhuis:
        verdict.residuals.insert(0, Residual("l2(pi,pi) = 0", ("pi", "pi"), l2pipi))
    return verdict, deformed


def dgla_mc_deformer(dgla, pi: Element) -> tuple:
    """N = Id + pi with square Id + pi; Nijenhuis iff pi is Maurer-Cartan."""
    mu = _dgla_parts(dgla)
    space = mu.space
    P = _pi_form(space, pi)
    I = identity_form(space)
    N = FormSum(space, 0, [P, I])
    verdict = nijenhuis_classify(N, mu, [("Id + pi", N)], defaults=False)
    l1, l2 = mu.part(1), mu.part(2)
    c = mu.part(0).element() if 0 in mu.parts else space.zero()
    mc = l1(pi) - c - l2(pi, pi) * Fraction(1, 2)
    expected = FormSum(space, 1, [
        SymValForm.from_element(l1(pi) - c, 1),
        as_formsum(insertion(P, l2)).part(1),
        l2,
    ])
    deformed = rn_bracket(N, mu)
    verdict.details.update({
        "maurer_cartan_residual": mc,
        "criterion_matches": verdict.is_nijenhuis == (not mc),
        "deformed_matches_formula": deformed == expected,
    })
    if mc and not verdict.is_nijenhuis:
        verdict.residuals.insert(0, Residual("(l1(pi) - c) - 1/2 l2(pi,pi) = 0", ("pi",), mc))
    return verdict, deformed


def lie_n_family_deformer(mu, forms, n: int | None = None) -> tuple:
    """S + sum N_i on a Lie n-algebra, for degree-0 N_i of arity between (n+3)/2 and n+1."""
    mu = as_formsum(mu)
    space = mu.space
    degs = space.degrees
    if n is None:
        n = -min(degs)
    if any(d < -n or d > -1 for d in degs):
        raise PreconditionError(f"space must be concentrated in degrees -{n}..-1")
    forms = sorted((f for f in forms), key=lambda f: f.arity)
    lower = ceil((n + 3) / 2)
    for f in forms:
        if f.degree != 0:
            raise PreconditionError("family members must have degree 0")
        if f.arity < lower:
            raise PreconditionError(f"arity {f.arity} below the lower bound ceil((n+3)/2) = {lower}")
        if f.arity > n + 1:
            raise PreconditionError(f"arity {f.arity} above the upper bound n+1 = {n + 1}")
    S = euler_form(space)
    sumN = FormSum(space, 0, forms)
    N = as_formsum(S) + sumN
    K = as_formsum(S) + sumN * 2
    vanish = {}
    for a, Ni in enumerate(forms):
        for m in range(max(1, n - Ni.arity + 3), n + 2):
            vanish[f"[N_{a},l_{m}] = 0"] = not rn_bracket(Ni, mu.part(m))
        for b, Nj in enumerate(forms):
            vanish[f"[N_{a},N_{b}] = 0"] = not rn_bracket(Ni, Nj)
            for m in range(1, n + 2):
                vanish[f"[N_{a},[N_{b},l_{m}]] = 0"] = not rn_bracket(Ni, rn_bracket(Nj, mu.part(m)))
    verdict = nijenhuis_classify(N, mu, [("S + 2 sum N_i", K)], defaults=False)
    expected = mu
    for Ni in forms:
        for m in range(1, n - Ni.arity + 3):
            expected = expected + rn_bracket(Ni, mu.part(m))
    deformed = rn_bracket(N, mu)
    verdict.details.update({"degree_vanishings": vanish, "deformed_matches_formula": deformed == expected})
    return verdict, deformed
