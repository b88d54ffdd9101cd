"""Seeded random generators for spaces and forms (used by tests and the CLI)."""

from __future__ import annotations

import random
from fractions import Fraction

from .graded import GradedVectorSpace
from .symforms import FormSum, SymValForm, monomials


def small_rational(rng: random.Random, spread: int = 3) -> Fraction:
    return Fraction(rng.randint(-spread, spread), rng.choice((1, 1, 1, 2, 3)))


def random_space(rng: random.Random, max_dim: int = 6, degrees=range(-3, 1)) -> GradedVectorSpace:
    degrees = list(degrees)
    total = rng.randint(1, max_dim)
    chosen = sorted(rng.sample(degrees, rng.randint(1, min(len(degrees), total))))
    dims = [1] * len(chosen)
    for _ in range(total - len(chosen)):
        dims[rng.randrange(len(chosen))] += 1
    comps = []
    for d, k in zip(chosen, dims):
        tag = f"m{-d}" if d < 0 else f"p{d}"
        comps.append((d, [f"{tag}_{i}" for i in range(k)]))
    return GradedVectorSpace(comps)


def random_form(rng: random.Random, space: GradedVectorSpace, arity: int, degree: int, density: float = 0.5) -> SymValForm:
    table = {}
    for mono in monomials(space, arity, degree):
        if rng.random() > density:
            continue
        target = sum(space.slot_degree[s] for s in mono) + degree
        out = {}
        for s in space.slots(target):
            if rng.random() < 0.6:
                out[s] = small_rational(rng)
        table[mono] = out
    return SymValForm(space, arity, degree, table)


def random_formsum(rng: random.Random, space: GradedVectorSpace, degree: int, arities=(1, 2, 3), density: float = 0.5) -> FormSum:
    return FormSum(space, degree, [random_form(rng, space, k, degree, density) for k in arities])


def viable_degree(rng: random.Random, space: GradedVectorSpace, arity: int, lo: int = -3, hi: int = 3) -> int:
    """A form degree in [lo, hi] for which some monomial of this arity has a nonzero target."""
    options = sorted({t - sum(space.slot_degree[s] for s in mono)
                      for mono in monomials(space, arity, 0) for t in space.degrees} & set(range(lo, hi + 1)))
    return rng.choice(options) if options else rng.randint(lo, hi)


# random Lie 2-algebras


def random_invertible(rng: random.Random, n: int) -> list:
    from . import linalg
    while True:
        M = [[small_rational(rng, 2) for _ in range(n)] for _ in range(n)]
        if n == 0 or linalg.rank(M) == n:
            return M


def transport(q, rng: random.Random):
    """Push a Lie 2-algebra through a random degree-preserving change of basis."""
    from . import linalg
    from .graded import Element
    from .lie2 import Lie2Quadruple
    from .symforms import change_basis
    E = q.space
    mats, invs = {}, {}
    for d in E.degrees:
        n = len(E.slots(d))
        mats[d] = random_invertible(rng, n)
        invs[d] = linalg.inverse(mats[d])

    def to_old(s):
        d = E.slot_degree[s]
        base = E.slots(d)[0]
        return Element(E, {base + i: mats[d][i][s - base] for i in range(len(E.slots(d)))})

    def to_new(x):
        out = {}
        for d in E.degrees:
            sl = E.slots(d)
            vec = linalg.matvec(invs[d], [x.coeffs.get(s, Fraction(0)) for s in sl])
            out.update({s: c for s, c in zip(sl, vec) if c})
        return Element(E, out)

    return Lie2Quadruple.from_mu(FormSum(E, 1, [change_basis(f, E, to_new, to_old) for f in q.to_mu()]))


def _lie_pick(rng: random.Random, max_dim: int):
    from . import liealg
    pool = [liealg.abelian(rng.randint(1, max_dim)), liealg.nonabelian_2d(), liealg.heisenberg(),
            liealg.sl2(), liealg.so3()]
    return rng.choice([g for g in pool if g.dim <= max_dim])


def _string_lie2(rng: random.Random, g, trivial_dim: int, adjoint: bool):
    """String Lie 2-algebra on g: E_{-2} is the adjoint module or a trivial module with a cocycle."""
    from .graded import GradedVectorSpace
    from .lie2 import Lie2Quadruple, ce_cocycles
    xs = [f"X{i}" for i in range(g.dim)]
    fs = [f"f{i}" for i in range(g.dim if adjoint else trivial_dim)]
    comps = ([(-2, fs)] if fs else []) + [(-1, xs)]
    E = GradedVectorSpace(comps)
    X = {i: E.slot(x) for i, x in enumerate(xs)}
    F = {i: E.slot(f) for i, f in enumerate(fs)}
    br = SymValForm(E, 2, 1, {(X[i], X[j]): {X[k]: c for k, c in enumerate(g.c[i][j]) if c}
                              for i in range(g.dim) for j in range(i + 1, g.dim)})
    chi = omega = None
    if adjoint:
        # chi(X_i) f_j = [e_i, e_j]
        chi = SymValForm(E, 2, 1, {(F[j], X[i]): {F[k]: c for k, c in enumerate(g.c[i][j]) if c}
                                   for i in range(g.dim) for j in range(g.dim)})
    elif fs and g.dim >= 3:
        table = {}
        for coc in ce_cocycles(g, 3):
            weights = [small_rational(rng) for _ in fs]
            for idx, c in coc.items():
                mono = tuple(X[i] for i in idx)
                row = table.setdefault(mono, {})
                for f, w in zip(fs, weights):
                    row[E.slot(f)] = row.get(E.slot(f), Fraction(0)) + c * w
        omega = SymValForm(E, 3, 1, table)
    return Lie2Quadruple(E, None, chi, br, omega)


def random_lie2(rng: random.Random, max_dim: int = 3):
    """A valid Lie 2-algebra: a (possibly deformed) string or chi = 0 example, in a random basis."""
    from .lie2 import alpha_nijenhuis
    kind = rng.choice(["string", "adjoint", "chi_zero"])
    if kind == "chi_zero":
        return random_chi_zero_lie2(rng, max_dim)
    g = _lie_pick(rng, max_dim)
    q = _string_lie2(rng, g, rng.randint(1, 2), kind == "adjoint")
    if rng.random() < 0.7:
        alpha = random_form(rng, q.space, 2, 0, 0.6)
        alpha = SymValForm(q.space, 2, 0, {m: v for m, v in alpha.table.items()
                                           if all(q.space.slot_degree[s] == -1 for s in m)})
        verdict, deformed = alpha_nijenhuis(alpha, q)
        if verdict.is_nijenhuis:
            q = deformed
    return transport(q, rng)


def random_chi_zero_lie2(rng: random.Random, max_dim: int = 3):
    """string part (+) trivial part, deformed by an alpha supported on the string degree -1 part."""
    from .graded import GradedVectorSpace
    from .lie2 import Lie2Quadruple, alpha_nijenhuis
    g = _lie_pick(rng, max_dim)
    s = _string_lie2(rng, g, rng.randint(0, 2), False)
    t = rng.randint(0, 2)
    fs = [s.space.labels[i] for i in s.F] + [f"t{i}" for i in range(t)]
    xs = [s.space.labels[i] for i in s.X] + [f"dt{i}" for i in range(t)]
    E = GradedVectorSpace(([(-2, fs)] if fs else []) + [(-1, xs)])
    remap = {old: E.slot(s.space.labels[old]) for old in range(s.space.dim)}

    def move(form):
        return SymValForm(E, form.arity, form.degree, {tuple(remap[i] for i in m): {remap[o]: c for o, c in v.items()}
                                                       for m, v in form.table.items()})

    partial = SymValForm(E, 1, 1, {(E.slot(f"t{i}"),): {E.slot(f"dt{i}"): 1} for i in range(t)})
    q = Lie2Quadruple(E, partial, None, move(s.bracket2), move(s.omega))
    if fs:
        string_x = [remap[x] for x in s.X]
        table = {}
        for a in range(len(string_x)):
            for b in range(a + 1, len(string_x)):
                if rng.random() < 0.6:
                    table[(string_x[a], string_x[b])] = {E.slot(f): small_rational(rng) for f in fs
                                                          if rng.random() < 0.6}
        verdict, deformed = alpha_nijenhuis(SymValForm(E, 2, 0, table), q)
        assert verdict.is_nijenhuis
        q = deformed
    return transport(q, rng)


def perturb_lie2(rng: random.Random, q):
    """Add a random nonzero entry to one structure map (usually breaking a relation)."""
    from .lie2 import Lie2Quadruple
    E = q.space
    mu = q.to_mu()
    choices = [(k, m) for k in (1, 2, 3) for m in monomials(E, k, 1)
               if E.has_degree(sum(E.slot_degree[s] for s in m) + 1)]
    k, mono = rng.choice(choices)
    target = sum(E.slot_degree[s] for s in mono) + 1
    out = rng.choice(list(E.slots(target)))
    extra = SymValForm(E, k, 1, {mono: {out: rng.choice([-2, -1, 1, 2])}})
    return Lie2Quadruple.from_mu(mu + FormSum(E, 1, [extra]))


# polynomial calculus


def random_poly(rng: random.Random, m: int, max_deg: int = 3, cap: int = 6, density: float = 0.35):
    from itertools import product

    from .funcalg import Poly
    terms = {}
    for e in product(range(max_deg + 1), repeat=m):
        if sum(e) <= max_deg and rng.random() < density:
            terms[e] = small_rational(rng)
    return Poly(m, terms, cap)


def random_alt(rng: random.Random, cls, m: int, k: int, max_deg: int = 3, cap: int = 6, density: float = 0.6):
    from itertools import combinations
    return cls(m, {I: random_poly(rng, m, max_deg, cap) for I in combinations(range(m), k) if rng.random() < density})
