import itertools
import random
from fractions import Fraction

import pytest

from nijenhuis_forms.errors import InputError, NotHamiltonian, PreconditionError
from nijenhuis_forms.funcalg import Poly, PolyForm, PolyMultivector, d
from nijenhuis_forms.nplectic import (
    HamiltonianPair, MultisymplecticSpace, bracket_sign, build_lie_n, check_nijen_eta, check_nplectic,
    contraction_rank, hamiltonian_vector_field, insert_all, lemma_items, poisson_bracket, regime_of,
    sample_pools, symplectic, symplectic_r2, tilde_eta, volume_form,
)
from nijenhuis_forms.opforms import ZERO, GElem, generalized_jacobi

R3 = volume_form(3)
x, y, z = (Poly.var(3, i) for i in range(3))


def form3(coeffs):
    return PolyForm(3, coeffs)


def perm_sign(p):
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def evaluate_at(form, vectors, point):
    """Oracle: form(v_1, ..., v_k, e_J) at a point, via the determinant formula, keyed by J."""
    m, k = form.m, len(vectors)
    vals = [[c(*point) for c in v.as_vector()] for v in vectors]
    out = {}
    for I, p in form.coeffs.items():
        coeff = p(*point)
        rest = len(I) - k
        for J in itertools.combinations(range(m), rest):
            cols = [[vals[a][i] for i in range(m)] for a in range(k)] + \
                   [[Fraction(int(i == j)) for i in range(m)] for j in J]
            total = sum(perm_sign(s) * _prod(cols[a][I[s[a]]] for a in range(len(I)))
                        for s in itertools.permutations(range(len(I))))
            if total:
                out[J] = out.get(J, 0) + coeff * total
    return {J: v for J, v in out.items() if v}


def _prod(it):
    acc = Fraction(1)
    for v in it:
        acc *= v
    return acc


def at_point(form, point):
    return {J: p(*point) for J, p in form.coeffs.items() if p(*point)}


POINTS = [(Fraction(1), Fraction(-2), Fraction(3)), (Fraction(1, 2), Fraction(5), Fraction(-1, 3))]


def test_hamiltonian_vector_field_of_x_dz_is_d_dy():
    alpha = form3({(2,): x})
    pair = hamiltonian_vector_field(alpha, R3)
    assert pair.chi == PolyMultivector.partial(3, 1)
    # oracle: omega(d/dy, e_J) must equal -d alpha = -dx^dz
    assert evaluate_at(R3.omega, [PolyMultivector.partial(3, 1)], POINTS[0]) == at_point(-d(alpha), POINTS[0])
    assert pair.verify(R3)


def test_constant_forms_have_zero_vector_field():
    assert not hamiltonian_vector_field(form3({(0,): 3, (2,): Fraction(-1, 2)}), R3).chi


def test_symplectic_vector_field_matches_hand_formula():
    rng = random.Random(3)
    S = symplectic_r2()
    from nijenhuis_forms.sampling import random_poly
    for _ in range(10):
        f = random_poly(rng, 2, 3, 10)
        chi = hamiltonian_vector_field(PolyForm.function(f), S).chi
        assert chi.as_vector() == [-f.diff(1), f.diff(0)]


def test_not_hamiltonian_on_r6():
    omega = PolyForm(6, {(0, 1, 2): 1, (3, 4, 5): 1})
    V = MultisymplecticSpace(6, 2, omega)
    assert V.rank == 6
    with pytest.raises(NotHamiltonian):
        hamiltonian_vector_field(PolyForm(6, {(3,): Poly.var(6, 0)}), V)
    with pytest.raises(NotHamiltonian):
        V.element(PolyForm(6, {(3,): Poly.var(6, 0)}))


def test_nondegeneracy_rank():
    assert R3.rank == 3
    assert symplectic(4).rank == 4
    assert volume_form(4).rank == 4
    with pytest.raises(PreconditionError):
        MultisymplecticSpace(4, 2, PolyForm(4, {(0, 1, 2): 1, (1, 2, 3): 1}))
    # a 3-form on R^4 always has a kernel
    rng = random.Random(8)
    for _ in range(20):
        omega = PolyForm(4, {I: rng.randint(-3, 3) for I in itertools.combinations(range(4), 3)})
        assert contraction_rank(4, omega) <= 3


def test_space_validation():
    with pytest.raises(InputError):
        MultisymplecticSpace(3, 2, PolyForm(3, {(0, 1): 1}))
    with pytest.raises(InputError):
        MultisymplecticSpace(3, 2, PolyForm(3, {(0, 1, 2): x}))
    with pytest.raises(InputError):
        R3.element(PolyForm(3, {(0, 1): 1}))


def test_hamiltonian_pair_round_trip():
    pair = hamiltonian_vector_field(form3({(2,): x * y}), R3)
    doc = pair.to_json()
    assert HamiltonianPair.from_json(R3, doc) == pair
    doc["chi"] = PolyMultivector.partial(3, 0).to_json()
    with pytest.raises(InputError):
        HamiltonianPair.from_json(R3, doc)


def test_displayed_bracket_signs():
    assert [bracket_sign(k) for k in range(2, 6)] == [1, -1, -1, 1]
    assert [bracket_sign(k, "graded") for k in range(2, 6)] == [1, -1, 1, -1]


def test_bracket_of_x_dz_and_y_dx():
    a, b = form3({(2,): x}), form3({(0,): y})
    assert R3.chi(b) == PolyMultivector.partial(3, 2)
    alg = build_lie_n(R3)
    val = alg.l(2)(GElem(-1, a), GElem(-1, b))
    assert val == GElem(-1, poisson_bracket(R3, a, b))
    oracle = evaluate_at(R3.omega, [R3.chi(a), R3.chi(b)], POINTS[0])
    assert at_point(val.value, POINTS[0]) == oracle == {(0,): 1}


def test_brackets_agree_with_pointwise_oracle():
    pools = sample_pools(R3, 5, 11)
    alg = build_lie_n(R3)
    for pool in pools:
        hs = pool.by_degree[-1]
        for k in (2, 3):
            val = alg.l(k)(*hs[:k])
            chis = [R3.chi(h.value) for h in hs[:k]]
            for pt in POINTS:
                oracle = {J: v * bracket_sign(k) for J, v in evaluate_at(R3.omega, chis, pt).items()}
                assert (at_point(val.value, pt) if val else {}) == oracle


def test_l1_and_zero_cases():
    alg = build_lie_n(R3)
    f = GElem(-2, PolyForm.function(x * y))
    assert alg.l(1)(f) == GElem(-1, d(f.value))
    assert alg.l(1)(GElem(-1, form3({(2,): x}))) is ZERO
    assert alg.l(2)(f, GElem(-1, form3({(2,): x}))) is ZERO
    consts = [GElem(-1, form3({(i,): i + 1})) for i in range(3)]
    assert alg.l(2)(*consts[:2]) is ZERO and alg.l(3)(*consts) is ZERO


def test_r3_jacobi_against_classical_identity():
    # with odd arguments the arity-3 identity reads
    # {{a,b},c} - {{a,c},b} + {{b,c},a} = d omega(chi_a, chi_b, chi_c)
    alg = build_lie_n(R3)
    for pool in sample_pools(R3, 10, 5):
        a, b, c = (h.value for h in pool.by_degree[-1][:3])
        pb = lambda u, v: poisson_bracket(R3, u, v)
        lhs = pb(pb(a, b), c) - pb(pb(a, c), b) + pb(pb(b, c), a)
        top = insert_all([R3.chi(a), R3.chi(b), R3.chi(c)], R3.omega)
        assert lhs == d(top)
        args = tuple(pool.by_degree[-1][:3])
        assert not generalized_jacobi(alg.mu, args)


def test_r3_lie_algebra_sampled():
    rep = check_nplectic(R3, samples=25, seed=0)
    assert rep.passed, rep.residuals
    assert rep.regime == regime_of(25, 0) == "sampled(25, 0)"
    assert rep.details["checks"]["chi of {a, b} = [chi_a, chi_b]"]


def test_r2_symplectic_is_a_lie_algebra():
    rep = check_nplectic(symplectic_r2(), samples=25, seed=1)
    assert rep.passed


def test_r4_volume_needs_graded_signs():
    V = volume_form(4)
    literal = check_nplectic(V, samples=3, seed=0)
    assert not literal.passed
    w = literal.witness
    assert w.inputs[1] == "arity 4" and w.inputs[2] == (-1, -1, -1, -1)
    assert check_nplectic(V, samples=3, seed=0, convention="graded").passed


def test_tilde_eta_values():
    eta = form3({(1, 2): x})
    t = tilde_eta(R3, eta, 2)
    b1, b2 = GElem(-1, form3({(2,): x})), GElem(-1, form3({(0,): y}))
    val = t(b1, b2)
    oracle = evaluate_at(eta, [R3.chi(b1.value), R3.chi(b2.value)], POINTS[1])
    assert val.degree == -2 and at_point(val.value, POINTS[1]) == oracle
    assert val == GElem(-2, PolyForm.function(x))
    assert t(GElem(-2, PolyForm.function(x)), b2) is ZERO
    consts = [GElem(-1, form3({(0,): 1})), GElem(-1, form3({(1,): 2}))]
    assert tilde_eta(R3, form3({(0, 1): 5}), 2)(*consts) is ZERO
    with pytest.raises(InputError):
        tilde_eta(R3, eta, 3)
    with pytest.raises(NotHamiltonian):
        V6 = MultisymplecticSpace(6, 2, PolyForm(6, {(0, 1, 2): 1, (3, 4, 5): 1}))
        tilde_eta(V6, PolyForm(6, {(0, 1): 1}), 2)(GElem(-1, PolyForm(6, {(3,): Poly.var(6, 0)})),
                                                    GElem(-1, PolyForm(6, {(0,): 1})))


def test_r3_eta_nijenhuis_sampled():
    v = check_nijen_eta([form3({(1, 2): x})], R3, samples=25, seed=0)
    assert v.classification == "nijenhuis", v.report.residuals
    assert v.report.passed and v.literal_d_matches
    checks = v.report.details["checks"]
    assert checks["[calN, [calN, mu]] = [calK, mu]"] and checks["[calN, calK] = 0"]
    assert checks["[calN, mu] = mu + [eta~, l1] + [eta~, l2]"]


def test_r3_family_of_etas():
    etas = [form3({(1, 2): x}), form3({(0, 2): y * y, (0, 1): 1})]
    v = check_nijen_eta(etas, R3, samples=8, seed=3)
    assert v.classification == "nijenhuis", v.report.residuals


def test_constant_eta_on_constant_arguments_deforms_nothing():
    eta = form3({(0, 1): 2, (1, 2): -1})
    v = check_nijen_eta([eta], R3, samples=3, seed=2)
    assert v.classification == "nijenhuis"
    consts = [GElem(-1, form3({(i,): i + 1})) for i in range(3)]
    extra = v.deformed - build_lie_n(R3).mu
    for k in (1, 2, 3):
        for args in itertools.combinations_with_replacement(consts, k):
            assert not extra.part(k)(*args)


def test_r4_odd_eta_composes_with_l1_not_d():
    V = volume_form(4)
    alg = build_lie_n(V, "graded")
    eta = PolyForm(4, {(1, 2, 3): Poly.var(4, 0), (0, 1, 2): Poly.var(4, 1) * Poly.var(4, 1)})
    pools = sample_pools(V, 1, 0, width=8)
    items, literal = lemma_items(alg, tilde_eta(V, eta, 3), pools, regime_of(1, 0))
    assert all(r.passed for r in items), [r.name for r in items if not r.passed]
    assert not literal.passed
