import random
from fractions import Fraction

import pytest

from nijenhuis_forms import linalg
from nijenhuis_forms.courant import (
    LITERAL_L3_SIGN,
    PointCourant,
    StandardCourant,
    associated_lie2,
    check_associated_lie2,
    check_courant_axioms,
    deform_and_torsion,
    l3_closed_form,
    lemma_deformed_lie2,
    lift_tensor,
    quadruple_conditions,
    random_compatible_tensor,
    recover_anchor,
    rigidity_witness,
    tabulate,
    torsion,
)
from nijenhuis_forms.errors import InputError, PreconditionError
from nijenhuis_forms.funcalg import Poly, PolyForm, PolyMultivector, contract, d, lie_bracket, lie_derivative
from nijenhuis_forms.linfty import check_linfty
from nijenhuis_forms.liealg import abelian, direct_sum, so3
from nijenhuis_forms.opforms import GElem

SO3 = PointCourant.with_killing_form(so3())
R2 = StandardCourant(2)


def test_point_model_basics():
    assert SO3.pairing_matrix == linalg.scalar_matrix(3, -2)
    X = SO3.unit_section(0)
    assert not SO3.D(Fraction(5)) and SO3.anchor(X, Fraction(5)) == 0
    with pytest.raises(InputError):
        PointCourant(so3(), [[1, 0, 0], [0, 1, 0], [0, 0, 0]])


def test_point_model_axioms_and_broken_pairing():
    assert check_courant_axioms(SO3).passed
    broken = PointCourant(so3(), [[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    rep = check_courant_axioms(broken)
    assert not rep.passed
    assert not rep.details["checks"]["(ii) rho(X)<Y,Z> = <X o Y, Z> + <Y, X o Z>"]
    # 0 - <[e1,e2],e3> - <e2,[e1,e3]> = -3 + 2 for the diagonal pairing (1, 2, 3)
    wit = next(r for r in rep.residuals if r.identity.startswith("(ii)"))
    assert wit.inputs == ("e1", "e2", "e3") and wit.value == -1


def test_dorfman_matches_exterior_calculus():
    rng = random.Random(7)
    for _ in range(20):
        X, Y = R2.random_section(rng), R2.random_section(rng)
        Xv, xi = R2.split(X)
        Yv, eta = R2.split(Y)
        vX, vY = PolyMultivector.vector(Xv), PolyMultivector.vector(Yv)
        fx = PolyForm(2, {(i,): p for i, p in enumerate(xi)})
        fe = PolyForm(2, {(i,): p for i, p in enumerate(eta)})
        form = lie_derivative(vX, fe) - contract(vY, d(fx))
        expected = lie_bracket(vX, vY).as_vector() + [form.coeffs.get((i,), Poly.zero(2)) for i in range(2)]
        assert R2.dorfman(X, Y).comps == tuple(R2.function(p) for p in expected)


def test_r1_example():
    S = StandardCourant(1)
    x = Poly.var(1, 0, S.cap)
    dx, xdx = S.section([1]), S.section([x])
    assert S.dorfman(dx, xdx) == S.section([1])


def test_standard_model_axioms_exact_on_samples():
    rep = check_courant_axioms(R2, samples=100, seed=0)
    assert rep.passed and rep.regime.startswith("sampled (seed=0")
    assert all(rep.details["checks"].values())


def test_d_is_dual_to_anchor_for_any_pairing_scale():
    S = StandardCourant(2, pairing_scale=3)
    assert check_courant_axioms(S, samples=10, seed=2).passed


def test_associated_lie2_point_model():
    V_mu = tabulate(SO3, associated_lie2(SO3).forms)
    assert check_linfty(V_mu).passed
    assert check_linfty(tabulate(SO3, associated_lie2(SO3, LITERAL_L3_SIGN).forms)).passed
    literal = tabulate(SO3, [associated_lie2(SO3, LITERAL_L3_SIGN).part(3)])
    assert literal == tabulate(SO3, [l3_closed_form(SO3)])
    assert not tabulate(SO3, [associated_lie2(SO3).part(1)])
    ab = PointCourant(abelian(2), [[1, 0], [0, 1]])
    assert not tabulate(ab, associated_lie2(ab).forms)


def test_associated_lie2_standard_needs_l3_sign():
    assert check_associated_lie2(R2, samples=15, seed=1).passed
    mu = associated_lie2(R2, LITERAL_L3_SIGN)
    from nijenhuis_forms.opforms import generalized_jacobi
    x0, x1 = Poly.var(2, 0, R2.cap), Poly.var(2, 1, R2.cap)
    X, Y, Z = R2.section([1, 0]), R2.section([x0, 0]), R2.section([0, 0], [x1, 0])
    assert generalized_jacobi(mu, [GElem(-1, X), GElem(-1, Y), GElem(-1, Z)])


def test_deform_by_scalar():
    c = Fraction(3)
    N = linalg.scalar_matrix(4, c)
    dfm = deform_and_torsion(R2, N, samples=10)
    assert dfm.report.passed and dfm.report.details["torsion_vanishes"]
    assert dfm.lam == 2 * c and dfm.gamma == 2 * c * c
    X, Y = R2.random_section(random.Random(1)), R2.random_section(random.Random(2))
    assert dfm.deformed.dorfman(X, Y) == R2.dorfman(X, Y) * c


def test_deformed_d_formula_on_compatible_tensors():
    rng = random.Random(3)
    for _ in range(3):
        lam = Fraction(rng.randint(-3, 3))
        N = random_compatible_tensor(R2, rng, lam)
        dfm = deform_and_torsion(R2, N, samples=20, seed=rng.randint(0, 99))
        assert dfm.predicates["N + N* = lambda Id"] and dfm.lam == lam
        assert dfm.report.details["checks"]["D^N = (-N + lambda Id) D"]
        assert dfm.report.details["checks"]["T = 1/2 (o^{N,N} - o^{N^2})"]


def test_so3_deformations_stay_lie_even_with_torsion():
    # any skew bracket on R^3 is M(X x Y); deforming the cross product keeps M symmetric
    rng = random.Random(0)
    for _ in range(5):
        N = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        dfm = deform_and_torsion(SO3, N)
        assert not dfm.report.details["torsion_vanishes"]
        assert check_courant_axioms(SO3.deformed(N)).details["checks"]["(i) Leibniz identity"]


def test_torsion_breaks_leibniz_on_so3_plus_so3():
    P = PointCourant.with_killing_form(direct_sum(so3(), so3()))
    N = [[0] * 6 for _ in range(6)]
    N[0][0] = N[0][3] = 1  # e1 -> e1, e1' -> e1
    dfm = deform_and_torsion(P, N)
    assert dfm.report.passed  # the torsion identity itself holds
    assert not dfm.report.details["torsion_vanishes"]
    rep = check_courant_axioms(P.deformed(N))
    assert not rep.details["checks"]["(i) Leibniz identity"]
    assert rep.witness.inputs == ("e2", "e2'", "e3'")
    T = torsion(P, N)
    wit = dfm.report.details["torsion_witness"]
    i, j = (P.labels.index(lab) for lab in wit.inputs[:2])
    assert T(P.unit_section(i), P.unit_section(j)) == wit.value


def test_torsion_identity_exhaustive_on_point():
    rng = random.Random(9)
    P = PointCourant.with_killing_form(direct_sum(so3(), so3()))
    N = [[rng.randint(-1, 1) for _ in range(6)] for _ in range(6)]
    assert deform_and_torsion(P, N).report.details["checks"]["T = 1/2 (o^{N,N} - o^{N^2})"]


def test_lift_scalar_on_point_model():
    c = Fraction(-5, 2)
    lift = lift_tensor(SO3, linalg.scalar_matrix(3, c))
    assert lift.report.passed, lift.report.details
    assert (lift.lam, lift.gamma) == (2 * c, 2 * c * c)
    assert lift.verdict.is_nijenhuis


def test_lift_rejected_at_predicate():
    N = linalg.add(linalg.scalar_matrix(3, 2), [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    lift = lift_tensor(SO3, N)
    assert not lift.report.passed
    assert lift.report.details["rejected_at"] == "N + N* = lambda Id"


def test_lift_on_standard_model():
    lift = lift_tensor(R2, linalg.scalar_matrix(4, 2), samples=8)
    assert lift.report.passed, lift.report.details
    N = [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 5, 0], [0, 0, 0, 5]]  # o^N = 2 o, lambda = 7
    lift = lift_tensor(R2, N, samples=6, seed=4)
    assert lift.report.passed and lift.lam == 7


def test_lemma_deformed_lie2_for_compatible_tensors():
    rng = random.Random(12)
    lam = Fraction(1)
    N = random_compatible_tensor(R2, rng, lam)
    assert lemma_deformed_lie2(R2, N, lam, samples=10, seed=5).passed
    assert not lemma_deformed_lie2(R2, N, lam + 1, samples=10, seed=5).passed


def test_quadruple_conditions():
    c = Fraction(3)
    rep = quadruple_conditions(SO3, linalg.scalar_matrix(3, c), linalg.scalar_matrix(3, c * c), 2 * c, 2 * c * c)
    assert rep.passed
    N = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    K = [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
    rep = quadruple_conditions(SO3, N, K, 2, 2)
    assert not rep.details["checks"]["NK - KN = 0"]


def test_rigidity_sampler():
    rng = random.Random(0)
    N = linalg.scalar_matrix(4, 2)
    for _ in range(3):
        A = [[Fraction(0)] * 4 for _ in range(4)]
        a, b = rng.sample(range(4), 2)
        A[a][b], A[b][a] = Fraction(1), Fraction(-1)
        rep = rigidity_witness(R2, N, 4, A, samples=100, seed=rng.randint(0, 999))
        assert not rep.passed and rep.witness is not None
        assert rep.details["evaluated"] <= 100
    assert rigidity_witness(R2, N, 4, [[0] * 4] * 4, samples=10).passed
    with pytest.raises(PreconditionError):
        rigidity_witness(SO3, linalg.scalar_matrix(3, 1), 2, [[0] * 3] * 3)


def test_anchor_is_determined_by_the_bracket():
    a = Fraction(2)
    one = R2.deformed([[a, 0, 0, 0], [0, a, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    two = R2.deformed([[a, 0, 0, 0], [0, a, 0, 0], [0, 0, -4, 0], [0, 0, 0, -4]])
    rng = random.Random(6)
    for _ in range(10):
        X, Y, f = R2.random_section(rng), R2.random_section(rng), R2.random_function(rng)
        assert one.dorfman(X, Y) == two.dorfman(X, Y)
        assert recover_anchor(one, X, f) == one.anchor(X, f) == two.anchor(X, f) == recover_anchor(two, X, f)
