import itertools
import random
from fractions import Fraction

import pytest

from nijenhuis_forms.errors import InputError, PreconditionError
from nijenhuis_forms.graded import GradedVectorSpace
from nijenhuis_forms.liealg import LieAlgebra, abelian, heisenberg, nonabelian_2d, sl2, so3
from nijenhuis_forms.lie2 import (
    CrossedModule,
    Lie2Quadruple,
    alpha_from_lie_bracket,
    alpha_nijenhuis,
    ce_cocycles,
    ce_differential,
    ce_differential_rn,
    check_quadruple,
    crossed_module_from_quadruple,
    decompose_chi_zero,
    quadruple_from_crossed_module,
    quadruple_mu_convert,
    tilde_alpha,
    tilde_alpha_and_weak_rep,
    trivial_lie2,
)
from nijenhuis_forms.linfty import check_linfty
from nijenhuis_forms.sampling import (
    perturb_lie2,
    random_chi_zero_lie2,
    random_form,
    random_lie2,
    small_rational,
)
from nijenhuis_forms.symforms import FormSum, SymValForm, rn_bracket


def killing_cocycle_string(g: LieAlgebra) -> Lie2Quadruple:
    """E_{-1} = g, E_{-2} = g (adjoint module) plus a line carrying <[X,Y],Z>."""
    d = g.dim
    E = GradedVectorSpace([(-2, [f"f_{x}" for x in g.labels] + ["c"]), (-1, list(g.labels))])
    X = [E.slot(x) for x in g.labels]
    F = [E.slot(f"f_{x}") for x in g.labels]
    c = E.slot("c")
    kill = g.killing()
    br = SymValForm(E, 2, 1, {(X[i], X[j]): {X[k]: v for k, v in enumerate(g.c[i][j]) if v}
                              for i in range(d) for j in range(i + 1, d)})
    chi = SymValForm(E, 2, 1, {(F[j], X[i]): {F[k]: v for k, v in enumerate(g.c[i][j]) if v}
                               for i in range(d) for j in range(d)})
    omega = {}
    for i, j, k in itertools.combinations(range(d), 3):
        v = sum(g.c[i][j][a] * kill[a][k] for a in range(d))
        if v:
            omega[(X[i], X[j], X[k])] = {c: v}
    return Lie2Quadruple(E, None, chi, br, SymValForm(E, 3, 1, omega))


def hand_example():
    E = GradedVectorSpace([(-2, ["f1", "f2"]), (-1, ["X1", "X2", "X3"])])
    partial = SymValForm.from_entries(E, 1, 1, [(("f1",), {E.slot("X1"): 1})])
    br = SymValForm.from_entries(E, 2, 1, [(("X2", "X3"), {E.slot("X1"): 1})])
    return Lie2Quadruple(E, partial, None, br)


def test_conversion_round_trip():
    E = GradedVectorSpace([(-2, 1), (-1, 2)])
    zero = Lie2Quadruple(E)
    assert not quadruple_mu_convert(zero)
    assert quadruple_mu_convert(FormSum(E, 1)) == zero
    q = trivial_lie2(["a", "b"])
    mu = quadruple_mu_convert(q)
    assert mu.arities() == (1,)
    rng = random.Random(4)
    for _ in range(20):
        q = random_lie2(rng)
        mu = quadruple_mu_convert(q)
        back = quadruple_mu_convert(mu)
        for name in ("partial", "chi", "bracket2", "omega"):
            assert getattr(back, name).table == getattr(q, name).table
        assert quadruple_mu_convert(back) == mu


def test_conversion_rejects_other_degrees():
    E = GradedVectorSpace([(-1, 1), (0, 1)])
    with pytest.raises(InputError):
        Lie2Quadruple(E)
    with pytest.raises(InputError):
        Lie2Quadruple.from_mu(FormSum(E, 1))


def test_check_quadruple_examples():
    E = GradedVectorSpace([(-2, 1), (-1, 2)])
    assert check_quadruple(Lie2Quadruple(E)).passed
    q = killing_cocycle_string(sl2())
    rep = check_quadruple(q)
    assert rep.passed and rep.details["agrees_with_linfty"]
    # d != 0, chi = 0, [X, df] != 0
    E = GradedVectorSpace([(-2, ["f"]), (-1, ["X", "Y"])])
    partial = SymValForm.from_entries(E, 1, 1, [(("f",), {E.slot("Y"): 1})])
    br = SymValForm.from_entries(E, 2, 1, [(("X", "Y"), {E.slot("Y"): 1})])
    rep = check_quadruple(Lie2Quadruple(E, partial, None, br))
    assert not rep.passed and rep.details["agrees_with_linfty"]
    assert not rep.details["relations"]["[X,df] = d(chi(X)f)"]
    # [X, dY-part]: [X, df] = [X, Y] = Y while chi = 0
    assert rep.witness.identity == "[X,df] = d(chi(X)f)"
    assert rep.witness.inputs == ("X", "f")


def test_check_quadruple_agrees_with_linfty_on_random_and_broken():
    rng = random.Random(21)
    for _ in range(30):
        q = random_lie2(rng)
        assert check_quadruple(q).passed
        broken = perturb_lie2(rng, q)
        rep = check_quadruple(broken)
        assert rep.passed == check_linfty(broken.to_mu()).passed


def test_ce_differential_arity_one_by_hand():
    # [eta, l2](X0, X1) = chi(X1) eta(X0) - chi(X0) eta(X1) + eta([X0, X1]) with the kernel's
    # insertion convention, the negative of the alternating sum
    q = killing_cocycle_string(sl2())
    E = q.space
    eta = SymValForm.from_entries(E, 1, -1, [(("h",), {E.slot("f_e"): 1}), (("e",), {E.slot("c"): 2})])
    l2 = q.to_mu().part(2)
    for a, b in itertools.combinations(q.X, 2):
        X0, X1 = E.basis(a), E.basis(b)
        by_hand = q.act(X1, eta(X0)) - q.act(X0, eta(X1)) + eta(q.br(X0, X1))
        assert rn_bracket(eta, l2).part(2)(X0, X1) == by_hand
        assert ce_differential(eta, q)(X0, X1) == -by_hand


def test_ce_differential_matches_rn_and_squares_to_zero():
    rng = random.Random(6)
    for g in (sl2(), so3(), heisenberg(), nonabelian_2d()):
        q = killing_cocycle_string(g)
        l2 = q.to_mu().part(2)
        E = q.space
        for k in (1, 2):
            for _ in range(3):
                eta = random_form(rng, E, k, k - 2, 0.7)
                eta = SymValForm(E, k, k - 2, {m: v for m, v in eta.table.items()
                                               if all(E.slot_degree[s] == -1 for s in m)})
                d1 = ce_differential(eta, q)
                assert FormSum.of(d1) == rn_bracket(eta, l2) * (-1) ** k
                assert d1 == ce_differential_rn(eta, q)
                assert not ce_differential(d1, q)
        assert not ce_differential(SymValForm.zero(E, 2, 0), q)


def test_ce_differential_rejects_wrong_profile():
    q = trivial_lie2(["a"])
    with pytest.raises(InputError):
        ce_differential(SymValForm.zero(q.space, 2, 1), q)


def test_alpha_string_case_always_nijenhuis():
    rng = random.Random(9)
    q = killing_cocycle_string(sl2())
    E = q.space
    for _ in range(8):
        alpha = random_form(rng, E, 2, 0, 0.6)
        alpha = SymValForm(E, 2, 0, {m: v for m, v in alpha.table.items() if all(E.slot_degree[s] == -1 for s in m)})
        verdict, deformed = alpha_nijenhuis(alpha, q)
        assert verdict.is_nijenhuis and verdict.square_name == "S + 2 alpha"
        assert verdict.details["inverse_restores_mu"] and verdict.details["deformed_matches_formula"]
        # only omega changes, by d_CE alpha
        assert deformed.partial == q.partial and deformed.chi == q.chi and deformed.bracket2 == q.bracket2
        assert deformed.omega == q.omega + ce_differential(alpha, q)


def test_alpha_from_lie_bracket_on_trivial_lie2():
    for g in (sl2(), heisenberg(), nonabelian_2d()):
        q = trivial_lie2(g.labels)
        verdict, _ = alpha_nijenhuis(alpha_from_lie_bracket(q, g), q)
        assert verdict.is_nijenhuis
    broken = LieAlgebra.from_brackets(["a", "b", "c"], {("a", "b"): {"b": 1}, ("a", "c"): {"c": 2}, ("b", "c"): {"a": 1}})
    assert not broken.is_lie()
    q = trivial_lie2(broken.labels)
    verdict, _ = alpha_nijenhuis(alpha_from_lie_bracket(q, broken), q)
    assert not verdict.is_nijenhuis and verdict.details["criterion_matches"]


def test_alpha_deformation_formula_on_random_input():
    rng = random.Random(12)
    for _ in range(15):
        q = random_lie2(rng)
        E = q.space
        alpha = random_form(rng, E, 2, 0, 0.5)
        alpha = SymValForm(E, 2, 0, {m: v for m, v in alpha.table.items() if all(E.slot_degree[s] == -1 for s in m)})
        verdict, deformed = alpha_nijenhuis(alpha, q)
        assert verdict.details["deformed_matches_formula"]
        assert verdict.details["inverse_restores_mu"]
        assert verdict.details["criterion_matches"]
        assert deformed.omega == q.omega + ce_differential(alpha, q)


def test_decompose_invertible_partial():
    q = trivial_lie2(["a", "b"])
    D = decompose_chi_zero(q)
    assert not D.alpha and D.string is None
    assert D.trivial is not None and D.trivial.space.dim == 4


def test_decompose_hand_example():
    q = hand_example()
    assert check_quadruple(q).passed
    D = decompose_chi_zero(q)
    E = q.space
    expected = SymValForm.from_entries(E, 2, 0, [(("X2", "X3"), {E.slot("f1"): -1})])
    assert D.alpha == expected
    assert not D.deformed.bracket2
    A = D.adapted_space
    assert sorted(A.labels[s] for s in D.string_slots) == ["X2", "X3", "ker0"]
    assert sorted(A.labels[s] for s in D.trivial_slots) == ["d(f1)", "f1"]
    # ker0 spans <f2>
    assert D.report.details["string_dims"] == [1, 2]


def test_decompose_rejects_chi():
    with pytest.raises(PreconditionError):
        decompose_chi_zero(killing_cocycle_string(sl2()))


def test_decompose_alpha_is_unique_and_vanishes_on_image():
    rng = random.Random(13)
    for _ in range(10):
        q = random_chi_zero_lie2(rng)
        D = decompose_chi_zero(q)
        assert D.report.passed
        assert D.report.details["checks"]["alpha vanishes on the image of d"]
        E, A = q.space, D.adapted_space
        complement = [E.slot(A.labels[s]) for s in D.trivial_slots if A.slot_degree[s] == -2]
        # alpha takes values in the chosen complement, where d is injective, so any
        # bump there changes d alpha and breaks the defining equation
        for v in D.alpha.table.values():
            assert set(v) <= set(complement)
        for mono in itertools.combinations(q.X, 2):
            for f in complement:
                bumped = D.alpha + SymValForm(E, 2, 0, {mono: {f: 1}})
                x, y = E.basis(mono[0]), E.basis(mono[1])
                assert q.d(bumped(x, y)) != q.d(D.alpha(x, y))


def test_crossed_modules():
    g = abelian(2)
    ident = [[Fraction(int(i == j)) for j in range(2)] for i in range(2)]
    zero_action = [[[Fraction(0)] * 2 for _ in range(2)] for _ in range(2)]
    assert CrossedModule(g, g, ident, zero_action).check().passed
    s = sl2()
    ad = [s.ad(i) for i in range(3)]
    ident3 = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    cm = CrossedModule(s, s, ident3, ad)
    assert cm.check().passed
    q = quadruple_from_crossed_module(cm)
    assert check_quadruple(q).passed
    back = crossed_module_from_quadruple(q)
    assert back.g == s and back.h == s and back.check().passed
    bad_action = [[[Fraction(int(i == j)) for j in range(3)] for i in range(3)]] + ad[1:]
    rep = CrossedModule(s, s, ident3, bad_action).check()
    assert not rep.passed and rep.witness is not None


def test_crossed_module_needs_omega_zero():
    with pytest.raises(PreconditionError):
        crossed_module_from_quadruple(killing_cocycle_string(sl2()))


def test_tilde_alpha():
    q = trivial_lie2(["a", "b"])
    out = tilde_alpha_and_weak_rep(SymValForm.zero(q.space, 2, 0), q)
    assert out["tilde_alpha_is_lie"] and not any(any(v) for row in out["tilde_alpha"].c for v in row)
    for g in (sl2(), heisenberg()):
        q = trivial_lie2(g.labels)
        out = tilde_alpha_and_weak_rep(alpha_from_lie_bracket(q, g), q)
        assert out["tilde_alpha"].jacobi_residual() is None
        assert out["matches_nijenhuis"] and out["weak_matches"]
        assert out["is_representation"]


def test_weak_rep_on_random_alpha():
    rng = random.Random(17)
    seen_weak = 0
    for _ in range(25):
        q = trivial_lie2(["a", "b"])
        alpha = random_form(rng, q.space, 2, 0, 0.8)
        out = tilde_alpha_and_weak_rep(alpha, q)
        assert out["weak_matches"] and out["matches_nijenhuis"]
        if "lie_algebra" in out:
            seen_weak += 1
            assert out["lie_algebra"].is_lie() and out["is_representation"]
    assert seen_weak


def test_ce_cocycles():
    assert len(ce_cocycles(sl2(), 3)) == 1
    assert len(ce_cocycles(heisenberg(), 2)) == 3
    assert len(ce_cocycles(abelian(3), 2)) == 3
