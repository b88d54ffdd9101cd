import random
from collections import defaultdict
from fractions import Fraction

import pytest

from nijenhuis_forms.errors import InputError
from nijenhuis_forms.graded import Element, GradedVectorSpace, koszul_sign, unshuffles
from nijenhuis_forms.linfty import generalized_jacobi
from nijenhuis_forms.sampling import random_form, random_formsum, random_space, viable_degree
from nijenhuis_forms.symforms import (
    FormSum, SymValForm, decalage, euler_form, evaluate, insertion, inverse_decalage,
    monomials, rn_bracket, skew_jacobi_residuals,
)


def dense_insertion(K, L):
    """iota_K L straight from the unshuffle sum, evaluated on every canonical monomial."""
    space = K.space
    deg = space.slot_degree
    if L.arity == 0:
        return FormSum(space, K.degree + L.degree)
    k, n = K.arity, K.arity + L.arity - 1

    def value(mono):
        acc = defaultdict(Fraction)
        for sigma in unshuffles(k, n - k):
            xs = [mono[p] for p in sigma]
            sign = koszul_sign(sigma, [deg[s] for s in mono])
            for s, c in K.on_basis(xs[:k]).items():
                for o, d in L.on_basis((s, *xs[k:])).items():
                    acc[o] += sign * c * d
        return dict(acc)

    return FormSum.of(SymValForm.from_function(space, n, K.degree + L.degree, value))


def sample_triples(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        E = random_space(rng, max_dim=6, degrees=range(-3, 1))
        forms = []
        for _ in range(3):
            k = rng.randint(0, 3)
            forms.append(random_form(rng, E, k, viable_degree(rng, E, k, -2, 2), 0.8))
        yield E, forms


def test_sparse_insertion_matches_definition():
    for E, (K, L, _) in sample_triples(1, 120):
        assert insertion(K, L) == dense_insertion(K, L)


def test_symmetry_of_evaluation():
    rng = random.Random(3)
    for _ in range(30):
        E = random_space(rng, 5)
        K = random_form(rng, E, 2, rng.randint(-1, 1), 0.8)
        for s in range(E.dim):
            for t in range(E.dim):
                X, Y = E.basis(s), E.basis(t)
                sign = -1 if (X.degree * Y.degree) % 2 else 1
                assert K(X, Y) == K(Y, X) * sign


def test_zero_form_and_arity_zero():
    E = GradedVectorSpace([(-1, ["a", "b"])])
    Z = SymValForm.zero(E, 2, 1)
    assert not Z(E.basis("a"), E.basis("b"))
    x = E.basis("a") * 3
    X = SymValForm.from_element(x)
    assert X() == x and X.degree == -1
    with pytest.raises(InputError):
        Z(E.basis("a"))


def test_insertion_with_elements():
    rng = random.Random(5)
    E = random_space(rng, 5)
    K = random_form(rng, E, 2, 1, 1.0)
    for s in range(E.dim):
        x = E.basis(s)
        X = SymValForm.from_element(x)
        assert not insertion(K, X)
        unary = insertion(X, K).part(1)
        for t in range(E.dim):
            assert unary(E.basis(t)) == K(x, E.basis(t))


def test_iota_l2_l2_explicit():
    rng = random.Random(7)
    for _ in range(10):
        E = random_space(rng, 4, degrees=range(-2, 1))
        l2 = random_form(rng, E, 2, 1, 0.8)
        ins = insertion(l2, l2).part(3)
        d = E.slot_degree
        for x, y, z in monomials(E, 3, 2):
            X, Y, Z = E.basis(x), E.basis(y), E.basis(z)
            s1 = -1 if (d[y] * d[z]) % 2 else 1
            s2 = -1 if (d[x] * (d[y] + d[z])) % 2 else 1
            expect = l2(l2(X, Y), Z) + l2(l2(X, Z), Y) * s1 + l2(l2(Y, Z), X) * s2
            assert ins(X, Y, Z) == expect


def test_rn_graded_antisymmetry_and_jacobi():
    # draws with a vanishing double bracket are checked too but not counted
    nontrivial = checked = 0
    for E, (K, L, M) in sample_triples(11, 2000):
        a, b = K.degree, L.degree
        sKL = -1 if (a * b) % 2 else 1
        assert rn_bracket(K, L) == rn_bracket(L, K) * (-sKL)
        lhs = rn_bracket(K, rn_bracket(L, M))
        rhs = rn_bracket(rn_bracket(K, L), M) + rn_bracket(L, rn_bracket(K, M)) * sKL
        assert lhs == rhs
        checked += 1
        nontrivial += bool(lhs) or bool(rhs)
        if nontrivial >= 100:
            break
    assert nontrivial >= 100, (nontrivial, checked)


def test_euler_lemma():
    rng = random.Random(13)
    for degree in range(-2, 3):
        for _ in range(8):
            E = random_space(rng, 5)
            alpha = random_form(rng, E, rng.randint(0, 3), degree, 0.7)
            S = euler_form(E)
            assert rn_bracket(S, alpha) == FormSum.of(alpha) * degree
    E = random_space(rng, 5)
    assert not rn_bracket(euler_form(E), euler_form(E))


def test_euler_values():
    E = GradedVectorSpace([(-2, ["f"]), (0, ["z"])])
    S = euler_form(E)
    assert S(E.basis("f")) == E.basis("f") * 2
    assert not S(E.basis("z"))


def test_elements_commute():
    E = GradedVectorSpace([(-1, ["a"]), (0, ["b"])])
    X = SymValForm.from_element(E.basis("a"))
    Y = SymValForm.from_element(E.basis("b"))
    assert not rn_bracket(X, Y)


def test_nested_bracket_evaluation():
    rng = random.Random(17)
    for _ in range(25):
        E = random_space(rng, 5)
        k = rng.randint(1, 4)
        K = random_form(rng, E, k, rng.randint(-1, 1), 0.6)
        args = [rng.randrange(E.dim) for _ in range(k)]
        nested = FormSum.of(K)
        for s in args:
            nested = rn_bracket(SymValForm.from_element(E.basis(s)), nested)
        expected = K(*[E.basis(s) for s in args])
        got = nested.part(0).element() if 0 in nested.parts else E.zero()
        assert got == expected


def test_square_is_twice_insertions():
    rng = random.Random(19)
    for _ in range(20):
        E = random_space(rng, 5)
        mu = random_formsum(rng, E, 1, (1, 2, 3), 0.4)
        total = FormSum(E, 2)
        for li in mu:
            for lj in mu:
                total = total + insertion(li, lj)
        assert rn_bracket(mu, mu) == total * 2


def test_decalage_round_trip():
    rng = random.Random(23)
    for _ in range(60):
        E = random_space(rng, 5)
        mu = random_formsum(rng, E, 1, (1, 2, 3), 0.5)
        assert inverse_decalage(decalage(mu), E) == mu


def test_decalage_unary_unchanged():
    rng = random.Random(29)
    E = GradedVectorSpace([(-2, ["f1", "f2"]), (-1, ["x1", "x2"])])
    l1 = random_form(rng, E, 1, 1, 1.0)
    assert l1
    assert decalage(FormSum.of(l1))[1].table == l1.table


def test_decalage_binary_on_degree_minus_one():
    E = GradedVectorSpace([(-1, ["h", "e", "f"])])
    l2 = SymValForm.from_entries(E, 2, 1, [(("h", "e"), {"e": 2}), (("h", "f"), {"f": -2}), (("e", "f"), {"h": 1})])
    skew = decalage(FormSum.of(l2))[2]
    assert skew.space.degrees == (0,)
    assert skew.degree == 0
    for s in range(3):
        for t in range(3):
            # sign (-1)^{|X_1|} with |X_1| = -1
            assert skew.on_basis((s, t)) == {o: -c for o, c in l2.on_basis((s, t)).items()}
            assert skew.on_basis((s, t)) == {o: -c for o, c in skew.on_basis((t, s)).items()}


def test_skew_and_symmetric_jacobi_agree():
    rng = random.Random(31)
    for trial in range(40):
        E = random_space(rng, 4, degrees=range(-2, 2))
        mu = random_formsum(rng, E, 1, (1, 2, 3), 0.3 if trial % 2 else 0.7)
        skew = decalage(mu)
        for mono, res in skew_jacobi_residuals(skew):
            assert bool(res) == bool(generalized_jacobi(mu, mono))


def test_inverse_rejects_wrong_degree():
    E = GradedVectorSpace([(-2, ["f"]), (-1, ["a"])])
    fam = decalage(FormSum.of(SymValForm(E, 1, 1, {(0,): {1: 1}})))
    fam[1].degree = 0
    with pytest.raises(InputError):
        inverse_decalage(fam, E)
