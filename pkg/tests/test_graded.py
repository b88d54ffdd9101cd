import itertools
import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from nijenhuis_forms.errors import InputError, NotHomogeneous
from nijenhuis_forms.graded import (
    GradedVectorSpace, compose, koszul_sign, permutation_sign, to_fraction, unshuffles,
)


def adjacent_oracle(perm, degrees):
    # bubble sort the arranged tuple back to the identity, one adjacent swap at a time
    seq = list(perm)
    sign = 1
    changed = True
    while changed:
        changed = False
        for a in range(len(seq) - 1):
            if seq[a] > seq[a + 1]:
                if degrees[seq[a]] % 2 and degrees[seq[a + 1]] % 2:
                    sign = -sign
                seq[a], seq[a + 1] = seq[a + 1], seq[a]
                changed = True
    return sign


def test_identity_and_swap():
    assert koszul_sign((0, 1, 2), (3, -1, 5)) == 1
    assert koszul_sign((1, 0), (-1, -1)) == -1
    assert koszul_sign((1, 0), (-1, -2)) == 1


def test_three_cycle_against_adjacent_swaps():
    perm = (1, 2, 0)
    assert koszul_sign(perm, (-1, -2, -1)) == adjacent_oracle(perm, (-1, -2, -1)) == -1


perm_and_degrees = st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.permutations(range(n)), st.permutations(range(n)),
                        st.lists(st.integers(-4, 4), min_size=n, max_size=n)))


@given(perm_and_degrees)
def test_matches_oracle_and_is_multiplicative(data):
    p, q, degrees = data
    assert koszul_sign(p, degrees) == adjacent_oracle(p, degrees)
    permuted = [degrees[i] for i in p]
    assert koszul_sign(compose(p, q), degrees) == koszul_sign(q, permuted) * koszul_sign(p, degrees)


@given(perm_and_degrees)
def test_even_degrees_give_plus(data):
    p, _, degrees = data
    assert koszul_sign(p, [2 * d for d in degrees]) == 1


def test_all_odd_is_permutation_sign():
    for p in itertools.permutations(range(4)):
        assert koszul_sign(p, (1, 1, 1, 1)) == permutation_sign(p)


def test_size_mismatch():
    with pytest.raises(InputError):
        koszul_sign((0, 1), (1,))


def test_unshuffle_examples():
    assert unshuffles(0, 3) == [(0, 1, 2)]
    assert unshuffles(1, 1) == [(0, 1), (1, 0)]


def test_unshuffles_match_filtered_permutations():
    for i in range(5):
        for j in range(5 - i):
            brute = [p for p in itertools.permutations(range(i + j))
                     if list(p[:i]) == sorted(p[:i]) and list(p[i:]) == sorted(p[i:])]
            assert unshuffles(i, j) == sorted(brute)
    assert len(unshuffles(2, 2)) == 6


def test_unshuffle_counts():
    for n in range(8):
        for i in range(n + 1):
            assert len(unshuffles(i, n - i)) == comb(n, i)


def test_arity_cap(monkeypatch):
    monkeypatch.setenv("LINFTY_ARITY_CAP", "3")
    with pytest.raises(InputError):
        unshuffles(2, 2)


def test_space_and_elements():
    E = GradedVectorSpace([(-1, ["e1", "e2"]), (-2, ["f"])])
    assert E.degrees == (-2, -1)
    assert E.labels == ("f", "e1", "e2")
    x = E.basis("e1")
    assert not (x + (-1) * x)
    assert E.basis("f").degree == -2
    with pytest.raises(NotHomogeneous):
        (x + E.basis("f")).degree
    with pytest.raises(NotHomogeneous):
        E.zero().degree
    assert E.shift(-1).degrees == (-1, 0)
    assert E.slot_key(2) == (-1, 1)


def test_space_validation():
    with pytest.raises(InputError):
        GradedVectorSpace([(-1, ["a"]), (-1, ["b"])])
    with pytest.raises(InputError):
        GradedVectorSpace([(0, [])])
    with pytest.raises(InputError):
        GradedVectorSpace([])


def test_rationals():
    assert to_fraction("3/6") == to_fraction(1) / 2
    with pytest.raises(InputError):
        to_fraction("1/0")
    with pytest.raises(InputError):
        to_fraction(0.5)
