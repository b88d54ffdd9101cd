"""Finite-dimensional Z-graded vector spaces over the rationals.

Basis slots are numbered globally: components are sorted by degree and the
slots of each component follow in label order.  Permutations are tuples of
0-based images, ``perm[i]`` being the image of position ``i``.
"""

from __future__ import annotations

import itertools
import os
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ArityCapExceeded, InputError, NotHomogeneous

DEFAULT_ARITY_CAP = 8


def arity_cap() -> int:
    raw = os.environ.get("LINFTY_ARITY_CAP")
    if raw is None:
        return DEFAULT_ARITY_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"LINFTY_ARITY_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError("LINFTY_ARITY_CAP must be positive")
    return cap


def check_arity(n: int) -> None:
    cap = arity_cap()
    if n > cap:
        raise ArityCapExceeded(f"arity {n} exceeds the arity cap {cap}")


def to_fraction(value) -> Fraction:
    """Exact conversion of ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"malformed rational {value!r}") from None
    if hasattr(value, "p") and hasattr(value, "q"):  # sympy Rational
        return Fraction(int(value.p), int(value.q))
    raise InputError(f"cannot use {value!r} as an exact scalar")


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class GradedVectorSpace:
    """E = sum of finitely many components E_d with labelled bases."""

    def __init__(self, components: Iterable):
        comps = []
        for comp in components:
            if isinstance(comp, Mapping):
                degree, labels = comp["degree"], comp.get("labels", comp.get("dimension"))
            else:
                degree, labels = comp
            if isinstance(labels, int):
                labels = [f"x{degree}_{i}" for i in range(labels)]
            labels = tuple(str(lab) for lab in labels)
            if not isinstance(degree, int) or isinstance(degree, bool):
                raise InputError(f"degree must be an integer, got {degree!r}")
            if not labels:
                raise InputError(f"component of degree {degree} is empty")
            comps.append((degree, labels))
        if not comps:
            raise InputError("a graded space needs at least one component")
        comps.sort(key=lambda c: c[0])
        degrees = [d for d, _ in comps]
        if len(set(degrees)) != len(degrees):
            raise InputError("component degrees must be distinct")
        self.components = tuple(comps)
        self.slot_degree = tuple(d for d, labs in comps for _ in labs)
        self.labels = tuple(lab for _, labs in comps for lab in labs)
        if len(set(self.labels)) != len(self.labels):
            raise InputError("basis labels must be unique")
        self._label_slot = {lab: s for s, lab in enumerate(self.labels)}
        self._ranges = {}
        start = 0
        for d, labs in comps:
            self._ranges[d] = range(start, start + len(labs))
            start += len(labs)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def degrees(self) -> tuple:
        return tuple(d for d, _ in self.components)

    def has_degree(self, d: int) -> bool:
        return d in self._ranges

    def slots(self, degree: int | None = None) -> range:
        if degree is None:
            return range(self.dim)
        return self._ranges.get(degree, range(0))

    def slot(self, label: str) -> int:
        try:
            return self._label_slot[label]
        except KeyError:
            raise InputError(f"unknown basis label {label!r}") from None

    def slot_key(self, s: int) -> tuple:
        """The (degree, index-within-component) key of a global slot."""
        d = self.slot_degree[s]
        return d, s - self._ranges[d].start

    def basis(self, s) -> "Element":
        if isinstance(s, str):
            s = self.slot(s)
        return Element(self, {s: Fraction(1)})

    def element(self, coeffs: Mapping) -> "Element":
        out = {}
        for key, c in coeffs.items():
            s = self.slot(key) if isinstance(key, str) else key
            if not 0 <= s < self.dim:
                raise InputError(f"slot {s} out of range")
            out[s] = out.get(s, Fraction(0)) + to_fraction(c)
        return Element(self, out)

    def zero(self) -> "Element":
        return Element(self, {})

    def shift(self, p: int) -> "GradedVectorSpace":
        """E[p], whose degree-i component is E_{i+p}."""
        return GradedVectorSpace([(d - p, labs) for d, labs in self.components])

    def to_json(self) -> dict:
        return {"components": [{"degree": d, "labels": list(labs)} for d, labs in self.components]}

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        inner = ", ".join(f"{d}:{len(labs)}" for d, labs in self.components)
        return f"GradedVectorSpace({inner})"


class Element:
    """A vector of E with exact coefficients, stored sparsely by slot."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space: GradedVectorSpace, coeffs: Mapping[int, Fraction]):
        self.space = space
        self.coeffs = {s: Fraction(c) for s, c in coeffs.items() if c}

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            return NotImplemented
        if other.space != self.space:
            raise InputError("elements live in different spaces")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, 0) + c
        return Element(self.space, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Element(self.space, {s: -c for s, c in self.coeffs.items()})

    def __mul__(self, scalar):
        q = to_fraction(scalar)
        return Element(self.space, {s: q * c for s, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Element) and self.space == other.space and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        return degree_of(self)

    def is_homogeneous(self) -> bool:
        return len({self.space.slot_degree[s] for s in self.coeffs}) <= 1

    def to_json(self) -> dict:
        return {self.space.labels[s]: fraction_str(c) for s, c in sorted(self.coeffs.items())}

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{fraction_str(c)}*{self.space.labels[s]}" for s, c in sorted(self.coeffs.items()))


def degree_of(x: Element) -> int:
    degs = {x.space.slot_degree[s] for s in x.coeffs}
    if len(degs) != 1:
        raise NotHomogeneous("zero element has no degree" if not degs else f"mixed degrees {sorted(degs)}")
    return degs.pop()


def _check_perm(perm: Sequence[int]) -> None:
    if sorted(perm) != list(range(len(perm))):
        raise InputError(f"{tuple(perm)} is not a permutation of 0..{len(perm) - 1}")


def koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign e with X_{perm[0]} (x) ... (x) X_{perm[n-1]} = e X_0 (x) ... (x) X_{n-1}."""
    if len(perm) != len(degrees):
        raise InputError("permutation and degree sequence differ in length")
    _check_perm(perm)
    odd = [degrees[p] % 2 for p in perm]
    flips = 0
    for a in range(len(perm)):
        if not odd[a]:
            continue
        for b in range(a + 1, len(perm)):
            if odd[b] and perm[a] > perm[b]:
                flips += 1
    return -1 if flips % 2 else 1


def permutation_sign(perm: Sequence[int]) -> int:
    _check_perm(perm)
    inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


def compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """(p o q)[i] = p[q[i]]."""
    return tuple(p[i] for i in q)


def unshuffles(i: int, j: int) -> list:
    """All (i, j)-unshuffles in lexicographic order of their image tuples."""
    if i < 0 or j < 0:
        raise InputError("unshuffle sizes must be nonnegative")
    check_arity(i + j)
    out = []
    for head in itertools.combinations(range(i + j), i):
        chosen = set(head)
        out.append(head + tuple(k for k in range(i + j) if k not in chosen))
    return out
