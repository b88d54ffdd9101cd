"""Graded symmetric vector-valued forms and the Richardson-Nijenhuis bracket.

A form of arity k stores one output vector per canonical monomial, i.e. per
nondecreasing tuple of basis slots.  Evaluation on any other ordering picks up
the Koszul sign of the sorting permutation.  Monomials repeating an odd slot
are zero and are never stored.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping

from .errors import InputError
from .graded import (
    Element,
    GradedVectorSpace,
    check_arity,
    fraction_str,
    permutation_sign,
    to_fraction,
    unshuffles,
    koszul_sign,
)


def sort_sign(space: GradedVectorSpace, slots) -> tuple:
    """(sign, sorted slots) for a tuple of basis slots; sign 0 if the monomial vanishes."""
    deg = space.slot_degree
    srt = tuple(sorted(slots))
    for a, b in zip(srt, srt[1:]):
        if a == b and deg[a] % 2:
            return 0, srt
    flips = 0
    for a in range(len(slots)):
        if deg[slots[a]] % 2:
            for b in range(a + 1, len(slots)):
                if slots[b] < slots[a] and deg[slots[b]] % 2:
                    flips += 1
    return (-1 if flips % 2 else 1), srt


def monomials(space: GradedVectorSpace, arity: int, degree: int = 0):
    """Canonical monomials whose outputs under a form of the given degree can be nonzero."""
    deg = space.slot_degree
    for mono in itertools.combinations_with_replacement(range(space.dim), arity):
        if not space.has_degree(sum(deg[s] for s in mono) + degree):
            continue
        if any(a == b and deg[a] % 2 for a, b in zip(mono, mono[1:])):
            continue
        yield mono


def _vec(value, space) -> dict:
    if value is None:
        return {}
    if isinstance(value, Element):
        if value.space != space:
            raise InputError("output lives in a different space")
        return dict(value.coeffs)
    out = {}
    for key, c in value.items():
        s = space.slot(key) if isinstance(key, str) else key
        c = to_fraction(c)
        if c:
            out[s] = out.get(s, 0) + c
    return {s: c for s, c in out.items() if c}


class SymValForm:
    """A graded symmetric k-linear map E^k -> E of a fixed degree."""

    __slots__ = ("space", "arity", "degree", "table")

    def __init__(self, space: GradedVectorSpace, arity: int, degree: int, table: Mapping | None = None):
        if arity < 0:
            raise InputError("arity must be nonnegative")
        check_arity(arity)
        self.space = space
        self.arity = arity
        self.degree = degree
        deg = space.slot_degree
        clean = {}
        for mono, out in (table or {}).items():
            mono = tuple(mono)
            if len(mono) != arity or list(mono) != sorted(mono):
                raise InputError(f"monomial {mono} is not canonical of length {arity}")
            out = {s: Fraction(c) for s, c in out.items() if c}
            if not out:
                continue
            if any(a == b and deg[a] % 2 for a, b in zip(mono, mono[1:])):
                raise InputError(f"monomial {mono} repeats an odd slot")
            target = sum(deg[s] for s in mono) + degree
            if any(deg[s] != target for s in out):
                raise InputError(f"output at {mono} is not of degree {target}")
            clean[mono] = out
        self.table = clean

    # construction helpers
    @classmethod
    def zero(cls, space, arity, degree):
        return cls(space, arity, degree, {})

    @classmethod
    def from_element(cls, x: Element, degree: int | None = None):
        if x:
            d = x.degree
            if degree is not None and degree != d:
                raise InputError(f"element has degree {d}, expected {degree}")
            degree = d
        elif degree is None:
            raise InputError("a zero element needs an explicit degree")
        return cls(x.space, 0, degree, {(): dict(x.coeffs)} if x else {})

    @classmethod
    def from_function(cls, space, arity, degree, fn: Callable):
        """Tabulate fn(slots) -> Element or slot dict on every canonical monomial."""
        return cls(space, arity, degree, {m: _vec(fn(m), space) for m in monomials(space, arity, degree)})

    @classmethod
    def from_entries(cls, space, arity, degree, entries: Iterable):
        """Build from (inputs, output) pairs; inputs may be labels or slots in any order."""
        table = {}
        for inputs, output in entries:
            slots = tuple(space.slot(i) if isinstance(i, str) else i for i in inputs)
            if len(slots) != arity:
                raise InputError(f"entry {inputs} has the wrong arity")
            sign, mono = sort_sign(space, slots)
            vec = _vec(output, space)
            if sign == 0:
                if vec:
                    raise InputError(f"entry {inputs} repeats an odd slot but is nonzero")
                continue
            vec = {s: sign * c for s, c in vec.items()}
            if mono in table and table[mono] != vec:
                raise InputError(f"conflicting entries for monomial {mono}")
            table[mono] = vec
        return cls(space, arity, degree, table)

    # evaluation
    def on_basis(self, slots) -> dict:
        if len(slots) != self.arity:
            raise InputError(f"expected {self.arity} arguments, got {len(slots)}")
        sign, mono = sort_sign(self.space, tuple(slots))
        if sign == 0:
            return {}
        out = self.table.get(mono)
        if not out:
            return {}
        return out if sign == 1 else {s: -c for s, c in out.items()}

    def __call__(self, *args: Element) -> Element:
        return evaluate(self, args)

    def element(self) -> Element:
        if self.arity != 0:
            raise InputError("only arity-0 forms are elements")
        return Element(self.space, self.table.get((), {}))

    # algebra
    def _compatible(self, other):
        if not isinstance(other, SymValForm):
            return False
        if other.space != self.space or other.arity != self.arity or other.degree != self.degree:
            raise InputError("forms differ in space, arity or degree")
        return True

    def __add__(self, other):
        if not self._compatible(other):
            return NotImplemented
        table = {m: dict(v) for m, v in self.table.items()}
        for m, v in other.table.items():
            acc = table.setdefault(m, {})
            for s, c in v.items():
                acc[s] = acc.get(s, 0) + c
        return SymValForm(self.space, self.arity, self.degree, table)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        q = to_fraction(scalar)
        return SymValForm(self.space, self.arity, self.degree,
                          {m: {s: q * c for s, c in v.items()} for m, v in self.table.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymValForm):
            return NotImplemented
        return (self.space == other.space and self.arity == other.arity
                and self.degree == other.degree and self.table == other.table)

    def __bool__(self):
        return bool(self.table)

    def __repr__(self):
        return f"SymValForm(arity={self.arity}, degree={self.degree}, entries={len(self.table)})"

    def to_json(self) -> dict:
        labels = self.space.labels
        entries = []
        for mono in sorted(self.table):
            out = self.table[mono]
            entries.append({"inputs": [labels[s] for s in mono],
                            "output": {labels[s]: fraction_str(c) for s, c in sorted(out.items())}})
        return {"arity": self.arity, "degree": self.degree, "entries": entries}


def evaluate(form: SymValForm, args) -> Element:
    """Multilinear evaluation on arbitrary elements."""
    args = tuple(args)
    if len(args) != form.arity:
        raise InputError(f"expected {form.arity} arguments, got {len(args)}")
    for a in args:
        if not isinstance(a, Element) or a.space != form.space:
            raise InputError("argument from a foreign space")
    acc: dict = {}
    for combo in itertools.product(*(a.coeffs.items() for a in args)):
        coef = Fraction(1)
        for _, c in combo:
            coef *= c
        for s, c in form.on_basis(tuple(s for s, _ in combo)).items():
            acc[s] = acc.get(s, 0) + coef * c
    return Element(form.space, acc)


class FormSum:
    """A finite sum of forms of one common degree, at most one per arity."""

    __slots__ = ("space", "degree", "parts")

    def __init__(self, space: GradedVectorSpace, degree: int, forms: Iterable[SymValForm] = ()):
        self.space = space
        self.degree = degree
        parts: dict = {}
        for f in forms:
            if f.space != space:
                raise InputError("form from a foreign space")
            if f.degree != degree:
                raise InputError(f"form of degree {f.degree} in a sum of degree {degree}")
            parts[f.arity] = parts[f.arity] + f if f.arity in parts else f
        self.parts = {k: f for k, f in sorted(parts.items()) if f}

    @classmethod
    def of(cls, *forms):
        forms = [f for f in forms if f is not None]
        if not forms:
            raise InputError("FormSum.of needs at least one form")
        return cls(forms[0].space, forms[0].degree, forms)

    def part(self, arity: int) -> SymValForm:
        return self.parts.get(arity) or SymValForm.zero(self.space, arity, self.degree)

    def arities(self):
        return tuple(self.parts)

    @property
    def max_arity(self) -> int:
        return max(self.parts, default=0)

    def restrict(self, arities) -> "FormSum":
        keep = set(arities)
        return FormSum(self.space, self.degree, [f for k, f in self.parts.items() if k in keep])

    def __add__(self, other):
        other = as_formsum(other)
        if other.space != self.space:
            raise InputError("sums over different spaces")
        if not self.parts:
            return FormSum(self.space, other.degree, other.parts.values())
        if not other.parts:
            return self
        if other.degree != self.degree:
            raise InputError(f"cannot add degree {self.degree} and degree {other.degree} sums")
        return FormSum(self.space, self.degree, list(self.parts.values()) + list(other.parts.values()))

    def __radd__(self, other):
        return as_formsum(other) + self

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-as_formsum(other))

    def __mul__(self, scalar):
        return FormSum(self.space, self.degree, [f * scalar for f in self.parts.values()])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, SymValForm):
            other = FormSum.of(other)
        if not isinstance(other, FormSum):
            return NotImplemented
        if self.space != other.space or self.parts != other.parts:
            return False
        return not self.parts or self.degree == other.degree

    def __bool__(self):
        return bool(self.parts)

    def __iter__(self):
        return iter(self.parts.values())

    def __repr__(self):
        return f"FormSum(degree={self.degree}, arities={list(self.parts)})"

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "degree": self.degree,
                "parts": [f.to_json() for f in self.parts.values()]}


def as_formsum(x) -> FormSum:
    if isinstance(x, FormSum):
        return x
    if isinstance(x, SymValForm):
        return FormSum(x.space, x.degree, [x])
    if isinstance(x, Element):
        return FormSum.of(SymValForm.from_element(x))
    raise InputError(f"cannot interpret {type(x).__name__} as a form")


def _insert_forms(K: SymValForm, L: SymValForm):
    """iota_K L via the sparse product of the two tables."""
    if L.arity == 0:
        return None
    k, n = K.arity, K.arity + L.arity - 1
    check_arity(n)
    deg = K.space.slot_degree
    acc: dict = defaultdict(lambda: defaultdict(Fraction))
    for A, v in K.table.items():
        countA = Counter(A)
        for B, w in L.table.items():
            seen = set()
            for pos, s in enumerate(B):
                if s in seen or s not in v:
                    continue
                seen.add(s)
                rest = B[:pos] + B[pos + 1:]
                front = sum(deg[r] for r in rest if r < s) * deg[s]
                M = tuple(sorted(A + rest))
                if any(a == b and deg[a] % 2 for a, b in zip(M, M[1:])):
                    continue
                shuffle = sum(deg[a] * deg[r] for a in A for r in rest if r < a)
                countM = Counter(M)
                mult = 1
                for t, c in countA.items():
                    mult *= comb(countM[t], c)
                coef = v[s] * mult * (-1 if (front + shuffle) % 2 else 1)
                out = acc[M]
                for o, c in w.items():
                    out[o] += coef * c
    return SymValForm(K.space, n, K.degree + L.degree, {m: dict(o) for m, o in acc.items()})


def insertion(K, L) -> FormSum:
    """The insertion operator iota_K L, bilinear over the parts of sums."""
    K, L = as_formsum(K), as_formsum(L)
    if K.space != L.space:
        raise InputError("insertion of forms over different spaces")
    out = [f for a in K for b in L if (f := _insert_forms(a, b)) is not None]
    return FormSum(K.space, K.degree + L.degree, out)


def rn_bracket(K, L) -> FormSum:
    """[K, L] = iota_K L - (-1)^{deg K deg L} iota_L K."""
    K, L = as_formsum(K), as_formsum(L)
    sign = -1 if (K.degree * L.degree) % 2 else 1
    return insertion(K, L) - insertion(L, K) * sign


def euler_form(space: GradedVectorSpace) -> SymValForm:
    """S(X) = -|X| X."""
    deg = space.slot_degree
    return SymValForm(space, 1, 0, {(s,): {s: Fraction(-deg[s])} for s in range(space.dim) if deg[s]})


def identity_form(space: GradedVectorSpace) -> SymValForm:
    return SymValForm(space, 1, 0, {(s,): {s: Fraction(1)} for s in range(space.dim)})


def linear_form(space: GradedVectorSpace, matrix: Mapping) -> SymValForm:
    """Unary degree-0 form from {input slot: {output slot: coeff}}."""
    return SymValForm(space, 1, 0, {(s,): _vec(col, space) for s, col in matrix.items()})


def compose_unary(N: SymValForm, M: SymValForm) -> SymValForm:
    """(N o M)(X) = N(M(X)) for unary forms."""
    if N.arity != 1 or M.arity != 1:
        raise InputError("composition needs unary forms")

    def value(mono):
        acc: dict = {}
        for s, c in M.on_basis(mono).items():
            for o, d in N.on_basis((s,)).items():
                acc[o] = acc.get(o, 0) + c * d
        return acc

    return SymValForm.from_function(N.space, 1, N.degree + M.degree, value)


def change_basis(form: SymValForm, new_space: GradedVectorSpace, to_new: Callable, to_old: Callable) -> SymValForm:
    """Transport a form along a degree-preserving isomorphism T: old -> new.

    ``to_old`` maps a slot of the new space to an Element of the old space and
    ``to_new`` maps an Element of the old space to one of the new space.
    """
    def value(mono):
        return to_new(evaluate(form, [to_old(s) for s in mono]))

    return SymValForm.from_function(new_space, form.arity, form.degree, value)


# decalage


class SkewForm:
    """A graded skew-symmetric form, stored on canonical monomials.

    Only produced by :func:`decalage`; evaluation on a permuted tuple picks up
    the Koszul sign times the sign of the permutation.
    """

    __slots__ = ("space", "arity", "degree", "table")

    def __init__(self, space, arity, degree, table):
        self.space, self.arity, self.degree = space, arity, degree
        self.table = {m: {s: Fraction(c) for s, c in v.items() if c} for m, v in table.items()}
        self.table = {m: v for m, v in self.table.items() if v}

    def on_basis(self, slots) -> dict:
        slots = tuple(slots)
        deg = self.space.slot_degree
        order = sorted(range(len(slots)), key=lambda a: slots[a])
        mono = tuple(slots[a] for a in order)
        if any(a == b and deg[a] % 2 == 0 for a, b in zip(mono, mono[1:])):
            return {}
        # slots[order[i]] = mono[i]: mono is slots rearranged by `order`
        sign = koszul_sign(order, [deg[s] for s in slots]) * permutation_sign(order)
        out = self.table.get(mono, {})
        return out if sign == 1 else {s: -c for s, c in out.items()}

    def __eq__(self, other):
        return (isinstance(other, SkewForm) and self.space == other.space and self.arity == other.arity
                and self.degree == other.degree and self.table == other.table)


def decalage_sign(degrees) -> int:
    """(-1)^{(i-1)|X_1| + (i-2)|X_2| + ... + |X_{i-1}|} for the original degrees."""
    i = len(degrees)
    e = sum((i - 1 - j) * d for j, d in enumerate(degrees))
    return -1 if e % 2 else 1


def decalage(mu: FormSum) -> dict:
    """Symmetric degree-1 brackets on E to skew brackets on E[-1] (arity -> SkewForm)."""
    if mu.parts and mu.degree != 1:
        raise InputError("decalage expects a family of degree 1")
    shifted = mu.space.shift(-1)
    deg = mu.space.slot_degree
    out = {}
    for k, f in mu.parts.items():
        table = {}
        for mono, v in f.table.items():
            sign = decalage_sign([deg[s] for s in mono])
            table[mono] = {s: sign * c for s, c in v.items()}
        out[k] = SkewForm(shifted, k, 2 - k, table)
    return out


def inverse_decalage(family: Mapping, space: GradedVectorSpace | None = None) -> FormSum:
    """Skew brackets of degree 2-i on E[-1] back to symmetric degree-1 brackets on E."""
    if not family:
        if space is None:
            raise InputError("an empty family needs the target space")
        return FormSum(space, 1)
    shifted = next(iter(family.values())).space
    target = shifted.shift(1)
    if space is not None and space != target:
        raise InputError("family does not live on E[-1]")
    deg = target.slot_degree
    forms = []
    for k, f in family.items():
        if f.degree != 2 - k:
            raise InputError(f"skew bracket of arity {k} must have degree {2 - k}, got {f.degree}")
        table = {}
        for mono, v in f.table.items():
            sign = decalage_sign([deg[s] for s in mono])
            table[mono] = {s: sign * c for s, c in v.items()}
        forms.append(SymValForm(target, k, 1, table))
    return FormSum(target, 1, forms)


def skew_jacobi_residuals(family: Mapping, max_n: int | None = None):
    """Yield (tuple, residual dict) for the skew generalized Jacobi identities.

    The sum over i+j=n+1 and (i, n-i)-unshuffles of
    (-1)^{i(j-1)} eps(sigma) sgn(sigma) l_j(l_i(X_sigma...), X_sigma...).
    """
    if not family:
        return
    space = next(iter(family.values())).space
    deg = space.slot_degree
    top = max(family)
    max_n = max_n or 2 * top - 1
    for n in range(1, max_n + 1):
        for mono in itertools.combinations_with_replacement(range(space.dim), n):
            if any(a == b and deg[a] % 2 == 0 for a, b in zip(mono, mono[1:])):
                continue
            acc: dict = defaultdict(Fraction)
            for i in range(1, n + 1):
                j = n + 1 - i
                if i not in family or j not in family:
                    continue
                li, lj = family[i], family[j]
                for sigma in unshuffles(i, n - i):
                    xs = [mono[p] for p in sigma]
                    sign = koszul_sign(sigma, [deg[s] for s in mono]) * permutation_sign(sigma)
                    sign *= -1 if (i * (j - 1)) % 2 else 1
                    for s, c in li.on_basis(xs[:i]).items():
                        for o, d in lj.on_basis((s, *xs[i:])).items():
                            acc[o] += sign * c * d
            acc = {s: c for s, c in acc.items() if c}
            yield mono, acc
