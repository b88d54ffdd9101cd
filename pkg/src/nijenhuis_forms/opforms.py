"""Symmetric forms given by evaluation rules, for carriers without a finite basis.

Arguments and values are graded elements: objects with a ``degree`` attribute
supporting ``+``, scalar ``*`` and truth testing.  Insertion and the RN
bracket are evaluated pointwise on sample tuples, with the same unshuffle and
Koszul conventions as the tabulated forms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from .graded import koszul_sign, unshuffles


class _Zero:
    """Additive identity for values whose degree has no component."""

    degree = None

    def __add__(self, other):
        return other

    __radd__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, c):
        return self

    __rmul__ = __mul__

    def __bool__(self):
        return False

    def __eq__(self, other):
        return not other

    def __hash__(self):
        return 0

    def __repr__(self):
        return "0"


ZERO = _Zero()


def gsum(values: Iterable):
    acc = ZERO
    for v in values:
        if v:
            acc = v if acc is ZERO else acc + v
    return acc


def scale(c, v):
    if not v or not c:
        return ZERO
    return v * Fraction(c)


class GElem:
    """A value with a degree; ``value`` supports +, scalar * and truth testing."""

    __slots__ = ("degree", "value")

    def __init__(self, degree: int, value):
        self.degree, self.value = degree, value

    def __add__(self, other):
        if not other:
            return self
        if other.degree != self.degree:
            raise ValueError(f"adding elements of degrees {self.degree} and {other.degree}")
        return GElem(self.degree, self.value + other.value)

    __radd__ = __add__

    def __neg__(self):
        return GElem(self.degree, -self.value)

    def __sub__(self, other):
        return self + (-other if other else ZERO)

    def __mul__(self, c):
        return GElem(self.degree, self.value * Fraction(c))

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if not other:
            return not self
        return isinstance(other, GElem) and self.degree == other.degree and self.value == other.value

    def __hash__(self):
        return hash((self.degree, repr(self.value)))

    def __repr__(self):
        return f"<{self.degree}: {self.value!r}>"


class OpForm:
    """A graded-symmetric form of the given arity and degree, defined by ``fn(*args)``."""

    def __init__(self, arity: int, degree: int, fn: Callable, name: str = ""):
        self.arity, self.degree, self.fn, self.name = arity, degree, fn, name

    def __call__(self, *args):
        if len(args) != self.arity:
            raise TypeError(f"{self.name or 'form'} takes {self.arity} arguments, got {len(args)}")
        if any(not a for a in args):
            return ZERO
        out = self.fn(*args)
        return out if out else ZERO

    def __repr__(self):
        return f"OpForm({self.name or '?'}, arity={self.arity}, degree={self.degree})"


def constant(value, degree: int | None = None, name: str = "") -> OpForm:
    """An element seen as an arity-0 form."""
    return OpForm(0, value.degree if degree is None else degree, lambda: value, name)


class OpSum:
    """A finite sum of OpForms of one degree, grouped by arity."""

    def __init__(self, degree: int, forms: Iterable[OpForm] = ()):
        self.degree = degree
        self.forms = []
        for f in forms:
            if f.degree != degree:
                raise ValueError(f"form {f!r} has degree {f.degree}, expected {degree}")
            self.forms.append(f)

    @classmethod
    def of(cls, *forms):
        return cls(forms[0].degree, forms)

    def arities(self) -> list:
        return sorted({f.arity for f in self.forms})

    def part(self, arity: int) -> OpForm:
        members = [f for f in self.forms if f.arity == arity]
        return OpForm(arity, self.degree, lambda *xs: gsum(f(*xs) for f in members), f"part{arity}")

    def __add__(self, other):
        if isinstance(other, OpForm):
            other = OpSum(other.degree, [other])
        if not other.forms:
            return self
        if not self.forms:
            return other
        return OpSum(self.degree, self.forms + other.forms)

    def __mul__(self, c):
        return OpSum(self.degree, [OpForm(f.arity, f.degree, (lambda f: lambda *xs: scale(c, f(*xs)))(f), f.name)
                                   for f in self.forms])

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if isinstance(other, OpForm):
            other = OpSum(other.degree, [other])
        return self + (-other)

    def __iter__(self):
        return iter(self.forms)


def as_opsum(x) -> OpSum:
    if isinstance(x, OpSum):
        return x
    return OpSum(x.degree, [x])


def insert(K: OpForm, L: OpForm) -> OpForm:
    """iota_K L evaluated on tuples: sum over unshuffles of eps * L(K(first k), rest)."""
    k, l = K.arity, L.arity
    if l == 0:
        return OpForm(max(k - 1, 0), K.degree + L.degree, lambda *xs: ZERO, "0")
    n = k + l - 1

    def fn(*xs):
        degs = [x.degree for x in xs]
        terms = []
        for sigma in unshuffles(k, n - k):
            ys = [xs[p] for p in sigma]
            inner = K(*ys[:k])
            if not inner:
                continue
            val = L(inner, *ys[k:])
            if val:
                terms.append(val if koszul_sign(sigma, degs) == 1 else -val)
        return gsum(terms)

    return OpForm(n, K.degree + L.degree, fn, f"i({K.name},{L.name})")


def rn(K, L) -> OpSum:
    """[K, L] = iota_K L - (-1)^{KL} iota_L K, for forms or sums."""
    K, L = as_opsum(K), as_opsum(L)
    sign = -1 if (K.degree * L.degree) % 2 else 1
    forms = []
    for a in K:
        for b in L:
            forms.append(insert(a, b))
            back = insert(b, a)
            forms.append(back if sign == -1 else OpForm(back.arity, back.degree,
                                                        (lambda g: lambda *xs: scale(-1, g(*xs)))(back), back.name))
    return OpSum(K.degree + L.degree, forms)


def euler(degree_range=None) -> OpForm:
    """S(x) = -|x| x."""
    return OpForm(1, 0, lambda x: scale(-x.degree, x), "S")


def identity() -> OpForm:
    return OpForm(1, 0, lambda x: x, "Id")


def generalized_jacobi(mu: OpSum, xs, curved: bool = False):
    """Direct sum over i + j = n + 1 and unshuffles of eps l_j(l_i(...), ...)."""
    n = len(xs)
    degs = [x.degree for x in xs]
    parts = {a: mu.part(a) for a in mu.arities()}
    terms = []
    for i in range(0 if curved else 1, n + 1):
        j = n + 1 - i
        if i not in parts or j not in parts:
            continue
        for sigma in unshuffles(i, n - i):
            ys = [xs[p] for p in sigma]
            inner = parts[i](*ys[:i])
            if inner:
                v = parts[j](inner, *ys[i:])
                if v:
                    terms.append(v if koszul_sign(sigma, degs) == 1 else -v)
    return gsum(terms)
