"""Exact polynomial exterior calculus on R^m.

Differential forms and multivector fields share one representation: a map from
strictly increasing index tuples to polynomials.  The Schouten bracket treats a
multivector as a superfunction in odd variables theta_i dual to the coordinates.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from .errors import CapExceeded, InputError
from .graded import fraction_str, to_fraction

DEFAULT_CAP = 6


class Poly:
    """Polynomial in m variables with rational coefficients and a total-degree cap."""

    __slots__ = ("m", "terms", "cap")

    def __init__(self, m: int, terms: Mapping | None = None, cap: int = DEFAULT_CAP):
        self.m, self.cap = m, cap
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != m or any(e < 0 for e in exp):
                raise InputError(f"bad exponent vector {exp} for {m} variables")
            c = to_fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}
        if self.degree > cap:
            raise CapExceeded(f"polynomial degree {self.degree} exceeds cap {cap}")

    @classmethod
    def _raw(cls, m, terms, cap):
        # trusted path for arithmetic results: tuple keys, nonzero Fraction values
        p = object.__new__(cls)
        p.m, p.terms, p.cap = m, terms, cap
        return p

    @classmethod
    def const(cls, m, c, cap=DEFAULT_CAP):
        return cls(m, {(0,) * m: c}, cap)

    @classmethod
    def var(cls, m, i, cap=DEFAULT_CAP):
        return cls(m, {tuple(int(j == i) for j in range(m)): 1}, cap)

    @classmethod
    def zero(cls, m, cap=DEFAULT_CAP):
        return cls(m, {}, cap)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def _other(self, other):
        if isinstance(other, Poly):
            if other.m != self.m:
                raise InputError("polynomials in different numbers of variables")
            return other
        return Poly.const(self.m, other, self.cap)

    def __add__(self, other):
        other = self._other(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                del terms[e]
        return Poly._raw(self.m, terms, max(self.cap, other.cap))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.m, {e: -c for e, c in self.terms.items()}, self.cap)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = to_fraction(other)
            if not c:
                return Poly._raw(self.m, {}, self.cap)
            return Poly._raw(self.m, {e: c * v for e, v in self.terms.items()}, self.cap)
        other = self._other(other)
        cap = max(self.cap, other.cap)
        if self.terms and other.terms and self.degree + other.degree > cap:
            raise CapExceeded(f"product degree {self.degree + other.degree} exceeds cap {cap}")
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly._raw(self.m, {e: c for e, c in terms.items() if c}, cap)

    __rmul__ = __mul__

    def diff(self, i: int) -> "Poly":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                terms[tuple(f)] = c * e[i]
        return Poly._raw(self.m, terms, self.cap)

    def __call__(self, *point):
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term *= Fraction(x) ** k
            total += term
        return total

    def with_cap(self, cap: int) -> "Poly":
        return Poly(self.m, self.terms, cap)

    def is_constant(self) -> bool:
        return self.degree <= 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.m == other.m and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.m, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{fraction_str(self.terms[e])}{'*' + mono if mono else ''}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {f"({','.join(map(str, e))})": fraction_str(c) for e, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, m: int, doc: Mapping, cap: int = DEFAULT_CAP) -> "Poly":
        terms = {}
        for key, v in doc.items():
            if not re.fullmatch(r"\(\s*\d+(\s*,\s*\d+)*\s*\)", key):
                raise InputError(f"bad exponent key {key!r}")
            terms[tuple(int(t) for t in key.strip("()").split(","))] = v
        return cls(m, terms, cap)


def merge_sign(I, J) -> int:
    """Sign of sorting the concatenation I + J (both increasing); 0 on overlap."""
    if set(I) & set(J):
        return 0
    inv = sum(1 for i in I for j in J if i > j)
    return -1 if inv % 2 else 1


class _Alt:
    """Poly-valued alternating tensor keyed by increasing index tuples."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Mapping | None = None):
        self.m = m
        out: dict = {}
        for idx, p in (coeffs or {}).items():
            idx = tuple(idx)
            if any(not 0 <= i < m for i in idx):
                raise InputError(f"index {idx} out of range")
            order = sorted(range(len(idx)), key=lambda a: idx[a])
            key = tuple(idx[a] for a in order)
            if len(set(key)) < len(key):
                continue
            sign = _perm_sign(order)
            if not isinstance(p, Poly):
                p = Poly.const(m, p)
            p = p * sign
            out[key] = out[key] + p if key in out else p
        self.coeffs = {k: p for k, p in out.items() if p}

    def _new(self, coeffs):
        return type(self)(self.m, coeffs)

    @property
    def degrees(self) -> set:
        return {len(k) for k in self.coeffs}

    @property
    def degree(self) -> int:
        ds = self.degrees
        if len(ds) > 1:
            raise InputError("inhomogeneous tensor has no single degree")
        return ds.pop() if ds else 0

    def component(self, k: int):
        return self._new({i: p for i, p in self.coeffs.items() if len(i) == k})

    def __add__(self, other):
        if other == 0:
            return self
        self._check(other)
        out = dict(self.coeffs)
        for k, p in other.coeffs.items():
            out[k] = out[k] + p if k in out else p
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -p for k, p in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        """Multiply by a scalar or a function."""
        return self._new({k: p * c for k, p in self.coeffs.items()})

    __rmul__ = __mul__

    def _check(self, other):
        if type(other) is not type(self) or other.m != self.m:
            raise InputError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def wedge(self, other):
        self._check(other)
        out: dict = {}
        for I, p in self.coeffs.items():
            for J, q in other.coeffs.items():
                s = merge_sign(I, J)
                if s:
                    key = tuple(sorted(I + J))
                    v = p * q * s
                    out[key] = out[key] + v if key in out else v
        return self._new(out)

    def __xor__(self, other):
        return self.wedge(other)

    def max_poly_degree(self) -> int:
        return max((p.degree for p in self.coeffs.values()), default=-1)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return type(other) is type(self) and self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self.m, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        sym = "dx" if isinstance(self, PolyForm) else "d/dx"
        if not self.coeffs:
            return "0"
        return " + ".join(f"({p})" + ("*" + "^".join(f"{sym}{i}" for i in k) if k else "")
                          for k, p in sorted(self.coeffs.items()))

    def to_json(self) -> dict:
        return {",".join(map(str, k)) or "()": p.to_json() for k, p in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, m: int, doc: Mapping, cap: int = DEFAULT_CAP):
        coeffs = {}
        for key, v in doc.items():
            idx = () if key in ("", "()") else tuple(int(t) for t in key.split(","))
            coeffs[idx] = Poly.from_json(m, v, cap)
        return cls(m, coeffs)


def _perm_sign(order) -> int:
    inv = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
    return -1 if inv % 2 else 1


class PolyForm(_Alt):
    """Differential form: idx (i1 < ... < ik) stands for dx_i1 ^ ... ^ dx_ik."""

    @classmethod
    def function(cls, p: Poly) -> "PolyForm":
        return cls(p.m, {(): p})

    @classmethod
    def dx(cls, m: int, *idx) -> "PolyForm":
        return cls(m, {tuple(idx): 1})


class PolyMultivector(_Alt):
    """Multivector field: idx stands for d/dx_i1 ^ ... ^ d/dx_ik."""

    @classmethod
    def function(cls, p: Poly) -> "PolyMultivector":
        return cls(p.m, {(): p})

    @classmethod
    def vector(cls, components) -> "PolyMultivector":
        components = list(components)
        m = len(components)
        return cls(m, {(i,): p for i, p in enumerate(components)})

    @classmethod
    def partial(cls, m: int, *idx) -> "PolyMultivector":
        return cls(m, {tuple(idx): 1})

    def as_vector(self) -> list:
        if self.degrees - {1}:
            raise InputError("not a vector field")
        return [self.coeffs.get((i,), Poly.zero(self.m)) for i in range(self.m)]

    def apply(self, f: Poly) -> Poly:
        """X(f) for a vector field X."""
        out = Poly.zero(self.m, f.cap)
        for i, p in enumerate(self.as_vector()):
            if p:
                out = out + p * f.diff(i)
        return out


def d(form: PolyForm) -> PolyForm:
    out: dict = {}
    for I, p in form.coeffs.items():
        for i in range(form.m):
            dp = p.diff(i)
            if not dp or i in I:
                continue
            key = tuple(sorted((i,) + I))
            v = dp * merge_sign((i,), I)
            out[key] = out[key] + v if key in out else v
    return PolyForm(form.m, out)


def contract(X: PolyMultivector, form: PolyForm) -> PolyForm:
    """Interior product by a vector field (inserting into the first slot)."""
    vec = X.as_vector()
    out: dict = {}
    for I, p in form.coeffs.items():
        for pos, i in enumerate(I):
            if not vec[i]:
                continue
            key = I[:pos] + I[pos + 1:]
            v = vec[i] * p * (-1 if pos % 2 else 1)
            out[key] = out[key] + v if key in out else v
    return PolyForm(form.m, out)


def contract_many(vectors, form: PolyForm) -> PolyForm:
    """iota_{X_1} iota_{X_2} ... iota_{X_k} form (the last vector is inserted first)."""
    for X in reversed(list(vectors)):
        form = contract(X, form)
    return form


def pair(form: PolyForm, X: PolyMultivector) -> Poly:
    """alpha(X) for a 1-form and a vector field."""
    return contract(X, form).coeffs.get((), Poly.zero(form.m))


def lie_derivative(X: PolyMultivector, form: PolyForm) -> PolyForm:
    return d(contract(X, form)) + contract(X, d(form))


def lie_bracket(X: PolyMultivector, Y: PolyMultivector) -> PolyMultivector:
    return schouten_poly(X, Y)


def _right_theta(P: PolyMultivector, i: int) -> PolyMultivector:
    out = {}
    for I, p in P.coeffs.items():
        if i in I:
            pos = I.index(i)
            after = len(I) - pos - 1
            out[I[:pos] + I[pos + 1:]] = p * (-1 if after % 2 else 1)
    return PolyMultivector(P.m, out)


def _left_theta(P: PolyMultivector, i: int) -> PolyMultivector:
    out = {}
    for I, p in P.coeffs.items():
        if i in I:
            pos = I.index(i)
            out[I[:pos] + I[pos + 1:]] = p * (-1 if pos % 2 else 1)
    return PolyMultivector(P.m, out)


def _dx(P: PolyMultivector, i: int) -> PolyMultivector:
    return PolyMultivector(P.m, {I: p.diff(i) for I, p in P.coeffs.items()})


def schouten_poly(P: PolyMultivector, Q: PolyMultivector) -> PolyMultivector:
    """[P, Q] = sum_i (P d/dtheta_i)(d/dx_i Q) - (P d/dx_i)(d/dtheta_i Q), derivatives acting from the side shown."""
    if P.m != Q.m:
        raise InputError("multivectors on different spaces")
    out = PolyMultivector(P.m)
    for i in range(P.m):
        out = out + _right_theta(P, i).wedge(_dx(Q, i)) - _dx(P, i).wedge(_left_theta(Q, i))
    return out
