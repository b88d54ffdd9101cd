"""JSON documents for every structure the command line understands.

A document is ``{"kind": ..., "payload": ..., "expected": ...}``.  Scalars are
written as "p/q" strings; floats are refused on input.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError
from .graded import GradedVectorSpace, fraction_str, to_fraction
from .lie2 import CrossedModule, Lie2Quadruple
from .liealg import LieAlgebra
from .symforms import FormSum, SymValForm, sort_sign

KINDS = ("graded-space", "form-sum", "lie2-quadruple", "crossed-module", "lie-algebra",
         "courant-point", "courant-standard", "nplectic", "tensors")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _no_floats(value):
    raise InputError(f"floating point value {value} is not allowed; use a \"p/q\" string")


def loads(text: str):
    try:
        return json.loads(text, parse_float=_no_floats)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _req(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


def parse_space(doc) -> GradedVectorSpace:
    comps = _req(doc, "components")
    if not isinstance(comps, list):
        raise InputError("components must be a list")
    return GradedVectorSpace(comps)


def parse_form(space: GradedVectorSpace, doc) -> SymValForm:
    arity, degree = int(_req(doc, "arity")), int(_req(doc, "degree"))
    table: dict = {}
    for entry in _req(doc, "entries"):
        slots = tuple(space.slot(lab) for lab in _req(entry, "inputs"))
        if len(slots) != arity:
            raise InputError(f"entry {entry['inputs']} does not have {arity} inputs")
        sign, mono = sort_sign(space, slots)
        out = {space.slot(lab): to_fraction(c) for lab, c in _req(entry, "output").items()}
        if not sign:
            if any(out.values()):
                raise InputError(f"entry {entry['inputs']} repeats an odd input")
            continue
        acc = table.setdefault(mono, {})
        for s, c in out.items():
            acc[s] = acc.get(s, Fraction(0)) + sign * c
    return SymValForm(space, arity, degree, table)


def parse_formsum(doc) -> FormSum:
    space = parse_space(_req(doc, "space"))
    degree = int(_req(doc, "degree"))
    return FormSum(space, degree, [parse_form(space, f) for f in doc.get("parts", [])])


def parse_quadruple(doc) -> Lie2Quadruple:
    space = parse_space(_req(doc, "space"))
    maps = {k: parse_form(space, doc[k]) for k in ("partial", "chi", "bracket2", "omega") if k in doc}
    return Lie2Quadruple(space, **maps)


def parse_matrix(rows) -> list:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix must be a list of rows")
    return [[to_fraction(c) for c in r] for r in rows]


def dump_matrix(M) -> list:
    return [[fraction_str(Fraction(c)) for c in r] for r in M]


def parse_lie(doc) -> LieAlgebra:
    return LieAlgebra.from_json(doc)


def parse_crossed_module(doc) -> CrossedModule:
    g, h = parse_lie(_req(doc, "g")), parse_lie(_req(doc, "h"))
    partial = parse_matrix(_req(doc, "partial"))
    action = [parse_matrix(m) for m in _req(doc, "action")]
    if len(partial) != h.dim or any(len(r) != g.dim for r in partial):
        raise InputError("partial must be an h.dim x g.dim matrix")
    if len(action) != h.dim or any(len(m) != g.dim or any(len(r) != g.dim for r in m) for m in action):
        raise InputError("action needs one g.dim x g.dim matrix per basis vector of h")
    return CrossedModule(g, h, partial, action)


def dump_crossed_module(cm: CrossedModule) -> dict:
    return {"g": cm.g.to_json(), "h": cm.h.to_json(), "partial": dump_matrix(cm.partial),
            "action": [dump_matrix(m) for m in cm.action]}


def parse_courant_point(doc):
    from .courant import PointCourant
    g = parse_lie(_req(doc, "lie_algebra"))
    if doc.get("pairing") == "killing":
        return PointCourant.with_killing_form(g)
    return PointCourant(g, parse_matrix(_req(doc, "pairing")))


def parse_courant_standard(doc):
    from .courant import HALF, StandardCourant
    m = int(_req(doc, "m"))
    return StandardCourant(m, int(doc.get("degree_cap", 3)), to_fraction(doc.get("pairing_scale", HALF)))


def parse_nplectic(doc):
    from .nplectic import MultisymplecticSpace
    return MultisymplecticSpace.from_json(doc)


class TensorData:
    """A Lie algebra with optional (1,1)-tensor N, bivector pi and 2-form omega."""

    def __init__(self, g: LieAlgebra, N=None, pi=None, omega=None, A=None):
        from .algebroid import ExtAlgebraSpace
        self.g, self.N, self.pi, self.omega = g, N, pi, omega
        self.A = A or ExtAlgebraSpace(g)

    @classmethod
    def from_json(cls, doc) -> "TensorData":
        from .algebroid import ExtAlgebraSpace, KForm
        g = parse_lie(_req(doc, "lie_algebra"))
        N = parse_matrix(doc["N"]) if "N" in doc else None
        if N is not None and (len(N) != g.dim or any(len(r) != g.dim for r in N)):
            raise InputError("N must be a dim x dim matrix")
        A = ExtAlgebraSpace(g)
        pi = A.bivector(_pairs(g, doc["pi"])) if "pi" in doc else None
        omega = KForm(2, _pairs(g, doc["omega"]), list(g.labels)) if "omega" in doc else None
        return cls(g, N, pi, omega, A)

    def to_json(self) -> dict:
        out = {"lie_algebra": self.g.to_json()}
        if self.N is not None:
            out["N"] = dump_matrix(self.N)
        if self.pi is not None:
            out["pi"] = {self.A.label(idx): fraction_str(c) for idx, c in sorted(self.A.multivector(self.pi).items())}
        if self.omega is not None:
            out["omega"] = self.omega.to_json(self.g.labels)["coeffs"]
        return out


def _pairs(g: LieAlgebra, doc) -> dict:
    """{"e1^e2": "1"} -> {("e1", "e2"): 1}."""
    out = {}
    for key, c in doc.items():
        parts = tuple(key.split("^"))
        if len(parts) != 2 or any(p not in g.labels for p in parts):
            raise InputError(f"bad bivector or 2-form key {key!r}")
        out[parts] = to_fraction(c)
    return out


PARSERS = {
    "graded-space": parse_space,
    "form-sum": parse_formsum,
    "lie2-quadruple": parse_quadruple,
    "crossed-module": parse_crossed_module,
    "lie-algebra": parse_lie,
    "courant-point": parse_courant_point,
    "courant-standard": parse_courant_standard,
    "nplectic": parse_nplectic,
    "tensors": TensorData.from_json,
}


def parse_document(doc):
    """(kind, structure) from a document; every failure is an InputError."""
    kind = _req(doc, "kind")
    if kind not in PARSERS:
        raise InputError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    try:
        return kind, PARSERS[kind](_req(doc, "payload"))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
        raise InputError(f"malformed {kind} payload: {exc!r}") from None


def document(kind: str, payload, expected=None) -> dict:
    doc = {"kind": kind, "payload": payload}
    if expected is not None:
        doc["expected"] = expected
    return doc


def dump_structure(kind: str, obj) -> dict:
    if kind == "graded-space":
        return obj.to_json()
    if kind == "crossed-module":
        return dump_crossed_module(obj)
    if kind in ("courant-point", "courant-standard"):
        out = obj.to_json()
        out.pop("kind", None)
        return out
    return obj.to_json()
