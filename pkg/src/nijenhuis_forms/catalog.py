"""Built-in example documents, each with the verdicts it is expected to produce."""

from __future__ import annotations

from . import liealg
from .errors import InputError
from .graded import GradedVectorSpace
from .lie2 import Lie2Quadruple
from .serialize import document
from .symforms import SymValForm


def _lie_doc(g, name):
    return document("lie-algebra", g.to_json(), {"verify": "verified", "name": name})


def chi_zero_demo() -> Lie2Quadruple:
    """so(3)-type bracket on e1, e2, e3 with a central direction t = l1(f'), omega(e1, e2, e3) = f.

    The string summand is spanned by e1, e2, e3 and f; the trivial one by t and f'.
    """
    E = GradedVectorSpace([(-2, ["f", "f'"]), (-1, ["e1", "e2", "e3", "t"])])
    s = E.slot
    partial = SymValForm(E, 1, 1, {(s("f'"),): {s("t"): 1}})
    bracket = SymValForm(E, 2, 1, {
        (s("e1"), s("e2")): {s("e3"): 1, s("t"): 1},
        (s("e2"), s("e3")): {s("e1"): 1},
        (s("e1"), s("e3")): {s("e2"): -1},
    })
    omega = SymValForm(E, 3, 1, {(s("e1"), s("e2"), s("e3")): {s("f"): 1}})
    return Lie2Quadruple(E, partial=partial, bracket2=bracket, omega=omega)


def _build(name: str) -> dict:
    if name == "abelian":
        return _lie_doc(liealg.abelian(3), name)
    if name == "2d-nonabelian":
        return _lie_doc(liealg.nonabelian_2d(), name)
    if name == "heisenberg":
        return _lie_doc(liealg.heisenberg(), name)
    if name == "sl2":
        return _lie_doc(liealg.sl2(), name)
    if name == "so3-courant-point":
        return document("courant-point", {"lie_algebra": liealg.so3().to_json(), "pairing": "killing"},
                        {"verify": "verified", "regime": "exhaustive", "lift_cId": "nijenhuis"})
    if name == "r2-courant-standard":
        return document("courant-standard", {"m": 2, "degree_cap": 3, "pairing_scale": "1/2"},
                        {"verify": "verified", "regime": "sampled"})
    if name == "r3-volume-2plectic":
        return document("nplectic", {"m": 3, "n": 2, "name": "R^3 volume",
                                     "omega": {"0,1,2": {"(0,0,0)": "1"}}},
                        {"verify": "verified", "rank": 3})
    if name == "chi-zero-demo":
        return document("lie2-quadruple", chi_zero_demo().to_json(),
                        {"verify": "verified", "decompose": {"string_dims": [1, 3], "trivial_dims": [1, 1]}})
    raise InputError(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}")


NAMES = ("abelian", "2d-nonabelian", "heisenberg", "sl2", "so3-courant-point", "r2-courant-standard",
         "r3-volume-2plectic", "chi-zero-demo")


def entry(name: str) -> dict:
    return _build(name)
