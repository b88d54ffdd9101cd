"""Exact graded symmetric forms, the Richardson-Nijenhuis bracket and
Nijenhuis deformations of L-infinity structures."""

from .graded import Element, GradedVectorSpace, koszul_sign, unshuffles
from .linfty import check_linfty, deform, hierarchy, nijenhuis_classify
from .symforms import FormSum, SymValForm, euler_form, identity_form, rn_bracket, insertion

__all__ = [
    "Element",
    "FormSum",
    "GradedVectorSpace",
    "SymValForm",
    "check_linfty",
    "deform",
    "euler_form",
    "hierarchy",
    "identity_form",
    "insertion",
    "koszul_sign",
    "nijenhuis_classify",
    "rn_bracket",
    "unshuffles",
]
