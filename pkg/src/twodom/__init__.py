"""Exact 2-domination and 2-independence on trees, with a constructive
family recognizer and certificates."""

from .construct import Certificate, OpStep, apply_O, apply_R, random_member
from .errors import TwoDomError
from .recognize import Verdict, recognize, reduce_once, verify_certificate
from .solvers import alpha2, find_2dom_2ind_set, gamma2, solve_alpha2, solve_gamma2
from .tree import Tree, canonical_code, decode_graph6, encode_graph6, enumerate_free_trees

__all__ = [
    "Certificate", "OpStep", "Tree", "TwoDomError", "Verdict",
    "alpha2", "apply_O", "apply_R", "canonical_code", "decode_graph6",
    "encode_graph6", "enumerate_free_trees", "find_2dom_2ind_set", "gamma2",
    "random_member", "recognize", "reduce_once", "solve_alpha2", "solve_gamma2",
    "verify_certificate",
]
