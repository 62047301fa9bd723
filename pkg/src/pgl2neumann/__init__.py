"""Neumann subgroups of PGL(2, Z) built from involution blocks, with exact checks."""

from .pgl2 import GroupElement, RationalPoint, classify, eval_word, is_isotropic
from .invospec import InvolutionSpec, assemble, load_spec, parse_spec, validate
from .neumann import decompose, sigma, structure, verify_relations

__all__ = [
    "GroupElement",
    "RationalPoint",
    "classify",
    "eval_word",
    "is_isotropic",
    "InvolutionSpec",
    "assemble",
    "load_spec",
    "parse_spec",
    "validate",
    "decompose",
    "sigma",
    "structure",
    "verify_relations",
]
