"""Translations from other logics into the calculus, each with its own evaluator."""

from .cr import cr_eval, encode_cr, parse_cr
from .fol import decode_fol, encode_fol, fol_eval, parse_fol
from .pfl import encode_pfl, parse_pfl, pfl_eval, pfl_type
from .prop import encode_prop, parse_prop, prop_eval

__all__ = [
    "cr_eval", "encode_cr", "parse_cr",
    "decode_fol", "encode_fol", "fol_eval", "parse_fol",
    "encode_pfl", "parse_pfl", "pfl_eval", "pfl_type",
    "encode_prop", "parse_prop", "prop_eval",
]
