"""The propositional fragment: 0 → 0 symbols as propositional variables.

Concrete syntax, loosest first::

    F ::= F "\\/" F | F "/\\" F | "!" NAME | "top" | "bot" | NAME | "(" F ")"

Negation applies to variables only, as in negation normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from ..errors import ParseError
from ..semantics import FiniteInterpretation, Relation
from ..terms import B, W, Gen, Id0, Seq, Signature, Term
from ._lex import Cursor


@dataclass(frozen=True)
class PTop:
    pass


@dataclass(frozen=True)
class PBot:
    pass


@dataclass(frozen=True)
class PVar:
    name: str
    negated: bool = False


@dataclass(frozen=True)
class PAnd:
    left: "PropFormula"
    right: "PropFormula"


@dataclass(frozen=True)
class POr:
    left: "PropFormula"
    right: "PropFormula"


PropFormula = Union[PTop, PBot, PVar, PAnd, POr]

_SPEC = [("op", r"\\/|/\\|[!()]"), ("name", r"[A-Za-z][A-Za-z0-9_]*")]


def parse_prop(text: str) -> PropFormula:
    cur = Cursor(text, _SPEC)
    f = _disj(cur)
    cur.done()
    return f


def _disj(cur):
    f = _conj(cur)
    while cur.accept("\\/"):
        f = POr(f, _conj(cur))
    return f


def _conj(cur):
    f = _atom(cur)
    while cur.accept("/\\"):
        f = PAnd(f, _atom(cur))
    return f


def _atom(cur):
    t = cur.next()
    if t.text == "(":
        f = _disj(cur)
        cur.expect(")")
        return f
    if t.text == "!":
        v = cur.next()
        if v.kind != "name" or v.text in ("top", "bot"):
            raise ParseError(v.pos, "negation applies to propositional variables only")
        return PVar(v.text, True)
    if t.text == "top":
        return PTop()
    if t.text == "bot":
        return PBot()
    if t.kind == "name":
        return PVar(t.text)
    raise ParseError(t.pos, f"expected a formula, found {t.text or 'end of input'!r}")


def prop_variables(f: PropFormula) -> set[str]:
    if isinstance(f, PVar):
        return {f.name}
    if isinstance(f, (PAnd, POr)):
        return prop_variables(f.left) | prop_variables(f.right)
    return set()


def prop_signature(f: PropFormula) -> Signature:
    return Signature.of({v: (0, 0) for v in prop_variables(f)})


def encode_prop(f: PropFormula) -> Term:
    if isinstance(f, PTop):
        return Id0(W)
    if isinstance(f, PBot):
        return Id0(B)
    if isinstance(f, PVar):
        return Gen(f.name, B if f.negated else W)
    col = W if isinstance(f, PAnd) else B
    return Seq(col, encode_prop(f.left), encode_prop(f.right))


def prop_eval(f: PropFormula, valuation: Mapping[str, bool]) -> bool:
    if isinstance(f, PTop):
        return True
    if isinstance(f, PBot):
        return False
    if isinstance(f, PVar):
        return valuation[f.name] != f.negated
    if isinstance(f, PAnd):
        return prop_eval(f.left, valuation) and prop_eval(f.right, valuation)
    return prop_eval(f.left, valuation) or prop_eval(f.right, valuation)


def valuation_interpretation(valuation: Mapping[str, bool], size: int = 0) -> FiniteInterpretation:
    """The interpretation where each variable is {(⋆,⋆)} when true and ∅ when false."""
    point = frozenset({((), ())})
    return FiniteInterpretation(size, {v: Relation(0, 0, point if b else frozenset())
                                      for v, b in valuation.items()})
