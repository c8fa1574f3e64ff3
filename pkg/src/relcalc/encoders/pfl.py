"""Predicate functor logic.

Concrete syntax, loosest first::

    P ::= P "&" P | "!" P | "p" P | "P" P | "[" P | "]" P | "I" | NAME | "(" P ")"

``p`` swaps the first two coordinates, ``P`` exchanges the first and the
last, ``[`` pads with an ignored leading coordinate, ``]`` quantifies the
leading coordinate existentially, ``&`` is conjunction and ``!`` is
negation.  The names ``p``, ``P`` and ``I`` are reserved.

Semantics is over finite prefixes: a predicate of arity n denotes a set
of n-tuples, which is all that the infinite-sequence reading depends on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Union

from ..derived import cap, negate_term
from ..errors import ParseError, PFLTypeError
from ..terms import W, Codiscard, Gen, Seq, Signature, Tensor, Term, ident, sugar
from ._lex import Cursor


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Ident:
    pass


@dataclass(frozen=True)
class Functor:
    op: str  # "p", "P", "[", "]", "!"
    arg: "PFLPred"


@dataclass(frozen=True)
class Meet:
    left: "PFLPred"
    right: "PFLPred"


PFLPred = Union[Atom, Ident, Functor, Meet]

_SPEC = [("op", r"[&!\[\]()]"), ("name", r"[A-Za-z][A-Za-z0-9_]*")]


def parse_pfl(text: str) -> PFLPred:
    cur = Cursor(text, _SPEC)
    p = _meet(cur)
    cur.done()
    return p


def _meet(cur):
    p = _unary(cur)
    while cur.accept("&"):
        p = Meet(p, _unary(cur))
    return p


def _unary(cur):
    t = cur.next()
    if t.text in ("!", "[", "]", "p", "P"):
        return Functor(t.text, _unary(cur))
    if t.text == "(":
        p = _meet(cur)
        cur.expect(")")
        return p
    if t.text == "I":
        return Ident()
    if t.kind == "name":
        return Atom(t.text)
    raise ParseError(t.pos, f"expected a predicate, found {t.text or 'end of input'!r}")


def show_pfl(p: PFLPred) -> str:
    if isinstance(p, Atom):
        return p.name
    if isinstance(p, Ident):
        return "I"
    if isinstance(p, Meet):
        return f"({show_pfl(p.left)} & {show_pfl(p.right)})"
    sep = " " if p.op in ("p", "P") else ""
    return f"{p.op}{sep}{show_pfl(p.arg)}"


# ----------------------------------------------------------------- typing


def pfl_type(p: PFLPred, arities: Mapping[str, int]) -> int:
    if isinstance(p, Atom):
        if p.name not in arities:
            raise PFLTypeError(f"unknown predicate {p.name}")
        return arities[p.name]
    if isinstance(p, Ident):
        return 2
    if isinstance(p, Meet):
        return max(pfl_type(p.left, arities), pfl_type(p.right, arities))
    n = pfl_type(p.arg, arities)
    if p.op == "p":
        return n if n >= 2 else 2
    if p.op in ("P", "!"):
        return n
    if p.op == "[":
        return n + 1
    return max(n - 1, 0)  # "]"


def _arities(sig: Signature) -> dict[str, int]:
    out = {}
    for name in sig.names:
        ar, coar = sig.shape(name)
        if coar != 0:
            raise PFLTypeError(f"{name} must be a predicate symbol (coarity 0)")
        out[name] = ar
    return out


# --------------------------------------------------------------- encoding


def first_last_swap(n: int) -> Term:
    """The permutation exchanging wires 1 and n (identity below 2)."""
    if n < 2:
        return ident(W, n)
    return Seq(W, sugar("sym", W, 1, n - 1), Tensor(W, sugar("sym", W, n - 2, 1), ident(W, 1)))


def encode_pfl(p: PFLPred, sig: Signature) -> tuple[Term, int]:
    """(⟨P⟩, n) with ⟨P⟩ : n → 0; predicate symbols are n → 0 in ``sig``."""
    ar = _arities(sig)
    return _enc(p, ar, sig), pfl_type(p, ar)


def _enc(p: PFLPred, ar: Mapping[str, int], sig: Signature) -> Term:
    if isinstance(p, Atom):
        pfl_type(p, ar)
        return Gen(p.name, W)
    if isinstance(p, Ident):
        return cap(W, 1)
    if isinstance(p, Meet):
        n, m = pfl_type(p.left, ar), pfl_type(p.right, ar)
        l, r = _enc(p.left, ar, sig), _enc(p.right, ar, sig)
        if n >= m:
            r = Seq(W, Tensor(W, ident(W, m), sugar("discard", W, n - m)), r)
            k = n
        else:
            l = Seq(W, Tensor(W, ident(W, n), sugar("discard", W, m - n)), l)
            k = m
        return Seq(W, sugar("copier", W, k), Tensor(W, l, r))
    n = pfl_type(p.arg, ar)
    inner = _enc(p.arg, ar, sig)
    if p.op == "!":
        return negate_term(inner, sig)
    if p.op == "p":
        if n >= 2:
            return Seq(W, Tensor(W, sugar("sym", W, 1, 1), ident(W, n - 2)), inner)
        # pP : 2 reads its argument off the second coordinate (n = 1) or not at all
        pre = Tensor(W, sugar("discard", W, 1), ident(W, 1)) if n == 1 else sugar("discard", W, 2)
        return Seq(W, pre, inner)
    if p.op == "P":
        return Seq(W, first_last_swap(n), inner)
    if p.op == "[":
        return Seq(W, Tensor(W, sugar("discard", W, 1), ident(W, n)), inner)
    if n == 0:  # "]" of a 0-ary predicate
        return inner
    return Seq(W, Tensor(W, Codiscard(W), ident(W, n - 1)), inner)


# ----------------------------------------------------------------- oracle


def pfl_eval(p: PFLPred, size: int, rho: Mapping[str, set], arities: Mapping[str, int]) -> frozenset:
    """The n-tuples in the denotation of ``p`` (n its arity); ``rho`` gives tuples."""
    return _ev(p, size, rho, arities)


def _ev(p, d, rho, ar) -> frozenset:
    n = pfl_type(p, ar)
    space = list(itertools.product(range(d), repeat=n))
    if isinstance(p, Atom):
        return frozenset(tuple(t) for t in rho.get(p.name, ()))
    if isinstance(p, Ident):
        return frozenset(t for t in space if t[0] == t[1])
    if isinstance(p, Meet):
        a, b = _ev(p.left, d, rho, ar), _ev(p.right, d, rho, ar)
        na, nb = pfl_type(p.left, ar), pfl_type(p.right, ar)
        return frozenset(t for t in space if t[:na] in a and t[:nb] in b)
    k = pfl_type(p.arg, ar)
    inner = _ev(p.arg, d, rho, ar)
    if p.op == "!":
        return frozenset(t for t in space if t not in inner)
    if p.op == "p":
        return frozenset(t for t in space if (t[1], t[0], *t[2:])[:k] in inner)
    if p.op == "P":
        def swap(t):
            return t if len(t) < 2 else (t[-1], *t[1:-1], t[0])
        return frozenset(t for t in space if swap(t) in inner)
    if p.op == "[":
        return frozenset(t for t in space if t[1:] in inner)
    if k == 0:
        return inner
    return frozenset(t for t in space if any((x, *t) in inner for x in range(d)))
