"""The calculus of binary relations.

Concrete syntax, loosest first::

    E ::= E "|" E | E "&" E | E ";+" E | E ";-" E | "~" E | "^" E
        | NAME | "id+" | "id-" | "top" | "bot" | "(" E ")"

``~`` is complement and ``^`` is converse; both are prefix.  The two
compositions share a precedence level and associate to the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..derived import converse_term, negate_term
from ..errors import ParseError, UnknownSymbol
from ..semantics import Relation
from ._lex import Cursor
from ..terms import B, W, Cocopier, Codiscard, Copier, Discard, Gen, Id1, Seq, Signature, Tensor, Term


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Const:
    kind: str  # "id+", "id-", "top", "bot"


@dataclass(frozen=True)
class Un:
    op: str  # "~" or "^"
    arg: "CRExpr"


@dataclass(frozen=True)
class Bin:
    op: str  # ";+", ";-", "&", "|"
    left: "CRExpr"
    right: "CRExpr"


CRExpr = Union[Sym, Const, Un, Bin]

_SPEC = [("op", r";\+|;-|id\+|id-|[|&~^()]"), ("name", r"[A-Za-z][A-Za-z0-9_]*")]


def parse_cr(text: str) -> CRExpr:
    cur = Cursor(text, _SPEC)
    e = _union(cur)
    cur.done()
    return e


def _union(cur):
    e = _inter(cur)
    while cur.accept("|"):
        e = Bin("|", e, _inter(cur))
    return e


def _inter(cur):
    e = _comp(cur)
    while cur.accept("&"):
        e = Bin("&", e, _comp(cur))
    return e


def _comp(cur):
    e = _unary(cur)
    while (t := cur.accept(";+", ";-")) is not None:
        e = Bin(t.text, e, _unary(cur))
    return e


def _unary(cur):
    t = cur.accept("~", "^")
    if t is not None:
        return Un(t.text, _unary(cur))
    t = cur.next()
    if t.text == "(":
        e = _union(cur)
        cur.expect(")")
        return e
    if t.text in ("id+", "id-", "top", "bot"):
        return Const(t.text)
    if t.kind == "name":
        return Sym(t.text)
    raise ParseError(t.pos, f"expected an expression, found {t.text or 'end of input'!r}")


def show_cr(e: CRExpr) -> str:
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Const):
        return e.kind
    if isinstance(e, Un):
        return f"{e.op}{show_cr(e.arg)}"
    return f"({show_cr(e.left)} {e.op} {show_cr(e.right)})"


def symbols_of(e: CRExpr) -> set[str]:
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, Un):
        return symbols_of(e.arg)
    if isinstance(e, Bin):
        return symbols_of(e.left) | symbols_of(e.right)
    return set()


def cr_signature(e: CRExpr) -> Signature:
    return Signature.of({n: (1, 1) for n in symbols_of(e)})


# ---------------------------------------------------------------- encoding


def encode_cr(e: CRExpr, sig: Signature | None = None) -> Term:
    """The 1 → 1 term for ``e``; symbols must be binary in ``sig`` if given."""
    if sig is not None:
        for name in symbols_of(e):
            if name not in sig:
                raise UnknownSymbol(name)
            if sig.shape(name) != (1, 1):
                raise UnknownSymbol(f"{name} is not a binary relation symbol")
    return _enc(e)


def _enc(e: CRExpr) -> Term:
    if isinstance(e, Sym):
        return Gen(e.name, W)
    if isinstance(e, Const):
        return {
            "id+": lambda: Id1(W),
            "id-": lambda: Id1(B),
            "top": lambda: Seq(W, Discard(W), Codiscard(W)),
            "bot": lambda: Seq(B, Discard(B), Codiscard(B)),
        }[e.kind]()
    if isinstance(e, Un):
        inner = _enc(e.arg)
        sig1 = Signature.of({n: (1, 1) for n in symbols_of(e.arg)})
        return negate_term(inner, sig1) if e.op == "~" else converse_term(inner, sig1)
    left, right = _enc(e.left), _enc(e.right)
    if e.op == ";+":
        return Seq(W, left, right)
    if e.op == ";-":
        return Seq(B, left, right)
    col = W if e.op == "&" else B
    return Seq(col, Copier(col), Seq(col, Tensor(col, left, right), Cocopier(col)))


# ------------------------------------------------------------------ oracle


def cr_eval(e: CRExpr, size: int, rho: dict[str, set]) -> Relation:
    """Direct set semantics; ``rho`` maps names to sets of pairs (x, y)."""
    return Relation(1, 1, frozenset(((x,), (y,)) for x, y in _ev(e, size, rho)))


def _ev(e: CRExpr, d: int, rho) -> frozenset:
    X = range(d)
    full = frozenset((x, y) for x in X for y in X)
    if isinstance(e, Sym):
        return frozenset(rho.get(e.name, ()))
    if isinstance(e, Const):
        return {
            "id+": frozenset((x, x) for x in X),
            "id-": frozenset((x, y) for x in X for y in X if x != y),
            "top": full,
            "bot": frozenset(),
        }[e.kind]
    if isinstance(e, Un):
        r = _ev(e.arg, d, rho)
        return full - r if e.op == "~" else frozenset((y, x) for x, y in r)
    a, b = _ev(e.left, d, rho), _ev(e.right, d, rho)
    if e.op == ";+":
        return frozenset((x, z) for x in X for z in X if any((x, y) in a and (y, z) in b for y in X))
    if e.op == ";-":
        return frozenset((x, z) for x in X for z in X if all((x, y) in a or (y, z) in b for y in X))
    return a & b if e.op == "&" else a | b
