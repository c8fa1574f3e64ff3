"""Concrete syntax for terms.

    atom ::= KW s | NAME s | KW s "[" nat ("," nat)* "]" | "(" term ")"
    term ::= atom | term ";" s term | term "*" s term

``KW`` is one of ``id0 id sw cp dc cc cd``; ``s`` is the colour tag
``+`` or ``-``.  Sequential composition binds tighter than the monoidal
product and both associate to the left.  The bracketed form is shorthand
for the n-ary sugar (``cp+[2]``, ``sw-[1,2]``); the printer never emits it.

In template mode (used for axiom schemas) undeclared bare names become
term metavariables, undeclared tagged names become symbol metavariables
and bracket arguments may be sums such as ``n+m``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, UnknownSymbol
from .terms import (
    B, W, Codiscard, Cocopier, Color, Constant, Copier, Discard, Gen, GenMeta,
    Id0, Id1, Meta, NatExpr, Seq, Signature, SugarNode, Sym, Tensor, Term, sugar,
)

KEYWORDS: dict[str, type[Constant]] = {
    "id0": Id0, "id": Id1, "sw": Sym, "cp": Copier,
    "dc": Discard, "cc": Cocopier, "cd": Codiscard,
}
SUGAR_OF = {"id": "id", "sw": "sym", "cp": "copier", "dc": "discard",
            "cc": "cocopier", "cd": "codiscard"}
KEYWORD_OF = {v: k for k, v in KEYWORDS.items()}
KIND_KEYWORD = {v: k for k, v in SUGAR_OF.items()}
SIGN = {"+": W, "-": B}


@dataclass
class _Tok:
    kind: str  # name, op, lpar, rpar, lbr, rbr, comma, nat, end
    text: str
    pos: int
    color: Color | None = None


def _tokens(text: str) -> list[_Tok]:
    out: list[_Tok] = []
    i, n = 0, len(text)
    depth = 0  # inside [...] the sign characters are arithmetic
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if depth and ch == "+":
            out.append(_Tok("plus", ch, i))
            i += 1
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            k = j
            while not depth and k < n and text[k].isspace():
                k += 1
            if not depth and k < n and text[k] in SIGN:
                out.append(_Tok("name", word, i, SIGN[text[k]]))
                i = k + 1
            else:
                out.append(_Tok("name", word, i))
                i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(_Tok("nat", text[i:j], i))
            i = j
            continue
        if ch in ";*":
            k = i + 1
            while k < n and text[k].isspace():
                k += 1
            if k >= n or text[k] not in SIGN:
                raise ParseError(i, f"operator {ch!r} needs a colour tag")
            out.append(_Tok("op", ch, i, SIGN[text[k]]))
            i = k + 1
            continue
        simple = {"(": "lpar", ")": "rpar", "[": "lbr", "]": "rbr", ",": "comma"}
        if ch in simple:
            depth += ch == "["
            depth -= ch == "]"
            if depth < 0:
                raise ParseError(i, "unbalanced ']'")
            out.append(_Tok(simple[ch], ch, i))
            i += 1
            continue
        raise ParseError(i, f"unexpected character {ch!r}")
    out.append(_Tok("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature | None, template: bool):
        self.toks = _tokens(text)
        self.i = 0
        self.sig = sig
        self.template = template

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(t.pos, f"expected {kind}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def parse(self) -> Term:
        t = self.tensor()
        end = self.peek()
        if end.kind != "end":
            raise ParseError(end.pos, f"trailing input {end.text!r}")
        return t

    def tensor(self) -> Term:
        t = self.seq()
        while self.peek().kind == "op" and self.peek().text == "*":
            col = self.take("op").color
            t = Tensor(col, t, self.seq())
        return t

    def seq(self) -> Term:
        t = self.atom()
        while self.peek().kind == "op" and self.peek().text == ";":
            col = self.take("op").color
            t = Seq(col, t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "lpar":
            self.i += 1
            t = self.tensor()
            self.take("rpar")
            return t
        if tok.kind != "name":
            raise ParseError(tok.pos, f"expected a term, found {tok.text or 'end of input'!r}")
        self.i += 1
        word, col = tok.text, tok.color
        if word in KEYWORDS:
            if col is None:
                raise ParseError(tok.pos, f"{word} needs a colour tag")
            if self.peek().kind == "lbr":
                if word == "id0":
                    raise ParseError(self.peek().pos, "id0 takes no arity")
                return self.sugar_args(word, col)
            return KEYWORDS[word](col)
        declared = self.sig is not None and word in self.sig
        if declared:
            if col is None:
                raise ParseError(tok.pos, f"symbol {word} needs a colour tag")
            return Gen(word, col)
        if self.template:
            return Meta(word) if col is None else GenMeta(word, col)
        if col is None:
            raise ParseError(tok.pos, f"symbol {word} needs a colour tag")
        if self.sig is not None:
            raise UnknownSymbol(word)
        return Gen(word, col)

    def sugar_args(self, word: str, col: Color) -> Term:
        self.take("lbr")
        args = [self.nat()]
        while self.peek().kind == "comma":
            self.i += 1
            args.append(self.nat())
        close = self.take("rbr")
        kind = SUGAR_OF[word]
        want = 2 if kind == "sym" else 1
        if len(args) != want:
            raise ParseError(close.pos, f"{word} takes {want} arity argument(s)")
        if self.template:
            return SugarNode(kind, col, tuple(args))
        nums = [a[0] for a in args]
        return sugar(kind, col, *nums)

    def nat(self) -> NatExpr:
        parts: list[str | int] = [self.nat_atom()]
        while self.peek().kind == "plus":
            self.i += 1
            parts.append(self.nat_atom())
        if not self.template:
            if not all(isinstance(p, int) for p in parts):
                raise ParseError(self.peek().pos, "arity must be a number")
            return (sum(parts),)  # type: ignore[arg-type]
        return tuple(parts)

    def nat_atom(self) -> str | int:
        tok = self.peek()
        if tok.kind == "nat":
            self.i += 1
            return int(tok.text)
        if tok.kind == "name" and self.template and tok.color is None:
            self.i += 1
            return tok.text
        raise ParseError(tok.pos, "expected an arity")


def parse_term(text: str, sig: Signature | None = None) -> Term:
    """Parse concrete syntax.  With ``sig`` given, names must be declared."""
    return _Parser(text, sig, template=False).parse()


def parse_template(text: str, sig: Signature | None = None) -> Term:
    return _Parser(text, sig, template=True).parse()


# ------------------------------------------------------------------ printer

_TENSOR, _SEQ, _ATOM = 0, 1, 2


def _nat_str(e: NatExpr) -> str:
    return "+".join(str(p) for p in e)


def _atom_str(t: Term) -> str:
    if isinstance(t, Constant):
        return KEYWORD_OF[type(t)] + t.color.sign
    if isinstance(t, Gen):
        return t.name + t.color.sign
    if isinstance(t, Meta):
        return t.name
    if isinstance(t, GenMeta):
        return t.name + t.color.sign
    if isinstance(t, SugarNode):
        return f"{KIND_KEYWORD[t.kind]}{t.color.sign}[{','.join(_nat_str(e) for e in t.nats)}]"
    raise TypeError(f"not a term: {t!r}")


def print_term(t: Term) -> str:
    """Render ``t`` so that :func:`parse_term` gives it back unchanged."""
    return _show(t)


def _show(t: Term) -> str:
    if isinstance(t, Seq):
        left = _wrap(t.left, _SEQ, right=False)
        return f"{left} ;{t.color.sign} {_wrap(t.right, _SEQ, right=True)}"
    if isinstance(t, Tensor):
        left = _wrap(t.left, _TENSOR, right=False)
        return f"{left} *{t.color.sign} {_wrap(t.right, _TENSOR, right=True)}"
    return _atom_str(t)


def _prec(t: Term) -> int:
    if isinstance(t, Seq):
        return _SEQ
    if isinstance(t, Tensor):
        return _TENSOR
    return _ATOM


def _wrap(t: Term, ctx: int, right: bool) -> str:
    p = _prec(t)
    if p < ctx or (right and p == ctx):
        return f"({_show(t)})"
    return _show(t)
