"""Derived structure: cups and caps, converse, linear adjoint, negation, lattice.

None of these are primitives of the term language; each is a macro that
expands into ordinary terms.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import TypeMismatch
from .terms import (
    B, W, Codiscard, Cocopier, Color, Constant, Copier, Discard, Gen, Id0, Id1,
    Seq, Signature, Sym, Tensor, Term, ident, sugar, typecheck,
)


def cup(color: Color, n: int) -> Term:
    """0 → 2n; the unit of the compact closed structure."""
    return Seq(color, sugar("codiscard", color, n), sugar("copier", color, n))


def cap(color: Color, n: int) -> Term:
    """2n → 0; the counit."""
    return Seq(color, sugar("cocopier", color, n), sugar("discard", color, n))


def cup_cap(kind: str, color: Color, n: int) -> Term:
    if kind == "cup":
        return cup(color, n)
    if kind == "cap":
        return cap(color, n)
    raise ValueError(f"unknown kind {kind!r}")


def converse_term(c: Term, sig: Signature | None = None) -> Term:
    """The mirror image of ``c`` : n → m, of type m → n.

    (cup_n ⊗ id_m) ; (id_n ⊗ c ⊗ id_m) ; (id_n ⊗ cap_m), all white.
    """
    n, m = typecheck(c, sig or Signature())
    return converse_with(c, n, m)


def converse_with(c: Term, n: int, m: int) -> Term:
    w = W
    first = Tensor(w, cup(w, n), ident(w, m))
    middle = Tensor(w, ident(w, n), Tensor(w, c, ident(w, m)))
    last = Tensor(w, ident(w, n), cap(w, m))
    return Seq(w, first, Seq(w, middle, last))


_ALPHA_CONST = {
    # (kind, colour) -> (kind, colour)
    (Copier, W): (Cocopier, B), (Cocopier, W): (Copier, B),
    (Discard, W): (Codiscard, B), (Codiscard, W): (Discard, B),
    (Copier, B): (Cocopier, W), (Cocopier, B): (Copier, W),
    (Discard, B): (Codiscard, W), (Codiscard, B): (Discard, W),
}


@lru_cache(maxsize=1 << 16)
def linear_adjoint(c: Term) -> Term:
    """α(c): colours flipped, sequential arguments swapped, (co)monoids exchanged."""
    if isinstance(c, Gen):
        return Gen(c.name, c.color.flip)
    if isinstance(c, (Id0, Id1, Sym)):
        return type(c)(c.color.flip)
    if isinstance(c, Constant):
        kind, col = _ALPHA_CONST[(type(c), c.color)]
        return kind(col)
    if isinstance(c, Seq):
        return Seq(c.color.flip, linear_adjoint(c.right), linear_adjoint(c.left))
    if isinstance(c, Tensor):
        return Tensor(c.color.flip, linear_adjoint(c.left), linear_adjoint(c.right))
    raise TypeError(f"cannot take the linear adjoint of {c!r}")


alpha = linear_adjoint


def negate_term(c: Term, sig: Signature | None = None) -> Term:
    """Complement, as the converse of the linear adjoint."""
    a = linear_adjoint(c)
    return converse_term(a, sig)


def meet(c: Term, d: Term, sig: Signature | None = None) -> Term:
    return _lattice(W, c, d, sig)


def join(c: Term, d: Term, sig: Signature | None = None) -> Term:
    return _lattice(B, c, d, sig)


def _lattice(col: Color, c: Term, d: Term, sig: Signature | None) -> Term:
    s = sig or Signature()
    tc, td = typecheck(c, s), typecheck(d, s)
    if tc != td:
        raise TypeMismatch((), str(tc), str(td), "lattice operands must share a type")
    n, m = tc
    return Seq(col, sugar("copier", col, n),
               Seq(col, Tensor(col, c, d), sugar("cocopier", col, m)))


def top(n: int, m: int) -> Term:
    return Seq(W, sugar("discard", W, n), sugar("codiscard", W, m))


def bottom(n: int, m: int) -> Term:
    return Seq(B, sugar("discard", B, n), sugar("codiscard", B, m))


def lattice_macro(kind: str, c: Term | None = None, d: Term | None = None, *,
                  type_: tuple[int, int] | None = None, sig: Signature | None = None) -> Term:
    if kind in ("meet", "join"):
        if c is None or d is None:
            raise ValueError(f"{kind} needs two operands")
        return meet(c, d, sig) if kind == "meet" else join(c, d, sig)
    if kind in ("top", "bottom"):
        if type_ is None:
            raise ValueError(f"{kind} needs a target type")
        return top(*type_) if kind == "top" else bottom(*type_)
    raise ValueError(f"unknown lattice macro {kind!r}")
