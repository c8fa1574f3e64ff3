"""Hypothesis strategies for typed terms and small interpretations."""

from __future__ import annotations

from hypothesis import strategies as st

from relcalc.semantics import FiniteInterpretation, Relation
from relcalc.terms import (
    B, W, Codiscard, Cocopier, Copier, Discard, Gen, Id0, Id1, Seq, Signature, Sym,
    Tensor, Term, sugar,
)

from reference import tuples

SIG2 = Signature.of(R=(1, 1), S=(1, 1))
SIG_MIXED = Signature.of(R=(1, 1), P=(2, 0))

_CONSTS = [Id0, Id1, Sym, Copier, Discard, Cocopier, Codiscard]


def _atoms(sig: Signature, n: int, m: int) -> list[Term]:
    out = []
    for col in (W, B):
        for k in _CONSTS:
            t = k(col)
            if _const_type(k) == (n, m):
                out.append(t)
        for name in sig.names:
            ar, coar = sig.shape(name)
            if (col is W and (ar, coar) == (n, m)) or (col is B and (coar, ar) == (n, m)):
                out.append(Gen(name, col))
    return out


def _const_type(k) -> tuple[int, int]:
    return {Id0: (0, 0), Id1: (1, 1), Sym: (2, 2), Copier: (1, 2), Discard: (1, 0),
            Cocopier: (2, 1), Codiscard: (0, 1)}[k]


def _filler(col, n: int, m: int) -> Term:
    return Seq(col, sugar("discard", col, n), sugar("codiscard", col, m))


@st.composite
def typed_terms(draw, sig: Signature = SIG2, n: int | None = None, m: int | None = None,
                depth: int = 3, max_wires: int = 2) -> Term:
    """A term of type n → m (drawn when not given) with nesting ≤ depth."""
    if n is None:
        n = draw(st.integers(0, max_wires))
    if m is None:
        m = draw(st.integers(0, max_wires))
    atoms = _atoms(sig, n, m)
    options = ["atom"] * bool(atoms)
    if depth > 0:
        options += ["seq", "tensor"]
    if not options:
        col = draw(st.sampled_from([W, B]))
        return _filler(col, n, m)
    choice = draw(st.sampled_from(options))
    if choice == "atom":
        return draw(st.sampled_from(atoms))
    col = draw(st.sampled_from([W, B]))
    if choice == "seq":
        k = draw(st.integers(0, max_wires))
        left = draw(typed_terms(sig, n, k, depth - 1, max_wires))
        right = draw(typed_terms(sig, k, m, depth - 1, max_wires))
        return Seq(col, left, right)
    n1 = draw(st.integers(0, n))
    m1 = draw(st.integers(0, m))
    left = draw(typed_terms(sig, n1, m1, depth - 1, max_wires))
    right = draw(typed_terms(sig, n - n1, m - m1, depth - 1, max_wires))
    return Tensor(col, left, right)


@st.composite
def interpretations(draw, sig: Signature = SIG2, max_size: int = 2) -> FiniteInterpretation:
    d = draw(st.integers(0, max_size))
    rho = {}
    for name in sig.names:
        ar, coar = sig.shape(name)
        cells = [(x, y) for x in tuples(d, ar) for y in tuples(d, coar)]
        keep = draw(st.lists(st.booleans(), min_size=len(cells), max_size=len(cells)))
        rho[name] = Relation(ar, coar, frozenset(c for c, k in zip(cells, keep) if k))
    return FiniteInterpretation(d, rho)
