"""First-order theories and the transformations on them.

A theory is a signature with an ordered list of axiom pairs (c, d), read
as c ≤ d.  The module also builds closed theories, the axioms that force a
symbol to be a total function, witness axioms for a constant, the erasure
of a constant into an extra input wire, and a bounded model search that
classifies theories as non-trivial, trivial or (evidently) contradictory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .derived import cap, cup, linear_adjoint
from .errors import BadCoarity, BadType, IllTyped, InvalidInput, TypeMismatch
from .semantics import (
    Evaluator, FiniteInterpretation, decode_interpretation, batches, count_interpretations,
    evaluator_for,
)
from .syntax import parse_term
from .terms import (
    B, W, Constant, Gen, Id0, Id1, Seq, Signature, Tensor, Term, ident, sugar, typecheck,
)

Axiom = tuple[Term, Term]


@dataclass(frozen=True)
class Theory:
    signature: Signature
    axioms: tuple[Axiom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple((l, r) for l, r in self.axioms))
        for i, (l, r) in enumerate(self.axioms):
            try:
                tl, tr = typecheck(l, self.signature), typecheck(r, self.signature)
            except TypeMismatch as e:
                raise IllTyped(f"axiom {i} does not typecheck: {e}") from None
            if tl != tr:
                raise IllTyped(f"axiom {i} relates {tl} to {tr}")

    def extend(self, *pairs: Axiom, signature: Signature | None = None) -> "Theory":
        return Theory(signature or self.signature, self.axioms + tuple(pairs))

    def to_json(self) -> dict:
        return {"signature": self.signature.to_json(),
                "axioms": [{"lhs": str(l), "rhs": str(r)} for l, r in self.axioms]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Theory":
        try:
            sig = Signature.from_json(data.get("signature", {}))
            axioms = tuple((parse_term(a["lhs"], sig), parse_term(a["rhs"], sig))
                           for a in data.get("axioms", []))
        except (KeyError, TypeError, AttributeError) as e:
            raise InvalidInput(f"malformed theory: {e}") from None
        return cls(sig, axioms)


def empty_theory(sig: Signature | None = None) -> Theory:
    return Theory(sig or Signature())


# ------------------------------------------------------------------- closure


def closed_form(c: Term, d: Term, sig: Signature) -> Term:
    """A 0 → 0 diagram K(c, d) that holds exactly when c ≤ d does.

    It is the black trace of d ;⁻ α(c): semantically ∀x̄ ∀ȳ. c(x̄,ȳ) → d(x̄,ȳ).
    """
    n, _ = typecheck(c, sig)
    body = Tensor(B, Seq(B, d, linear_adjoint(c)), ident(B, n))
    return Seq(B, cup(B, n), Seq(B, body, cap(B, n)))


def close_theory(thy: Theory) -> Theory:
    return Theory(thy.signature, tuple((Id0(W), closed_form(c, d, thy.signature))
                                       for c, d in thy.axioms))


# ---------------------------------------------------------------- functions


def function_axioms(f: str, sig: Signature) -> list[Axiom]:
    """Pairs forcing ``f`` (coarity 1) to denote a total function.

    Single-valuedness: copier ; (f ⊗ f) ≤ f ; copier.
    Totality: discard ≤ f ; discard.
    For a constant (arity 0) the copier and discard on the left vanish.
    """
    ar, coar = sig.shape(f)
    if coar != 1:
        raise BadCoarity(f"{f} has coarity {coar}, expected 1")
    g = Gen(f, W)
    if ar == 0:
        single = (Tensor(W, g, g), Seq(W, g, sugar("copier", W, 1)))
        total = (Id0(W), Seq(W, g, sugar("discard", W, 1)))
    else:
        single = (Seq(W, sugar("copier", W, ar), Tensor(W, g, g)),
                  Seq(W, g, sugar("copier", W, 1)))
        total = (sugar("discard", W, ar), Seq(W, g, sugar("discard", W, 1)))
    return [single, total]


def witness_diagram(k: str, c: Term) -> Term:
    """0 → 0 diagram for "if some x satisfies c then k does"."""
    return Seq(B, Seq(W, Gen(k, W), c),
               Seq(B, linear_adjoint(c), sugar("discard", B, 1)))


def witness_axioms(k: str, c: Term, sig: Signature) -> list[Axiom]:
    if sig.shape(k) != (0, 1):
        raise BadType(f"{k} must have type 0 -> 1")
    try:
        t = typecheck(c, sig)
    except TypeMismatch as e:
        raise BadType(str(e)) from None
    if tuple(t) != (1, 0):
        raise BadType(f"witness predicate must have type 1 -> 0, found {t}")
    return function_axioms(k, sig) + [(Id0(W), witness_diagram(k, c))]


# ------------------------------------------------------------ constant erasure


def erase_constant(t: Term, k: str, sig: Signature) -> Term:
    """φ(t): the constant ``k`` replaced by a fresh leading input wire.

    For t : n → m the result has type 1+n → m; on k-free terms it agrees
    with (discard ⊗ id_n) ; t.
    """
    return _phi(t, k, sig)


def _phi(t: Term, k: str, sig: Signature) -> Term:
    if isinstance(t, Gen) and t.name == k:
        return Id1(W) if t.color is W else cap(B, 1)
    if isinstance(t, (Gen, Constant)):
        return Tensor(t.color, sugar("discard", t.color, 1), t)
    col = t.color  # type: ignore[attr-defined]
    if isinstance(t, Seq):
        n, _ = typecheck(t.left, sig)
        fan = Tensor(col, sugar("copier", col, 1), ident(col, n))
        return Seq(col, fan, Seq(col, Tensor(col, ident(col, 1), _phi(t.left, k, sig)),
                                 _phi(t.right, k, sig)))
    if isinstance(t, Tensor):
        n1, _ = typecheck(t.left, sig)
        n2, _ = typecheck(t.right, sig)
        fan = Tensor(col, sugar("copier", col, 1), ident(col, n1 + n2))
        shuffle = Tensor(col, ident(col, 1), Tensor(col, sugar("sym", col, 1, n1), ident(col, n2)))
        return Seq(col, fan, Seq(col, shuffle, Tensor(col, _phi(t.left, k, sig), _phi(t.right, k, sig))))
    raise TypeError(f"cannot erase constants in {t!r}")


# -------------------------------------------------------------- satisfaction


def satisfies(thy: Theory, interp: FiniteInterpretation) -> bool:
    ev = evaluator_for(interp)
    return all(bool(np.all(~ev(l) | ev(r))) for l, r in thy.axioms)


def _model_mask(thy: Theory, ev: Evaluator, count: int) -> np.ndarray:
    ok = np.ones(count, dtype=bool)
    for l, r in thy.axioms:
        holds = np.all(~ev(l) | ev(r), axis=(-2, -1))
        ok &= np.broadcast_to(holds, (count,))
    return ok


def models(thy: Theory, domain_sizes: Iterable[int], budget: int) -> Iterable[FiniteInterpretation]:
    for size, off, arrays in batches(thy.signature, domain_sizes, budget):
        count = len(next(iter(arrays.values()))) if arrays else 1
        mask = _model_mask(thy, Evaluator(size, arrays), count)
        for i in np.nonzero(mask)[0]:
            yield decode_interpretation(thy.signature, size, off + int(i))


# ------------------------------------------------------------ classification


@dataclass(frozen=True)
class Classification:
    """Bounded evidence about a theory; never a proof."""

    label: str  # ModelNonEmpty | ModelEmptyOnly | NoModelUpToBound
    model: FiniteInterpretation | None
    sizes: tuple[int, ...]
    checked: int
    exhausted: bool = False  # the budget cut the search short

    def describe(self) -> str:
        bound = f"sizes {list(self.sizes)}, {self.checked} interpretations"
        if self.exhausted:
            bound += ", budget exhausted"
        return f"{self.label} ({bound})"


MODEL_NON_EMPTY = "ModelNonEmpty"
MODEL_EMPTY_ONLY = "ModelEmptyOnly"
NO_MODEL = "NoModelUpToBound"


def classify(thy: Theory, domain_sizes: Sequence[int], budget: int) -> Classification:
    sizes = tuple(domain_sizes)
    empty_model = None
    checked = 0
    for size, off, arrays in batches(thy.signature, sorted(sizes), budget):
        count = len(next(iter(arrays.values()))) if arrays else 1
        mask = _model_mask(thy, Evaluator(size, arrays), count)
        hits = np.nonzero(mask)[0]
        if hits.size:
            found = decode_interpretation(thy.signature, size, off + int(hits[0]))
            if size > 0:
                return Classification(MODEL_NON_EMPTY, found, sizes, checked + int(hits[0]) + 1)
            empty_model = empty_model or found
        checked += count
    total = sum(count_interpretations(thy.signature, s) for s in sizes)
    exhausted = total > budget
    if empty_model is not None:
        return Classification(MODEL_EMPTY_ONLY, empty_model, sizes, checked, exhausted)
    return Classification(NO_MODEL, None, sizes, checked, exhausted)
