"""Random well-typed terms and random derivations, for property tests."""

from __future__ import annotations

import random
from typing import Sequence

from .axioms import _mvars, axiom_schemas
from .errors import IllTyped, MissingBinding, RelcalcError, StepMismatch
from .proofs import Derivation, ProofBuilder, replay
from .terms import (
    B, CONSTANTS, W, Color, Dir, Gen, Id0, Seq, Signature, Tensor, Term, positions, sugar,
    typecheck,
)
from .theories import Theory

COLORS = (W, B)


def _atoms_of_type(sig: Signature, n: int, m: int) -> list[Term]:
    out = []
    for c in COLORS:
        for k in CONSTANTS:
            if (k.arity, k.coarity) == (n, m):
                out.append(k(c))
        for name in sig.names:
            ar, coar = sig.shape(name)
            if (c is W and (ar, coar) == (n, m)) or (c is B and (coar, ar) == (n, m)):
                out.append(Gen(name, c))
    return out


def _filler(rng: random.Random, n: int, m: int) -> Term:
    """Some term of type n → m built from sugar."""
    c = rng.choice(COLORS)
    if n == m and rng.random() < 0.5:
        return sugar("id", c, n)
    return Seq(c, sugar("discard", c, n), sugar("codiscard", c, m))


def random_term(sig: Signature, rng: random.Random, depth: int = 3,
                type_: tuple[int, int] | None = None, max_wires: int = 2,
                colors: Sequence[Color] = COLORS) -> Term:
    """A random term of at most ``depth`` nested compositions.

    Without ``type_`` the type is drawn at random with both sides at most
    ``max_wires``.
    """
    if type_ is None:
        type_ = (rng.randint(0, max_wires), rng.randint(0, max_wires))
    n, m = type_
    if depth <= 0 or rng.random() < 0.25:
        cands = [t for t in _atoms_of_type(sig, n, m) if getattr(t, "color", W) in colors]
        return rng.choice(cands) if cands else _filler(rng, n, m)
    col = rng.choice(list(colors))
    if rng.random() < 0.55:
        k = rng.randint(0, max_wires)
        return Seq(col, random_term(sig, rng, depth - 1, (n, k), max_wires, colors),
                   random_term(sig, rng, depth - 1, (k, m), max_wires, colors))
    n1, m1 = rng.randint(0, n), rng.randint(0, m)
    return Tensor(col, random_term(sig, rng, depth - 1, (n1, m1), max_wires, colors),
                  random_term(sig, rng, depth - 1, (n - n1, m - m1), max_wires, colors))


# --------------------------------------------------------------- derivations


def _rewrite_once(pb: ProofBuilder, rng: random.Random, max_size: int) -> bool:
    """Try to apply one random axiom somewhere; False if nothing fitted."""
    sig = pb.thy.signature
    spots = list(positions(pb.current))
    rng.shuffle(spots)
    schemas = axiom_schemas()
    for path, sub in spots[:6]:
        rng.shuffle(schemas)
        for schema in schemas[:30]:
            dirs = ["fwd", "bwd"] if schema.side == "eq" else ["fwd"]
            direction = rng.choice(dirs)
            src, dst = (schema.lhs, schema.rhs) if direction == "fwd" else (schema.rhs, schema.lhs)
            have = {name for name, _ in _mvars(src)}
            extra: dict = {}
            for name, kind in _mvars(dst):
                if name in have or name in schema.derived:
                    continue
                if kind == "nat":
                    extra[name] = rng.randint(0, 1)
                elif kind == "term":
                    extra[name] = random_term(sig, rng, 0, (rng.randint(0, 1), rng.randint(0, 1)))
                else:
                    extra[name] = rng.choice(sig.names) if sig.names else None
            if None in extra.values():
                continue
            before = len(pb.steps)
            try:
                pb.rewrite(schema.id, path, extra or None, direction)
            except (StepMismatch, IllTyped, MissingBinding, RelcalcError):
                continue
            if pb.current.size > max_size:
                _undo(pb, before)
                continue
            return True
    return False


def _undo(pb: ProofBuilder, keep: int) -> None:
    pb.steps = pb.steps[:keep]
    pb.current = replay(pb.thy, pb.start, pb.steps)


def _use_added_axiom(pb: ProofBuilder, rng: random.Random, index: int) -> bool:
    spots = list(positions(pb.current))
    path, sub = rng.choice(spots)
    pb.back("tensor_unit_left_w", path, {"a": sub})
    pb.thy_axiom(index, tuple(path) + (Dir.TL,))
    return True


def random_derivation(thy: Theory, rng: random.Random, steps: int = 4,
                      start: Term | None = None, p_axiom: float = 0.35,
                      max_size: int = 40, min_axiom_uses: int = 0) -> Derivation:
    """A random checkable derivation; theory axiom ``-1`` must be id⁺₀ ≤ c.

    Each step either rewrites with a catalogue axiom at a random position,
    or introduces id⁺₀ via a tensor unit and rewrites it with the last
    theory axiom.  At least ``min_axiom_uses`` steps use the added axiom.
    """
    sig = thy.signature
    if start is None:
        start = random_term(sig, rng, 2, (rng.randint(0, 1), rng.randint(0, 1)))
    pb = ProofBuilder(thy, start)
    index = len(thy.axioms) - 1
    if index < 0 or thy.axioms[index][0] != Id0(W):
        raise ValueError("the last theory axiom must have id0+ on the left")
    uses = 0
    for _ in range(steps):
        if rng.random() < p_axiom and pb.current.size + thy.axioms[index][1].size < max_size:
            uses += _use_added_axiom(pb, rng, index)
        elif not _rewrite_once(pb, rng, max_size):
            break
    while uses < min_axiom_uses:
        uses += _use_added_axiom(pb, rng, index)
    return pb.build()


def added_axiom(sig: Signature, rng: random.Random, depth: int = 2) -> Term:
    """A random 0 → 0 term to play the part of the added axiom."""
    return random_term(sig, rng, depth, (0, 0), max_wires=1)
