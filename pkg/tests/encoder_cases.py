"""Expression generators and batched oracle comparisons for the CR and PFL encoders."""

from __future__ import annotations

import random

import numpy as np

from relcalc.encoders.cr import Bin, Const, Sym, Un, cr_eval, encode_cr
from relcalc.encoders.pfl import Atom, Functor, Ident, Meet, encode_pfl, pfl_eval
from relcalc.semantics import (
    Evaluator, array_to_relation, count_interpretations, decode_interpretation,
    interpretation_batch,
)
from relcalc.terms import Signature

CR_SIG = Signature.of(R=(1, 1))
PFL_SIG = Signature.of(R=(2, 0))

CR_LEAVES = [Sym("R")] + [Const(k) for k in ("id+", "id-", "top", "bot")]
CR_UNARY = ("~", "^")
CR_BINARY = (";+", ";-", "&", "|")
PFL_LEAVES = [Atom("R"), Ident()]
PFL_UNARY = ("!", "p", "P", "[", "]")


def all_cr(depth: int) -> list:
    """Every CR expression with at most ``depth`` nested operators."""
    cur = list(CR_LEAVES)
    for _ in range(depth):
        cur = (CR_LEAVES + [Un(o, e) for o in CR_UNARY for e in cur]
               + [Bin(o, a, b) for o in CR_BINARY for a in cur for b in cur])
    return cur


def all_pfl(depth: int) -> list:
    cur = list(PFL_LEAVES)
    for _ in range(depth):
        cur = (PFL_LEAVES + [Functor(o, e) for o in PFL_UNARY for e in cur]
               + [Meet(a, b) for a in cur for b in cur])
    return cur


def random_cr(rng: random.Random, depth: int):
    """A CR expression with exactly ``depth`` nested operators on its spine."""
    if depth == 0:
        return rng.choice(CR_LEAVES)
    if rng.random() < 0.3:
        return Un(rng.choice(CR_UNARY), random_cr(rng, depth - 1))
    a = random_cr(rng, depth - 1)
    b = random_cr(rng, rng.randint(0, depth - 1))
    if rng.random() < 0.5:
        a, b = b, a
    return Bin(rng.choice(CR_BINARY), a, b)


def random_pfl(rng: random.Random, depth: int):
    if depth == 0:
        return rng.choice(PFL_LEAVES)
    if rng.random() < 0.6:
        return Functor(rng.choice(PFL_UNARY), random_pfl(rng, depth - 1))
    a = random_pfl(rng, depth - 1)
    b = random_pfl(rng, rng.randint(0, depth - 1))
    if rng.random() < 0.5:
        a, b = b, a
    return Meet(a, b)


def _interps(sig, size):
    return [decode_interpretation(sig, size, i) for i in range(count_interpretations(sig, size))]


def cr_mismatches(exprs, sizes=(0, 1, 2)) -> tuple[int, list]:
    """Compare cr_eval with the encoded term on every interpretation of R : 1 → 1.

    Returns (comparisons made, mismatching (expr, interpretation) pairs).
    """
    terms = [encode_cr(e, CR_SIG) for e in exprs]
    checks, bad = 0, []
    for size in sizes:
        ev = Evaluator(size, interpretation_batch(CR_SIG, size))
        interps = _interps(CR_SIG, size)
        rhos = [{"R": {(x[0], y[0]) for x, y in i.rho["R"].pairs}} for i in interps]
        for e, t in zip(exprs, terms):
            got = np.broadcast_to(ev(t), (len(interps), size, size))
            for b, (i, rho) in enumerate(zip(interps, rhos)):
                checks += 1
                if array_to_relation(got[b], size, 1, 1) != cr_eval(e, size, rho):
                    bad.append((e, i))
    return checks, bad


def pfl_mismatches(preds, sizes=(0, 1, 2)) -> tuple[int, list]:
    """Compare pfl_eval with the encoded n → 0 term on every interpretation of R : 2 → 0."""
    encoded = [encode_pfl(p, PFL_SIG) for p in preds]
    checks, bad = 0, []
    for size in sizes:
        ev = Evaluator(size, interpretation_batch(PFL_SIG, size))
        interps = _interps(PFL_SIG, size)
        rhos = [{"R": {x for x, _ in i.rho["R"].pairs}} for i in interps]
        for p, (t, n) in zip(preds, encoded):
            got = np.broadcast_to(ev(t), (len(interps), size ** n, 1))
            for b, (i, rho) in enumerate(zip(interps, rhos)):
                checks += 1
                rel = array_to_relation(got[b], size, n, 0)
                if {x for x, _ in rel.pairs} != pfl_eval(p, size, rho, {"R": 2}):
                    bad.append((p, i))
    return checks, bad
