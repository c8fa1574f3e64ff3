"""A set-based evaluator written straight from the semantic clauses.

It shares nothing with the numpy evaluator in the package: relations are
Python sets of tuple pairs, constants are listed clause by clause, and
black composition enumerates its universally quantified middle directly.
"""

from __future__ import annotations

import itertools

from relcalc.terms import (
    B, W, Codiscard, Cocopier, Copier, Discard, Gen, Id0, Id1, Seq, Sym, Tensor, Term,
)


def tuples(d: int, k: int) -> list[tuple]:
    return list(itertools.product(range(d), repeat=k))


def ref_type(t: Term, shapes: dict[str, tuple[int, int]]) -> tuple[int, int]:
    if isinstance(t, Gen):
        ar, coar = shapes[t.name]
        return (ar, coar) if t.color is W else (coar, ar)
    if isinstance(t, Id0):
        return 0, 0
    if isinstance(t, Id1):
        return 1, 1
    if isinstance(t, Sym):
        return 2, 2
    if isinstance(t, Copier):
        return 1, 2
    if isinstance(t, Discard):
        return 1, 0
    if isinstance(t, Cocopier):
        return 2, 1
    if isinstance(t, Codiscard):
        return 0, 1
    if isinstance(t, Seq):
        return ref_type(t.left, shapes)[0], ref_type(t.right, shapes)[1]
    a, b = ref_type(t.left, shapes), ref_type(t.right, shapes)
    return a[0] + b[0], a[1] + b[1]


def ref_eval(t: Term, d: int, rho: dict[str, set], shapes: dict[str, tuple[int, int]]) -> set:
    """Pairs (x, y) of tuples denoted by ``t`` over the domain {0..d-1}."""
    n, m = ref_type(t, shapes)
    space = [(x, y) for x in tuples(d, n) for y in tuples(d, m)]
    white = t.color is W
    if isinstance(t, Gen):
        r = rho[t.name]
        if white:
            return set(r)
        # R• relates y to x exactly when (x, y) is not in ρ(R)
        return {(y, x) for (y, x) in space if (x, y) not in r}
    if isinstance(t, Id0):
        return {((), ())} if white else set()
    if isinstance(t, Id1):
        return {(x, y) for x, y in space if (x[0] == y[0]) == white}
    if isinstance(t, Sym):
        return {(x, y) for x, y in space
                if white == (x[0] == y[1] and x[1] == y[0])}
    if isinstance(t, Copier):
        return {(x, y) for x, y in space if white == (x[0] == y[0] == y[1])}
    if isinstance(t, Cocopier):
        return {(x, y) for x, y in space if white == (x[0] == x[1] == y[0])}
    if isinstance(t, (Discard, Codiscard)):
        return set(space) if white else set()
    if isinstance(t, Seq):
        left = ref_eval(t.left, d, rho, shapes)
        right = ref_eval(t.right, d, rho, shapes)
        mid = tuples(d, ref_type(t.left, shapes)[1])
        if white:
            return {(x, z) for x, z in space
                    if any((x, y) in left and (y, z) in right for y in mid)}
        return {(x, z) for x, z in space
                if all((x, y) in left or (y, z) in right for y in mid)}
    if isinstance(t, Tensor):
        left = ref_eval(t.left, d, rho, shapes)
        right = ref_eval(t.right, d, rho, shapes)
        ln, lm = ref_type(t.left, shapes)
        out = set()
        for x, y in space:
            a = (x[:ln], y[:lm]) in left
            b = (x[ln:], y[lm:]) in right
            if (a and b) if white else (a or b):
                out.add((x, y))
        return out
    raise TypeError(f"reference evaluator cannot handle {t!r}")


def all_rhos(shapes: dict[str, tuple[int, int]], d: int):
    """Every assignment of relations to the symbols over {0..d-1}."""
    names = sorted(shapes)
    cells = {k: [(x, y) for x in tuples(d, shapes[k][0]) for y in tuples(d, shapes[k][1])]
             for k in names}
    choices = [[frozenset(c for c, keep in zip(cells[k], bits) if keep)
                for bits in itertools.product((0, 1), repeat=len(cells[k]))]
               for k in names]
    for combo in itertools.product(*choices):
        yield dict(zip(names, combo))
