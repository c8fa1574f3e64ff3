"""Finite interpretations and the relational semantics of terms.

Relations R ⊆ X^n × X^m over the domain {0..d-1} are held internally as
boolean matrices of shape (d**n, d**m).  A tuple indexes its row (or
column) in row-major order with the first coordinate most significant, so
the lexicographic order on tuples is the index order.  Every array may
carry leading batch axes; evaluating a term against a whole batch of
interpretations at once is what makes the exhaustive sweeps cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidInput, TypeMismatch, UnknownSymbol
from .terms import (
    B, W, Codiscard, Cocopier, Color, Constant, Copier, Discard, Gen, Id0, Id1,
    Seq, Signature, Sym, Tensor, Term, typecheck,
)

Tuple_ = tuple[int, ...]
Pair = tuple[Tuple_, Tuple_]


# ---------------------------------------------------------------- relations


@dataclass(frozen=True)
class Relation:
    """A relation between X^n and X^m as a set of tuple pairs."""

    n: int
    m: int
    pairs: frozenset[Pair] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(
            (tuple(x), tuple(y)) for x, y in self.pairs))
        for x, y in self.pairs:
            if len(x) != self.n or len(y) != self.m:
                raise InvalidInput(f"pair {(x, y)} does not have shape ({self.n}, {self.m})")

    def __contains__(self, pair) -> bool:
        x, y = pair
        return (tuple(x), tuple(y)) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __le__(self, other: "Relation") -> bool:
        return self.pairs <= other.pairs

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs)

    def to_json(self) -> list:
        return [[list(x), list(y)] for x, y in self.sorted_pairs()]


def converse(r: Relation) -> Relation:
    return Relation(r.m, r.n, frozenset((y, x) for x, y in r.pairs))


def all_tuples(d: int, k: int) -> list[Tuple_]:
    return list(itertools.product(range(d), repeat=k))


def complement(r: Relation, d: int) -> Relation:
    full = {(x, y) for x in all_tuples(d, r.n) for y in all_tuples(d, r.m)}
    return Relation(r.n, r.m, frozenset(full - r.pairs))


def relation_to_array(r: Relation, d: int) -> np.ndarray:
    a = np.zeros((d ** r.n, d ** r.m), dtype=bool)
    for x, y in r.pairs:
        a[_index(x, d), _index(y, d)] = True
    return a


def array_to_relation(a: np.ndarray, d: int, n: int, m: int) -> Relation:
    rows, cols = np.nonzero(a)
    xs, ys = all_tuples(d, n), all_tuples(d, m)
    return Relation(n, m, frozenset((xs[i], ys[j]) for i, j in zip(rows, cols)))


def _index(t: Sequence[int], d: int) -> int:
    i = 0
    for v in t:
        if not 0 <= v < d:
            raise InvalidInput(f"element {v} outside the domain of size {d}")
        i = i * d + v
    return i


# ----------------------------------------------------------- interpretations


@dataclass(frozen=True)
class FiniteInterpretation:
    """Domain {0..size-1} plus a relation for each symbol."""

    size: int
    rho: Mapping[str, Relation] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 0:
            raise InvalidInput("domain size must be non-negative")
        object.__setattr__(self, "rho", dict(sorted(self.rho.items())))
        for name, r in self.rho.items():
            for x, y in r.pairs:
                if any(not 0 <= v < self.size for v in x + y):
                    raise InvalidInput(f"relation {name} mentions elements outside the domain")
        object.__setattr__(self, "_arrays", {})

    @property
    def domain(self) -> range:
        return range(self.size)

    @property
    def signature(self) -> Signature:
        return Signature.of({k: (r.n, r.m) for k, r in self.rho.items()})

    def array(self, name: str) -> np.ndarray:
        cache = self._arrays  # type: ignore[attr-defined]
        if name not in cache:
            if name not in self.rho:
                raise UnknownSymbol(name)
            cache[name] = relation_to_array(self.rho[name], self.size)
        return cache[name]

    def __hash__(self) -> int:
        return hash((self.size, tuple((k, v) for k, v in self.rho.items())))

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteInterpretation) and self.size == other.size
                and dict(self.rho) == dict(other.rho))

    def to_json(self) -> dict:
        return {"domain": self.size,
                "relations": {k: r.to_json() for k, r in self.rho.items()}}

    @classmethod
    def from_json(cls, data: Mapping, sig: Signature | None = None) -> "FiniteInterpretation":
        try:
            size = int(data["domain"])
            rels = data.get("relations", {})
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"malformed interpretation: {e}") from None
        rho = {}
        names = set(rels) | (set(sig.names) if sig else set())
        for name in sorted(names):
            pairs = [(tuple(p[0]), tuple(p[1])) for p in rels.get(name, [])]
            if sig is not None:
                if name not in sig:
                    raise UnknownSymbol(name)
                n, m = sig.shape(name)
            elif pairs:
                n, m = len(pairs[0][0]), len(pairs[0][1])
            else:
                raise InvalidInput(f"cannot infer the shape of empty relation {name}")
            rho[name] = Relation(n, m, frozenset(pairs))
        return cls(size, rho)


# ------------------------------------------------------------ primitives


@lru_cache(maxsize=None)
def _white_const(kind: type, d: int) -> np.ndarray:
    if kind is Id0:
        return np.ones((1, 1), dtype=bool)
    if kind is Id1:
        return np.eye(d, dtype=bool)
    if kind is Sym:
        a = np.zeros((d, d, d, d), dtype=bool)
        for x in range(d):
            for y in range(d):
                a[x, y, y, x] = True
        return a.reshape(d * d, d * d)
    if kind is Copier:
        a = np.zeros((d, d, d), dtype=bool)
        for x in range(d):
            a[x, x, x] = True
        return a.reshape(d, d * d)
    if kind is Cocopier:
        return _white_const(Copier, d).T.copy()
    if kind is Discard:
        return np.ones((d, 1), dtype=bool)
    if kind is Codiscard:
        return np.ones((1, d), dtype=bool)
    raise TypeError(kind)


@lru_cache(maxsize=None)
def const_array(kind: type, color: Color, d: int) -> np.ndarray:
    a = _white_const(kind, d)
    out = a if color is W else ~a
    out = out.copy()
    out.setflags(write=False)
    return out


def seq_white(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """{(x, z) | ∃y. a(x,y) ∧ b(y,z)} as a boolean matrix product."""
    return np.matmul(a.astype(np.float32), b.astype(np.float32)) > 0.5


def seq_black(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """{(x, z) | ∀y. a(x,y) ∨ b(y,z)}.

    The universally quantified clause fails exactly when some y has both
    a(x,y) and b(y,z) false, so it is the complement of the existential
    composite of the complements.
    """
    return ~seq_white(~a, ~b)


def tensor(a: np.ndarray, b: np.ndarray, color: Color) -> np.ndarray:
    batch = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    (p, q), (r, s) = a.shape[-2:], b.shape[-2:]
    x = a[..., :, None, :, None]
    y = b[..., None, :, None, :]
    out = (x & y) if color is W else (x | y)
    return out.reshape(batch + (p * r, q * s))


class Evaluator:
    """Evaluates terms against a (possibly batched) family of interpretations.

    ``arrays`` maps each symbol to an array of shape (*batch, d**ar, d**coar).
    Results are memoised per term, so shared subterms cost nothing.
    """

    def __init__(self, size: int, arrays: Mapping[str, np.ndarray]):
        self.size = size
        self.arrays = dict(arrays)
        self.memo: dict[Term, np.ndarray] = {}

    def __call__(self, t: Term) -> np.ndarray:
        got = self.memo.get(t)
        if got is not None:
            return got
        d = self.size
        if isinstance(t, Constant):
            out = const_array(type(t), t.color, d)
        elif isinstance(t, Gen):
            if t.name not in self.arrays:
                raise UnknownSymbol(t.name)
            r = self.arrays[t.name]
            out = r if t.color is W else np.swapaxes(~r, -1, -2)
        elif isinstance(t, Seq):
            left, right = self(t.left), self(t.right)
            if left.shape[-1] != right.shape[-2]:
                raise TypeMismatch((), left.shape[-1], right.shape[-2], "composition")
            out = seq_white(left, right) if t.color is W else seq_black(left, right)
        elif isinstance(t, Tensor):
            out = tensor(self(t.left), self(t.right), t.color)
        else:
            raise TypeError(f"cannot evaluate {t!r}")
        self.memo[t] = out
        return out


def evaluator_for(interp: FiniteInterpretation) -> Evaluator:
    return Evaluator(interp.size, {k: interp.array(k) for k in interp.rho})


def eval_array(t: Term, interp: FiniteInterpretation) -> np.ndarray:
    typecheck(t, interp.signature)
    return evaluator_for(interp)(t)


def eval_term(t: Term, interp: FiniteInterpretation) -> Relation:
    """The relation denoted by ``t`` under ``interp``."""
    n, m = typecheck(t, interp.signature)
    return array_to_relation(evaluator_for(interp)(t), interp.size, n, m)


def semantic_leq(c: Term, d: Term, interp: FiniteInterpretation) -> bool:
    sig = interp.signature
    tc, td = typecheck(c, sig), typecheck(d, sig)
    if tc != td:
        raise TypeMismatch((), str(tc), str(td), "both sides must share a type")
    ev = evaluator_for(interp)
    return bool(np.all(~ev(c) | ev(d)))


# -------------------------------------------------------------- enumeration


class BudgetExceeded:
    """End-of-stream marker emitted when the budget runs out."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "BUDGET_EXCEEDED"


BUDGET_EXCEEDED = BudgetExceeded()


def _cells(d: int, ar: int, coar: int) -> int:
    return d ** (ar + coar)


def count_interpretations(sig: Signature, size: int) -> int:
    total = 1
    for _, ar, coar in sig.symbols:
        total *= 2 ** _cells(size, ar, coar)
    return total


def decode_interpretation(sig: Signature, size: int, index: int) -> FiniteInterpretation:
    rho = {}
    for name, ar, coar in reversed(sig.symbols):
        cells = _cells(size, ar, coar)
        bits = index % (1 << cells)
        index >>= cells
        xs, ys = all_tuples(size, ar), all_tuples(size, coar)
        pairs = frozenset((xs[i // len(ys)], ys[i % len(ys)])
                          for i in range(cells) if bits >> i & 1)
        rho[name] = Relation(ar, coar, pairs)
    return FiniteInterpretation(size, rho)


def enumerate_interpretations(sig: Signature, domain_sizes: Iterable[int],
                              budget: int) -> Iterator[FiniteInterpretation | BudgetExceeded]:
    """Every interpretation over each listed domain size, in a fixed order.

    Within a size the relation of each symbol ranges over subsets of its
    lexicographically sorted pair list in binary-counter order (pair i is
    bit i), with the last symbol in name order varying fastest.  At most
    ``budget`` items are produced; if more exist the stream ends with
    :data:`BUDGET_EXCEEDED`.
    """
    emitted = 0
    for size in domain_sizes:
        for idx in range(count_interpretations(sig, size)):
            if emitted >= budget:
                yield BUDGET_EXCEEDED
                return
            yield decode_interpretation(sig, size, idx)
            emitted += 1


def interpretation_batch(sig: Signature, size: int, start: int = 0,
                         stop: int | None = None) -> dict[str, np.ndarray]:
    """Arrays for interpretations ``start..stop`` of one size, batched on axis 0.

    The batch order agrees with :func:`enumerate_interpretations`.
    """
    total = count_interpretations(sig, size)
    stop = total if stop is None else min(stop, total)
    if total < 2 ** 62:
        idx = np.arange(start, stop, dtype=np.int64)
    else:  # only slices of such a space are ever materialised
        idx = np.array(list(range(start, stop)), dtype=object)
    out: dict[str, np.ndarray] = {}
    for name, ar, coar in reversed(sig.symbols):
        cells = _cells(size, ar, coar)
        mask = (1 << cells) - 1
        local = idx & mask if idx.dtype != object else np.array([int(i) & mask for i in idx], dtype=object)
        if cells <= 62:
            local = local.astype(np.int64)
            bits = (local[:, None] >> np.arange(cells, dtype=np.int64)) & 1
        else:
            bits = np.array([[(int(i) >> k) & 1 for k in range(cells)] for i in local])
        out[name] = bits.astype(bool).reshape(len(idx), size ** ar, size ** coar)
        idx = idx >> cells
    return dict(sorted(out.items()))


def batches(sig: Signature, domain_sizes: Iterable[int], budget: int,
            chunk: int = 4096) -> Iterator[tuple[int, int, dict[str, np.ndarray]]]:
    """Yield (size, offset, arrays) chunks covering at most ``budget`` interpretations."""
    left = budget
    for size in domain_sizes:
        total = count_interpretations(sig, size)
        off = 0
        while off < total and left > 0:
            n = min(chunk, total - off, left)
            yield size, off, interpretation_batch(sig, size, off, off + n)
            off += n
            left -= n


def exhausts_budget(sig: Signature, domain_sizes: Iterable[int], budget: int) -> bool:
    return sum(count_interpretations(sig, s) for s in domain_sizes) > budget


@dataclass
class SearchOutcome:
    countermodel: FiniteInterpretation | None
    checked: int
    exhausted: bool  # True when the budget cut the search short


def search(c: Term, d: Term, sig: Signature, domain_sizes: Sequence[int],
           budget: int) -> SearchOutcome:
    tc, td = typecheck(c, sig), typecheck(d, sig)
    if tc != td:
        raise TypeMismatch((), str(tc), str(td), "both sides must share a type")
    checked = 0
    for size, off, arrays in batches(sig, domain_sizes, budget):
        ev = Evaluator(size, arrays)
        bad = np.any(ev(c) & ~ev(d), axis=(-2, -1))
        bad = np.broadcast_to(bad, (len(next(iter(arrays.values()))) if arrays else 1,))
        hits = np.nonzero(bad)[0]
        if hits.size:
            return SearchOutcome(decode_interpretation(sig, size, off + int(hits[0])),
                                 checked + int(hits[0]) + 1, False)
        checked += bad.shape[0]
    return SearchOutcome(None, checked, exhausts_budget(sig, domain_sizes, budget))


def countermodel_search(c: Term, d: Term, sig: Signature, domain_sizes: Sequence[int],
                        budget: int) -> FiniteInterpretation | None:
    """First enumerated interpretation where c ⊆ d fails, if any within budget."""
    return search(c, d, sig, domain_sizes, budget).countermodel
