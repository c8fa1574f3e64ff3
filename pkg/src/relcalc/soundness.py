"""Semantic soundness sweep for the axiom catalogue.

Every schema is instantiated over a small universe of atoms (the fourteen
structural constants, the generator in both colours, nats 0..2) and both
sides are evaluated over every interpretation of a one-symbol signature
up to a domain bound.  Interpretations are evaluated in batches, so one
numpy pass covers all relations of a given size.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .axioms import AxiomInstance, AxiomSchema, Binding, axiom_schemas, instantiate
from .errors import IllTyped, MissingBinding
from .semantics import (
    Evaluator, FiniteInterpretation, count_interpretations, decode_interpretation,
    interpretation_batch,
)
from .terms import B, CONSTANTS, W, Gen, Signature, Term, typecheck

BindingsGenerator = Callable[[AxiomSchema, Signature], Iterable[Mapping[str, Binding]]]

DEFAULT_SIGNATURES: tuple[Signature, ...] = (
    Signature.of(R=(1, 1)),
    Signature.of(R=(2, 0)),
    Signature.of(R=(1, 2)),
    Signature.of(R=(2, 1)),
)
NATS = (0, 1, 2)


def atoms(sig: Signature, max_wires: int = 2) -> list[Term]:
    """Constants and generators of both colours with at most ``max_wires`` per side."""
    out: list[Term] = [k(c) for c in (W, B) for k in CONSTANTS]
    out += [Gen(name, c) for name in sig.names for c in (W, B)]
    return [t for t in out if max(typecheck(t, sig)) <= max_wires]


def atom_bindings(per_schema: int = 48, seed: int = 0, max_wires: int = 2,
                  tries: int = 4000) -> BindingsGenerator:
    """Default bindings generator.

    Small binding spaces are enumerated in full; larger ones are sampled
    with a fixed seed until ``per_schema`` well-typed instances are found
    or ``tries`` draws have been spent.
    """

    def gen(schema: AxiomSchema, sig: Signature) -> Iterator[Mapping[str, Binding]]:
        universe = atoms(sig, max_wires)
        choices = []
        for name, kind in schema.free_metavariables:
            if kind == "term":
                choices.append(universe)
            elif kind == "nat":
                choices.append(list(NATS))
            else:
                choices.append(list(sig.names))
        names = [n for n, _ in schema.free_metavariables]
        space = 1
        for c in choices:
            space *= len(c)
        if space <= tries:
            combos: Iterable[tuple] = itertools.product(*choices)
        else:
            rng = random.Random(f"{seed}:{schema.id}:{sig.to_json()}")
            combos = (tuple(rng.choice(c) for c in choices) for _ in range(tries))
        found, seen = [], set()
        for combo in combos:
            if combo in seen:
                continue
            seen.add(combo)
            b = dict(zip(names, combo))
            try:
                instantiate(schema, b, sig)
            except (IllTyped, MissingBinding):
                continue
            found.append(b)
        if len(found) > per_schema:
            rng = random.Random(f"{seed}:pick:{schema.id}:{sig.to_json()}")
            found = rng.sample(found, per_schema)
        return iter(found)

    return gen


@dataclass
class Failure:
    instance: AxiomInstance
    interpretation: FiniteInterpretation
    direction: str  # "lhs<=rhs" or "rhs<=lhs"

    def describe(self) -> str:
        return (f"{self.instance.schema}: {self.instance.lhs} vs {self.instance.rhs} "
                f"fails {self.direction} at {self.interpretation.to_json()}")


@dataclass
class Report:
    schema: str
    instances: int = 0
    checks: int = 0  # (instance, interpretation) pairs
    failures: list[Failure] = field(default_factory=list)
    exhausted: bool = False

    @property
    def ok(self) -> bool:
        return not self.failures


class _Batches:
    """Evaluators over all interpretations, shared across schemas."""

    def __init__(self, sizes: Sequence[int], budget: int):
        self.sizes = tuple(sizes)
        self.budget = budget
        self.cache: dict[tuple, list[tuple[int, int, Evaluator]]] = {}

    def get(self, sig: Signature) -> tuple[list[tuple[int, int, Evaluator]], bool]:
        key = (sig, self.sizes, self.budget)
        if key not in self.cache:
            out, left = [], self.budget
            for size in self.sizes:
                n = min(count_interpretations(sig, size), left)
                if n <= 0:
                    break
                out.append((size, n, Evaluator(size, interpretation_batch(sig, size, 0, n))))
                left -= n
            self.cache[key] = out
        total = sum(count_interpretations(sig, s) for s in self.sizes)
        return self.cache[key], total > self.budget


def _failing(ok: np.ndarray, count: int) -> np.ndarray:
    return np.nonzero(~np.broadcast_to(ok, (count,)))[0]


def check_axiom_soundness(schema: AxiomSchema, bindings_generator: BindingsGenerator | None = None,
                          domain_sizes: Sequence[int] = (0, 1, 2), budget: int = 10_000,
                          signatures: Sequence[Signature] = DEFAULT_SIGNATURES,
                          _shared: _Batches | None = None) -> Report:
    """Evaluate every generated instance of ``schema`` on every interpretation.

    Inequations are checked as lhs ⊆ rhs, equations in both directions.
    ``budget`` bounds the interpretations per signature.
    """
    gen = bindings_generator or atom_bindings()
    shared = _shared or _Batches(domain_sizes, budget)
    report = Report(schema.id)
    for sig in signatures:
        evs, cut = shared.get(sig)
        report.exhausted |= cut
        for b in gen(schema, sig):
            inst = instantiate(schema, b, sig)
            report.instances += 1
            for size, count, ev in evs:
                lhs, rhs = ev(inst.lhs), ev(inst.rhs)
                report.checks += count
                dirs = [("lhs<=rhs", np.all(~lhs | rhs, axis=(-2, -1)))]
                if schema.side == "eq":
                    dirs.append(("rhs<=lhs", np.all(~rhs | lhs, axis=(-2, -1))))
                for label, ok in dirs:
                    for i in _failing(ok, count):
                        report.failures.append(
                            Failure(inst, decode_interpretation(sig, size, int(i)), label))
    return report


def soundness_sweep(schemas: Iterable[AxiomSchema] | None = None,
                    domain_sizes: Sequence[int] = (0, 1, 2), budget: int = 10_000,
                    bindings_generator: BindingsGenerator | None = None,
                    signatures: Sequence[Signature] = DEFAULT_SIGNATURES) -> list[Report]:
    shared = _Batches(domain_sizes, budget)
    gen = bindings_generator or atom_bindings()
    return [check_axiom_soundness(s, gen, domain_sizes, budget, signatures, shared)
            for s in (axiom_schemas() if schemas is None else schemas)]
