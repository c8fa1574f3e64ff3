"""Derivations and their checker.

A derivation is a start term and a list of steps.  Each step rewrites one
subterm, found by a path of SL/SR/TL/TR moves:

* ``RewriteStep``: replace an instance of an axiom side by the other side.
  Inequational axioms go left to right only; equations go either way.
* ``AssocStep``: replace a subterm by any term with the same
  associativity/unit normal form (by default, the normal form itself).
* ``TheoryStep``: replace the left side of a theory axiom by its right side.

Every context is covariant, so a chain of such steps proves start ≤ end.
Steps are numbered from 1 in diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Any, Iterable, Mapping, Sequence, Union

from .axioms import AxiomInstance, Binding, get_schema, instantiate, match_side
from .errors import (
    IllTyped, InvalidInput, MissingBinding, ParseError, RelcalcError, StepMismatch,
    TypeDrift, TypeMismatch, UnknownSymbol,
)
from .syntax import parse_term
from .terms import (
    Dir, Path, Signature, Term, as_path, assoc_normalize, replace_at, subterm_at, typecheck,
)
from .theories import Theory


@dataclass(frozen=True)
class RewriteStep:
    axiom: str
    path: Path = ()
    bind: Mapping[str, Binding] | None = None
    direction: str = "fwd"  # "fwd" or "bwd"


@dataclass(frozen=True)
class AssocStep:
    path: Path = ()
    to: Term | None = None


@dataclass(frozen=True)
class TheoryStep:
    index: int
    path: Path = ()


Step = Union[RewriteStep, AssocStep, TheoryStep]


@dataclass(frozen=True)
class Derivation:
    theory: Theory
    start: Term
    end: Term
    steps: tuple[Step, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class StepRecord:
    """A verified step with its endpoints."""

    index: int
    step: Step
    before: Term
    after: Term
    instance: AxiomInstance | None = None


@dataclass
class CheckResult:
    ok: bool
    records: list[StepRecord] = field(default_factory=list)
    error: RelcalcError | None = None

    @property
    def failed_step(self) -> int | None:
        return getattr(self.error, "index", None)

    def raise_for_error(self) -> None:
        if self.error is not None:
            raise self.error

    def __bool__(self) -> bool:
        return self.ok


# ------------------------------------------------------------------ kernel


def resolve_instance(step: RewriteStep, redex: Term, sig: Signature) -> AxiomInstance:
    """The axiom instance a rewrite step refers to, given the redex it sits on."""
    schema = get_schema(step.axiom)
    if step.direction not in ("fwd", "bwd"):
        raise InvalidInput(f"unknown direction {step.direction!r}")
    if step.direction == "bwd" and schema.side != "eq":
        raise StepMismatch(0, f"{schema.id} is an inequation and cannot be used backwards")
    side = "lhs" if step.direction == "fwd" else "rhs"
    found = match_side(schema, side, redex, sig, step.bind)
    if not found:
        target = "left" if side == "lhs" else "right"
        raise StepMismatch(0, f"subterm is not an instance of the {target} side of {schema.id}")
    if len({(i.lhs, i.rhs) for i in found}) > 1:
        raise StepMismatch(0, f"ambiguous use of {schema.id}; give explicit bindings")
    return found[0]


def apply_step(step: Step, term: Term, thy: Theory) -> tuple[Term, AxiomInstance | None]:
    """One step of rewriting; raises StepMismatch with index 0 on failure."""
    sig = thy.signature
    try:
        redex = subterm_at(term, step.path)
    except KeyError as e:
        raise StepMismatch(0, f"invalid path: {e.args[0]}") from None
    if isinstance(step, RewriteStep):
        try:
            inst = resolve_instance(step, redex, sig)
        except (MissingBinding, IllTyped, UnknownSymbol) as e:
            raise StepMismatch(0, str(e)) from None
        new = inst.rhs if step.direction == "fwd" else inst.lhs
        return replace_at(term, step.path, new), inst
    if isinstance(step, AssocStep):
        target = assoc_normalize(redex) if step.to is None else step.to
        if step.to is not None and assoc_normalize(step.to) != assoc_normalize(redex):
            raise StepMismatch(0, "target is not associativity/unit equivalent to the subterm")
        return replace_at(term, step.path, target), None
    if isinstance(step, TheoryStep):
        if not 0 <= step.index < len(thy.axioms):
            raise StepMismatch(0, f"theory has no axiom {step.index}")
        lhs, rhs = thy.axioms[step.index]
        if redex != lhs:
            raise StepMismatch(0, f"subterm is not the left side of theory axiom {step.index}")
        return replace_at(term, step.path, rhs), None
    raise InvalidInput(f"unknown step {step!r}")


def check_derivation(thy: Theory, d: Derivation) -> CheckResult:
    """Verify every step of ``d`` in ``thy``; the first failure is reported."""
    sig = thy.signature
    records: list[StepRecord] = []
    try:
        t0 = typecheck(d.start, sig)
        t1 = typecheck(d.end, sig)
    except (TypeMismatch, UnknownSymbol) as e:
        return CheckResult(False, records, StepMismatch(0, f"endpoint does not typecheck: {e}"))
    if t0 != t1:
        return CheckResult(False, records, TypeDrift(0, t0, t1))
    cur = d.start
    for i, step in enumerate(d.steps, start=1):
        try:
            new, inst = apply_step(step, cur, thy)
        except StepMismatch as e:
            return CheckResult(False, records, StepMismatch(i, e.reason))
        except RelcalcError as e:
            return CheckResult(False, records, StepMismatch(i, str(e)))
        try:
            tn = typecheck(new, sig)
        except (TypeMismatch, UnknownSymbol) as e:
            return CheckResult(False, records, StepMismatch(i, f"result does not typecheck: {e}"))
        if tn != t0:
            return CheckResult(False, records, TypeDrift(i, t0, tn))
        records.append(StepRecord(i, step, cur, new, inst))
        cur = new
    if cur != d.end:
        return CheckResult(False, records,
                           StepMismatch(len(d.steps) + 1 if d.steps else 0,
                                        "final term differs from the stated end"))
    return CheckResult(True, records)


def replay(thy: Theory, start: Term, steps: Iterable[Step]) -> Term:
    """The term reached from ``start``; used when building scripts."""
    cur = start
    for i, step in enumerate(steps, start=1):
        try:
            cur, _ = apply_step(step, cur, thy)
        except StepMismatch as e:
            raise StepMismatch(i, e.reason) from None
    return cur


# ----------------------------------------------------------------- builder


class ProofBuilder:
    """Builds a derivation step by step, resolving bindings eagerly.

    Every rewrite is recorded with the full bindings it used, so the
    resulting script checks without any matching guesswork.
    """

    def __init__(self, thy: Theory, start: Term):
        self.thy = thy
        self.start = start
        self.current = start
        self.steps: list[Step] = []

    def _push(self, step: Step) -> "ProofBuilder":
        try:
            new, inst = apply_step(step, self.current, self.thy)
        except StepMismatch as e:
            raise StepMismatch(len(self.steps) + 1, e.reason) from None
        if isinstance(step, RewriteStep) and inst is not None:
            step = RewriteStep(step.axiom, step.path, dict(inst.bindings), step.direction)
        self.steps.append(step)
        self.current = new
        return self

    def rewrite(self, axiom: str, path: Sequence = (), bind: Mapping[str, Binding] | None = None,
                direction: str = "fwd") -> "ProofBuilder":
        return self._push(RewriteStep(axiom, as_path(path), bind, direction))

    def back(self, axiom: str, path: Sequence = (), bind: Mapping[str, Binding] | None = None
             ) -> "ProofBuilder":
        return self.rewrite(axiom, path, bind, "bwd")

    def assoc(self, path: Sequence = (), to: Term | None = None) -> "ProofBuilder":
        return self._push(AssocStep(as_path(path), to))

    def thy_axiom(self, index: int, path: Sequence = ()) -> "ProofBuilder":
        return self._push(TheoryStep(index, as_path(path)))

    def embed(self, d: Derivation, path: Sequence = ()) -> "ProofBuilder":
        """Replay ``d`` inside the subterm at ``path``."""
        p = as_path(path)
        here = subterm_at(self.current, p)
        if here != d.start:
            raise StepMismatch(len(self.steps) + 1, "embedded derivation starts elsewhere")
        for s in d.steps:
            self.steps.append(_prefixed(s, p))
        self.current = replace_at(self.current, p, d.end)
        return self

    def build(self, end: Term | None = None) -> Derivation:
        if end is not None and end != self.current:
            raise StepMismatch(len(self.steps) + 1, "builder did not reach the requested end")
        return Derivation(self.thy, self.start, self.current, tuple(self.steps))


def _prefixed(s: Step, p: Path) -> Step:
    if isinstance(s, RewriteStep):
        return RewriteStep(s.axiom, p + s.path, s.bind, s.direction)
    if isinstance(s, AssocStep):
        return AssocStep(p + s.path, s.to)
    return TheoryStep(s.index, p + s.path)


def reflexivity(thy: Theory, t: Term) -> Derivation:
    return Derivation(thy, t, t, ())


def compose(d1: Derivation, d2: Derivation) -> Derivation:
    if d1.end != d2.start:
        raise InvalidInput("derivations do not chain")
    return Derivation(d1.theory, d1.start, d2.end, d1.steps + d2.steps)


def with_theory(d: Derivation, thy: Theory) -> Derivation:
    return Derivation(thy, d.start, d.end, d.steps)


# ----------------------------------------------------------------- scripts


def _bind_to_json(v: Binding) -> Any:
    return str(v) if isinstance(v, Term) else v


def step_to_json(s: Step) -> dict:
    if isinstance(s, RewriteStep):
        out: dict[str, Any] = {"path": [d.value for d in s.path], "axiom": s.axiom}
        if s.bind:
            out["bind"] = {k: _bind_to_json(v) for k, v in sorted(s.bind.items())}
        out["dir"] = s.direction
        return out
    if isinstance(s, AssocStep):
        out = {"assoc": True}
        if s.path:
            out["path"] = [d.value for d in s.path]
        if s.to is not None:
            out["to"] = str(s.to)
        return out
    return {"thyAxiom": s.index, "path": [d.value for d in s.path]}


def _bind_from_json(name: str, v: Any, schema_id: str, sig: Signature) -> Binding:
    kind = get_schema(schema_id).kind_of(name)
    if kind == "term":
        if not isinstance(v, str):
            raise InvalidInput(f"binding {name} must be a term string")
        return parse_term(v, sig)
    if kind == "nat":
        if not isinstance(v, int) or isinstance(v, bool):
            raise InvalidInput(f"binding {name} must be an integer")
        return v
    if not isinstance(v, str):
        raise InvalidInput(f"binding {name} must be a symbol name")
    return v


def step_from_json(obj: Mapping, sig: Signature) -> Step:
    if not isinstance(obj, Mapping):
        raise InvalidInput(f"step must be an object, found {obj!r}")
    try:
        path = as_path(obj.get("path", []))
    except ValueError as e:
        raise InvalidInput(f"bad path: {e}") from None
    if obj.get("assoc"):
        to = obj.get("to")
        return AssocStep(path, parse_term(to, sig) if to is not None else None)
    if "thyAxiom" in obj:
        return TheoryStep(int(obj["thyAxiom"]), path)
    if "axiom" in obj:
        name = obj["axiom"]
        try:
            get_schema(name)
        except RelcalcError as e:
            raise InvalidInput(str(e)) from None
        bind = obj.get("bind")
        parsed = None
        if bind is not None:
            try:
                parsed = {k: _bind_from_json(k, v, name, sig) for k, v in bind.items()}
            except KeyError as e:
                raise InvalidInput(f"{name} has no metavariable {e.args[0]!r}") from None
        return RewriteStep(name, path, parsed, obj.get("dir", "fwd"))
    raise InvalidInput(f"unrecognised step {dict(obj)!r}")


def derivation_to_json(d: Derivation, theory_ref: str | None = None) -> dict:
    out: dict[str, Any] = {}
    if theory_ref is not None:
        out["theory"] = theory_ref
    out["start"] = str(d.start)
    out["end"] = str(d.end)
    out["steps"] = [step_to_json(s) for s in d.steps]
    return out


def derivation_from_json(obj: Mapping, thy: Theory) -> Derivation:
    sig = thy.signature
    try:
        start = parse_term(obj["start"], sig)
        end = parse_term(obj["end"], sig)
        steps = tuple(step_from_json(s, sig) for s in obj.get("steps", []))
    except KeyError as e:
        raise InvalidInput(f"proof script lacks {e.args[0]!r}") from None
    return Derivation(thy, start, end, steps)


def load_theory_file(path: str | FsPath) -> Theory:
    with open(path) as fh:
        try:
            return Theory.from_json(json.load(fh))
        except json.JSONDecodeError as e:
            raise InvalidInput(f"{path}: {e}") from None


def load_proof_file(path: str | FsPath, thy: Theory | None = None) -> Derivation:
    """Read a proof script; its ``theory`` entry is resolved relative to the file."""
    path = FsPath(path)
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise InvalidInput(f"{path}: {e}") from None
    if thy is None:
        ref = obj.get("theory")
        if ref is None:
            thy = Theory(Signature())
        else:
            thy = load_theory_file(path.parent / ref)
    return derivation_from_json(obj, thy)
