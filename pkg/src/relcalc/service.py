"""Request handlers shared by the command line and the HTTP service.

Each handler takes plain JSON-shaped data and returns a JSON-shaped dict
with a ``status`` field.  User errors surface as :class:`RelcalcError`;
the CLI turns them into exit code 1 and the HTTP app into status 400.
"""

from __future__ import annotations

from typing import Any, Mapping, Sequence

from pydantic import BaseModel, Field

from .axioms import axiom_schemas, get_schema
from .encoders import cr, fol, pfl, prop
from .errors import InvalidInput, RelcalcError
from .proofs import check_derivation, derivation_from_json
from .semantics import FiniteInterpretation, eval_term, search
from .soundness import soundness_sweep
from .syntax import parse_term
from .terms import Signature, typecheck
from .theories import Theory, classify

DEFAULT_BUDGET = 100_000

# status values, mapped to exit codes by the CLI
OK, FAILED, INCONCLUSIVE = "ok", "failed", "inconclusive"


def _sig(data: Mapping | None) -> Signature:
    try:
        return Signature.from_json(data or {})
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise InvalidInput(f"malformed signature: {e}") from None


def handle_typecheck(signature: Mapping | None, term: str) -> dict:
    sig = _sig(signature)
    t = parse_term(term, sig)
    n, m = typecheck(t, sig)
    return {"status": OK, "type": f"{n} -> {m}", "input": n, "output": m}


def handle_eval(signature: Mapping | None, interpretation: Mapping, term: str) -> dict:
    sig = _sig(signature) if signature else None
    interp = FiniteInterpretation.from_json(interpretation, sig)
    sig = sig or interp.signature
    t = parse_term(term, sig)
    n, m = typecheck(t, sig)
    return {"status": OK, "type": f"{n} -> {m}", "relation": eval_term(t, interp).to_json()}


def handle_check(theory: Mapping | None, proof: Mapping) -> dict:
    thy = Theory.from_json(theory or {})
    d = derivation_from_json(proof, thy)
    res = check_derivation(thy, d)
    out: dict[str, Any] = {"status": OK if res.ok else FAILED, "steps": len(d.steps),
                           "start": str(d.start), "end": str(d.end)}
    if not res.ok:
        out["failed_step"] = res.failed_step
        out["error"] = str(res.error)
    return out


def handle_soundness(sizes: Sequence[int], budget: int, schemas: Sequence[str] | None = None) -> dict:
    chosen = [get_schema(s) for s in schemas] if schemas else axiom_schemas()
    reports = soundness_sweep(chosen, sizes, budget)
    rows = [{"schema": r.schema, "instances": r.instances, "checks": r.checks,
             "failures": len(r.failures), "exhausted": r.exhausted,
             "first_failure": r.failures[0].describe() if r.failures else None}
            for r in reports]
    failed = any(r.failures for r in reports)
    cut = any(r.exhausted for r in reports)
    status = FAILED if failed else INCONCLUSIVE if cut else OK
    return {"status": status, "schemas": len(rows), "reports": rows,
            "instances": sum(r.instances for r in reports),
            "checks": sum(r.checks for r in reports),
            "failures": sum(len(r.failures) for r in reports)}


ENCODERS = ("cr", "fol", "pfl", "prop")


def handle_encode(source: str, text: str, context: int = 0, signature: Mapping | None = None) -> dict:
    if source == "cr":
        e = cr.parse_cr(text)
        sig = _sig(signature) if signature else cr.cr_signature(e)
        t = cr.encode_cr(e, sig)
        axioms: list = []
    elif source == "fol":
        f = fol.parse_fol(text)
        enc = fol.encode_fol(f, context, _sig(signature) if signature else None)
        t, sig = enc.term, enc.signature
        axioms = [{"lhs": str(l), "rhs": str(r)} for l, r in enc.axioms]
    elif source == "pfl":
        if not signature:
            raise InvalidInput("PFL encoding needs a signature giving each predicate's arity")
        sig = _sig(signature)
        t, _ = pfl.encode_pfl(pfl.parse_pfl(text), sig)
        axioms = []
    elif source == "prop":
        f = prop.parse_prop(text)
        sig = _sig(signature) if signature else prop.prop_signature(f)
        t = prop.encode_prop(f)
        axioms = []
    else:
        raise InvalidInput(f"unknown source language {source!r}; choose from {', '.join(ENCODERS)}")
    n, m = typecheck(t, sig)
    return {"status": OK, "term": str(t), "type": f"{n} -> {m}",
            "signature": sig.to_json(), "axioms": axioms}


def handle_search(signature: Mapping | None, lhs: str, rhs: str, sizes: Sequence[int],
                  budget: int) -> dict:
    sig = _sig(signature)
    c, d = parse_term(lhs, sig), parse_term(rhs, sig)
    out = search(c, d, sig, list(sizes), budget)
    if out.countermodel is not None:
        return {"status": OK, "result": "countermodel", "checked": out.checked,
                "countermodel": out.countermodel.to_json()}
    return {"status": INCONCLUSIVE if out.exhausted else OK, "result": "inconclusive",
            "checked": out.checked, "exhausted": out.exhausted, "sizes": list(sizes)}


def handle_classify(theory: Mapping, sizes: Sequence[int], budget: int) -> dict:
    thy = Theory.from_json(theory)
    res = classify(thy, list(sizes), budget)
    status = INCONCLUSIVE if res.exhausted and res.label != "ModelNonEmpty" else OK
    return {"status": status, "label": res.label, "description": res.describe(),
            "checked": res.checked, "exhausted": res.exhausted, "sizes": list(res.sizes),
            "model": res.model.to_json() if res.model is not None else None}


# ------------------------------------------------------------------ HTTP


class TypecheckIn(BaseModel):
    signature: dict = Field(default_factory=dict)
    term: str


class EvalIn(BaseModel):
    signature: dict | None = None
    interpretation: dict
    term: str


class CheckIn(BaseModel):
    theory: dict = Field(default_factory=dict)
    proof: dict


class SoundnessIn(BaseModel):
    sizes: list[int] = [0, 1, 2]
    budget: int = DEFAULT_BUDGET
    schemas: list[str] | None = None


class EncodeIn(BaseModel):
    source: str
    text: str
    context: int = 0
    signature: dict | None = None


class SearchIn(BaseModel):
    signature: dict = Field(default_factory=dict)
    lhs: str
    rhs: str
    sizes: list[int] = [0, 1, 2]
    budget: int = DEFAULT_BUDGET


class ClassifyIn(BaseModel):
    theory: dict
    sizes: list[int] = [0, 1, 2]
    budget: int = DEFAULT_BUDGET


def create_app():
    """The FastAPI application; every route calls one handler above."""
    from fastapi import FastAPI, HTTPException

    app = FastAPI(title="relcalc")

    def guard(fn, *args):
        try:
            return fn(*args)
        except RelcalcError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None

    @app.post("/typecheck")
    def typecheck_route(req: TypecheckIn):
        return guard(handle_typecheck, req.signature, req.term)

    @app.post("/eval")
    def eval_route(req: EvalIn):
        return guard(handle_eval, req.signature, req.interpretation, req.term)

    @app.post("/check")
    def check_route(req: CheckIn):
        return guard(handle_check, req.theory, req.proof)

    @app.post("/soundness")
    def soundness_route(req: SoundnessIn):
        return guard(handle_soundness, req.sizes, req.budget, req.schemas)

    @app.post("/encode")
    def encode_route(req: EncodeIn):
        return guard(handle_encode, req.source, req.text, req.context, req.signature)

    @app.post("/search")
    def search_route(req: SearchIn):
        return guard(handle_search, req.signature, req.lhs, req.rhs, req.sizes, req.budget)

    @app.post("/classify")
    def classify_route(req: ClassifyIn):
        return guard(handle_classify, req.theory, req.sizes, req.budget)

    return app
