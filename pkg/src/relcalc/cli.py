"""Command-line front end.

Exit codes: 0 success, 1 user or input error, 2 check failure (a proof
step or a soundness check failed), 3 inconclusive because the budget
ran out.  ``--json`` switches every command to machine-readable output.
The default budget comes from ``RELCALC_BUDGET`` when set.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import service
from .errors import InvalidInput, RelcalcError

EXIT_OK, EXIT_USER, EXIT_FAILED, EXIT_INCONCLUSIVE = 0, 1, 2, 3
_EXIT = {service.OK: EXIT_OK, service.FAILED: EXIT_FAILED,
         service.INCONCLUSIVE: EXIT_INCONCLUSIVE}

GRAMMARS = """\b
Term syntax (+ is white, - is black):
  R+ R-            generator R in either colour
  id0+ id+ sw+ cp+ dc+ cc+ cd+   constants (id0- id- ... in black)
  c ;+ d   c ;- d  sequential composition (binds tighter)
  c *+ d   c *- d  monoidal product
  cp+[3] sw-[1,2]  n-ary shorthand
\b
Encoder sources:
  cr    R ;+ S  R ;- S  R & S  R | S  ~R  ^R  id+ id- top bot
  fol   exists x2. P(x1,x2) /\\ !(x1 = f(x2)) \\/ forall x3. top
  pfl   p A  P A  [A  ]A  A & B  !A  I
  prop  A /\\ !B \\/ top
"""


def _default_budget() -> int:
    raw = os.environ.get("RELCALC_BUDGET")
    if raw is None:
        return service.DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(f"RELCALC_BUDGET must be an integer, got {raw!r}") from None


def _sizes(ctx, param, value: str) -> list[int]:
    try:
        out = [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("expected a comma-separated list such as 0,1,2") from None
    if any(v < 0 for v in out):
        raise click.BadParameter("domain sizes are non-negative")
    return out


def _read_json(source: str | None):
    """A JSON document from a file path, or inline when it starts with '{'."""
    if source is None:
        return None
    text = source if source.lstrip().startswith("{") else None
    if text is None:
        try:
            text = Path(source).read_text()
        except OSError as e:
            raise InvalidInput(f"cannot read {source}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{source}: {e}") from None


sizes_option = click.option("--sizes", default="0,1,2", callback=_sizes, show_default=True,
                            help="Comma-separated domain sizes.")
budget_option = click.option("--budget", type=int, default=None,
                             help="Maximum interpretations to enumerate (default RELCALC_BUDGET or 100000).")
sig_option = click.option("--sig", "sig", default=None, help="Signature JSON file (or inline JSON).")


def _run(ctx: click.Context, fn, *args, human=None):
    as_json = ctx.obj.get("json", False)
    try:
        out = fn(*args)
    except RelcalcError as e:
        if as_json:
            click.echo(json.dumps({"status": "error", "error": str(e),
                                   "kind": type(e).__name__}))
        else:
            click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_USER)
    if as_json:
        click.echo(json.dumps(out, sort_keys=True))
    else:
        click.echo(human(out))
    ctx.exit(_EXIT[out["status"]])


class _Group(click.Group):
    """Reports click usage errors with exit code 1; 2 is reserved for check failures."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as e:
            e.exit_code = EXIT_USER
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USER
            raise


@click.group(cls=_Group, epilog=GRAMMARS)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx: click.Context, as_json: bool) -> None:
    """Typed two-coloured relational diagrams: check, evaluate, encode."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json


def _json_flag(f):
    # --json is accepted both before and after the subcommand name
    def cb(ctx, param, value):
        if value:
            ctx.find_root().obj["json"] = True
    return click.option("--json", "_json", is_flag=True, expose_value=False, callback=cb,
                        help="Machine-readable output.")(f)


@main.command()
@click.argument("term")
@sig_option
@_json_flag
@click.pass_context
def typecheck(ctx, term, sig):
    """Print the type n -> m of TERM."""
    _run(ctx, lambda: service.handle_typecheck(_read_json(sig), term),
         human=lambda o: o["type"])


@main.command("eval")
@click.argument("term")
@click.option("--interp", required=True, help="Interpretation JSON file (or inline JSON).")
@sig_option
@_json_flag
@click.pass_context
def eval_cmd(ctx, term, interp, sig):
    """Print the relation TERM denotes, as sorted JSON pairs."""
    _run(ctx, lambda: service.handle_eval(_read_json(sig), _read_json(interp), term),
         human=lambda o: json.dumps(o["relation"]))


def _proof_and_theory(proof: str, theory: str | None):
    obj = _read_json(proof)
    if not isinstance(obj, dict):
        raise InvalidInput("a proof script is a JSON object")
    if theory is not None:
        return obj, _read_json(theory)
    ref = obj.get("theory")
    if isinstance(ref, dict):
        return obj, ref
    if isinstance(ref, str):
        base = Path(proof).parent if not proof.lstrip().startswith("{") else Path.cwd()
        return obj, _read_json(str(base / ref))
    return obj, None


@main.command()
@click.option("--proof", required=True, help="Proof script JSON file.")
@click.option("--theory", default=None,
              help="Theory JSON file; defaults to the script's own theory reference.")
@_json_flag
@click.pass_context
def check(ctx, proof, theory):
    """Replay a proof script; exit 2 at the first failing step."""
    def run():
        obj, thy = _proof_and_theory(proof, theory)
        return service.handle_check(thy, obj)

    def human(o):
        if o["status"] == service.OK:
            return f"OK: {o['steps']} steps, {o['start']}  <=  {o['end']}"
        return f"FAILED at step {o['failed_step']}: {o['error']}"
    _run(ctx, run, human=human)


@main.command()
@sizes_option
@budget_option
@click.option("--schema", "schemas", multiple=True, help="Restrict to these schema ids.")
@_json_flag
@click.pass_context
def soundness(ctx, sizes, budget, schemas):
    """Check every axiom schema semantically on small interpretations."""
    budget = _default_budget() if budget is None else budget

    def human(o):
        width = max([len(r["schema"]) for r in o["reports"]] + [6])
        lines = [f"{'schema':<{width}}  instances    checks  failures"]
        for r in o["reports"]:
            flag = "  (budget cut)" if r["exhausted"] else ""
            lines.append(f"{r['schema']:<{width}}  {r['instances']:>9}  {r['checks']:>8}"
                         f"  {r['failures']:>8}{flag}")
            if r["first_failure"]:
                lines.append(f"  first failure: {r['first_failure']}")
        lines.append(f"{o['schemas']} schemas, {o['instances']} instances, "
                     f"{o['checks']} checks, {o['failures']} failures")
        return "\n".join(lines)
    _run(ctx, lambda: service.handle_soundness(sizes, budget, list(schemas) or None), human=human)


@main.command()
@click.argument("source", type=click.Choice(service.ENCODERS))
@click.argument("text")
@click.option("--context", "-n", type=int, default=0, show_default=True,
              help="FOL only: number of free variables x1..xn in the context.")
@sig_option
@_json_flag
@click.pass_context
def encode(ctx, source, text, context, sig):
    """Translate TEXT from SOURCE into a diagram term.

    PFL needs --sig declaring each predicate as NAME: {ar: n, coar: 0}.
    """
    def human(o):
        lines = [o["term"], f"  : {o['type']}"]
        for a in o["axioms"]:
            lines.append(f"  assuming {a['lhs']}  <=  {a['rhs']}")
        return "\n".join(lines)
    _run(ctx, lambda: service.handle_encode(source, text, context, _read_json(sig)), human=human)


@main.command()
@click.argument("lhs")
@click.argument("rhs")
@sig_option
@sizes_option
@budget_option
@_json_flag
@click.pass_context
def search(ctx, lhs, rhs, sig, sizes, budget):
    """Look for an interpretation where LHS is not contained in RHS."""
    budget = _default_budget() if budget is None else budget

    def human(o):
        if o["result"] == "countermodel":
            return f"countermodel: {json.dumps(o['countermodel'])}"
        cut = "budget exhausted" if o["exhausted"] else "search complete"
        return f"inconclusive: no countermodel among {o['checked']} interpretations ({cut})"
    _run(ctx, lambda: service.handle_search(_read_json(sig), lhs, rhs, sizes, budget), human=human)


@main.command()
@click.option("--theory", required=True, help="Theory JSON file (or inline JSON).")
@sizes_option
@budget_option
@_json_flag
@click.pass_context
def classify(ctx, theory, sizes, budget):
    """Report whether a theory has non-empty, only empty, or no small models."""
    budget = _default_budget() if budget is None else budget

    def human(o):
        out = o["description"]
        if o["model"] is not None:
            out += f"\nmodel: {json.dumps(o['model'])}"
        return out
    _run(ctx, lambda: service.handle_classify(_read_json(theory), sizes, budget), human=human)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service (needs the 'serve' extra)."""
    try:
        import uvicorn
    except ImportError:
        click.echo("error: uvicorn is not installed; pip install 'artifact[serve]'", err=True)
        sys.exit(EXIT_USER)
    uvicorn.run(service.create_app(), host=host, port=port)


if __name__ == "__main__":  # pragma: no cover
    main()
