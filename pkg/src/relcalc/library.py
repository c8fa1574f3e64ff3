"""Ready-made terms, theories and proofs.

The ∃∀ ≤ ∀∃ proof is written out step by step with the builder; the
shipped JSON script in ``data/`` is this derivation serialised.
"""

from __future__ import annotations

import json
from importlib import resources

from .proofs import Derivation, ProofBuilder, derivation_from_json, derivation_to_json
from .syntax import parse_term
from .terms import Signature, Term
from .theories import Theory

EXISTS_FORALL_SIG = Signature.of(R=(2, 0))

# x ↦ ∀y. R(x, y)
_FORALL_Y = "(id- *- cd-) ;- R+"
EXISTS_FORALL = f"cd+ ;+ ({_FORALL_Y})"
FORALL_EXISTS = "cd- ;- ((cd+ *+ id+) ;+ R+)"


def exists_forall_terms() -> tuple[Term, Term]:
    sig = EXISTS_FORALL_SIG
    return parse_term(EXISTS_FORALL, sig), parse_term(FORALL_EXISTS, sig)


def exists_forall_derivation() -> Derivation:
    """∃x.∀y.R(x,y) ≤ ∀y.∃x.R(x,y) from the axioms alone."""
    thy = Theory(EXISTS_FORALL_SIG)
    start, end = exists_forall_terms()
    pb = ProofBuilder(thy, start)
    # wrap the whole term in a black quantifier over y
    pb.back("seq_unit_left_b", bind={"a": start})
    pb.rewrite("eps_discard_minus", ["SL"], bind={"n": 1})
    pb.back("seq_assoc_b")
    pb.back("seq_unit_left_w", ["SR"])
    pb.rewrite("eta_discard_plus", ["SR", "SL"])
    pb.back("seq_assoc_w", ["SR"])
    pb.rewrite("delta_l", ["SR", "SR"])
    pb.rewrite("gamma_discard_minus", ["SR", "SR", "SL"])
    pb.rewrite("seq_unit_left_b", ["SR", "SR"])
    # dc+ ;+ cd+ ;+ U  →  (cd+ *+ id+) ;+ (id+ *+ dc+) ;+ U
    p = ["SR"]
    pb.rewrite("seq_assoc_w", p)
    pb.back("tensor_unit_left_w", p + ["SL", "SL"])
    pb.back("tensor_unit_right_w", p + ["SL", "SR"])
    pb.rewrite("interchange_w", p + ["SL"])
    pb.rewrite("seq_unit_left_w", p + ["SL", "TL"])
    pb.rewrite("seq_unit_right_w", p + ["SL", "TR"])
    pb.back("seq_unit_right_w", p + ["SL", "TL"])
    pb.back("seq_unit_left_w", p + ["SL", "TR"])
    pb.back("interchange_w", p + ["SL"])
    pb.back("seq_assoc_w", p)
    # move the discarded variable into the inner universal quantifier
    q = ["SR", "SR"]
    pb.rewrite("delta_l", q)
    pb.rewrite("nu_minus_r", q + ["SL"])
    pb.rewrite("seq_unit_left_w", q + ["SL", "TL"])
    pb.rewrite("gamma_codiscard_minus", q + ["SL", "TR"])
    pb.rewrite("seq_unit_left_b", q)
    return pb.build(end)


def exists_forall_script() -> dict:
    return derivation_to_json(exists_forall_derivation(), "exists_forall.theory.json")


def load_exists_forall_script() -> Derivation:
    """The shipped JSON script, parsed."""
    data = json.loads(resources.files("relcalc").joinpath("data/exists_forall.proof.json").read_text())
    return derivation_from_json(data, Theory(EXISTS_FORALL_SIG))


# ------------------------------------------------------------- theories


def nonempty_sets_theory() -> Theory:
    """One axiom: some element exists."""
    return Theory(Signature(), ((parse_term("id0+"), parse_term("cd+ ;+ dc+")),))


def trivial_theory() -> Theory:
    """codiscard⁺ ≤ codiscard⁻: only the empty domain survives."""
    return Theory(Signature(), ((parse_term("cd+"), parse_term("cd-")),))


def contradictory_theory() -> Theory:
    return Theory(Signature(), ((parse_term("id0+"), parse_term("id0-")),))
