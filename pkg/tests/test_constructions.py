import random

import pytest
from hypothesis import given, settings, strategies as st

from relcalc.constructions import adjunction_derivation, deduction_transform
from relcalc.derived import linear_adjoint
from relcalc.errors import InvalidInput
from relcalc.generators import added_axiom, random_derivation
from relcalc.proofs import (
    Derivation, ProofBuilder, RewriteStep, TheoryStep, check_derivation, reflexivity,
)
from relcalc.semantics import enumerate_interpretations, semantic_leq
from relcalc.syntax import parse_term
from relcalc.terms import B, W, Gen, Id0, Id1, Seq, Signature, Tensor, ident, typecheck
from relcalc.theories import Theory

from strategies import typed_terms

SIG = Signature.of(R=(1, 1), S=(1, 1))
THY = Theory(SIG)


def p(text, sig=SIG):
    return parse_term(text, sig)


def axioms_used(d):
    return [s.axiom for s in d.steps if isinstance(s, RewriteStep)]


# ------------------------------------------------------------ adjunction


def test_adjunction_for_generator_is_one_step():
    tau, gamma = adjunction_derivation(Gen("R", W), THY)
    assert axioms_used(tau) == ["tau_R_plus"] and axioms_used(gamma) == ["gamma_R_plus"]
    assert (tau.start, tau.end) == (Id1(W), p("R+ ;- R-"))
    assert (gamma.start, gamma.end) == (p("R- ;+ R+"), Id1(B))


def test_adjunction_for_identity_uses_unit_steps():
    tau, gamma = adjunction_derivation(Id1(W), THY)
    assert check_derivation(THY, tau).ok and check_derivation(THY, gamma).ok
    assert all(a.startswith("seq_unit") for a in axioms_used(tau) + axioms_used(gamma))
    assert tau.end == Seq(B, Id1(W), Id1(B))


def test_adjunction_for_composite():
    c = Seq(W, Gen("R", W), Gen("S", W))
    tau, gamma = adjunction_derivation(c, THY)
    assert len(tau.steps) > 1 and len(gamma.steps) > 1
    assert check_derivation(THY, tau).ok and check_derivation(THY, gamma).ok
    assert tau.end == Seq(B, c, linear_adjoint(c))
    assert gamma.start == Seq(W, linear_adjoint(c), c)


@given(typed_terms(SIG, depth=3))
def test_adjunction_checks_for_random_terms(c):
    n, m = typecheck(c, SIG)
    tau, gamma = adjunction_derivation(c, THY)
    assert check_derivation(THY, tau).ok
    assert check_derivation(THY, gamma).ok
    assert (tau.start, tau.end) == (ident(W, n), Seq(B, c, linear_adjoint(c)))
    assert (gamma.start, gamma.end) == (Seq(W, linear_adjoint(c), c), ident(B, m))


# ------------------------------------------------------------- deduction


C0 = p("cd+ ;+ R+ ;+ dc+")  # ∃x y. R(x, y)
EXT = THY.extend((Id0(W), C0))


def _post(d, out, c=C0):
    n, _ = typecheck(d.start, SIG)
    assert check_derivation(THY, out).ok
    assert out.start == Tensor(W, c, ident(W, n))
    assert out.end == Seq(B, d.end, linear_adjoint(d.start))


def test_deduction_reflexivity_case():
    a = p("R+ ;+ S-")
    d = reflexivity(EXT, a)
    out = deduction_transform(THY, C0, d)
    _post(d, out)
    assert "discard_plus_nat" in axioms_used(out)


def test_deduction_axiom_case():
    d = Derivation(EXT, Id0(W), C0, (TheoryStep(0),))
    assert check_derivation(EXT, d).ok
    out = deduction_transform(THY, C0, d)
    _post(d, out)
    assert out.end == Seq(B, C0, Id0(B))


def test_deduction_transitive_case():
    pb = ProofBuilder(EXT, p("id+"))
    pb.rewrite("tau_R_plus", bind={"R": "R"})
    pb.back("tensor_unit_left_w")
    d = pb.build()
    assert len(d.steps) == 2
    out = deduction_transform(THY, C0, d)
    _post(d, out)
    assert "copier_plus_nat" in axioms_used(out)


def test_deduction_rejects_bad_input():
    bad = Derivation(EXT, p("id+"), p("R+"))
    with pytest.raises(InvalidInput):
        deduction_transform(THY, C0, bad)
    with pytest.raises(InvalidInput):
        deduction_transform(THY, p("R+"), reflexivity(EXT, p("id+")))


@settings(max_examples=15)
@given(st.integers(0, 100_000))
def test_deduction_on_random_derivations(seed):
    rng = random.Random(seed)
    sig = Signature.of(R=(1, 1), S=(0, 1))
    base = Theory(sig)
    c = added_axiom(sig, rng)
    ext = base.extend((Id0(W), c))
    d = random_derivation(ext, rng, steps=rng.randint(1, 4), min_axiom_uses=1)
    assert check_derivation(ext, d).ok
    out = deduction_transform(base, c, d)
    n, _ = typecheck(d.start, sig)
    assert check_derivation(base, out).ok
    assert out.start == Tensor(W, c, ident(W, n))
    assert out.end == Seq(B, d.end, linear_adjoint(d.start))
    for i in enumerate_interpretations(sig, [0, 1, 2], 300):
        assert semantic_leq(out.start, out.end, i)
