import itertools

import pytest
from hypothesis import given, strategies as st

from relcalc.errors import BadCoarity, BadType, IllTyped, InvalidInput
from relcalc.library import contradictory_theory, nonempty_sets_theory, trivial_theory
from relcalc.semantics import (
    FiniteInterpretation, Relation, enumerate_interpretations, eval_term,
)
from relcalc.syntax import parse_term
from relcalc.terms import B, W, Discard, Gen, Id0, Id1, Seq, Signature, Tensor, typecheck, sugar
from relcalc.theories import (
    MODEL_EMPTY_ONLY, MODEL_NON_EMPTY, NO_MODEL, Theory, classify, close_theory,
    closed_form, empty_theory, erase_constant, function_axioms, models, satisfies,
    witness_axioms, witness_diagram,
)

from strategies import typed_terms

R11 = Signature.of(R=(1, 1))


def p(text, sig=None):
    return parse_term(text, sig)


def interps(sig, sizes=(0, 1, 2), budget=100_000):
    return list(enumerate_interpretations(sig, sizes, budget))


# --------------------------------------------------------------- theories


def test_theory_rejects_mismatched_axiom():
    with pytest.raises(IllTyped):
        Theory(R11, ((p("R+", R11), p("cp+")),))


def test_theory_json_roundtrip():
    thy = Theory(R11, ((p("id+"), p("R+", R11)),))
    assert Theory.from_json(thy.to_json()) == thy
    with pytest.raises(InvalidInput):
        Theory.from_json({"axioms": [{"lhs": "id+"}]})


# ---------------------------------------------------------------- closure


def test_close_example():
    thy = Theory(R11, ((Id1(W), Gen("R", W)),))
    closed = close_theory(thy)
    (lhs, rhs), = closed.axioms
    assert lhs == Id0(W)
    assert rhs == closed_form(Id1(W), Gen("R", W), R11)
    assert tuple(typecheck(rhs, R11)) == (0, 0)


def test_close_empty():
    assert close_theory(empty_theory(R11)).axioms == ()


def test_closed_form_semantics_on_reflexivity_axiom():
    thy = Theory(R11, ((Id1(W), Gen("R", W)),))
    closed = close_theory(thy)
    for i in interps(R11):
        reflexive = all(((x,), (x,)) in i.rho["R"] for x in range(i.size))
        assert satisfies(thy, i) == satisfies(closed, i) == reflexive


SIG_CLOSE = Signature.of(R=(1, 1), S=(1, 1))


@given(typed_terms(SIG_CLOSE, depth=2, max_wires=2), st.data())
def test_close_theory_preserves_models(c, data):
    n, m = typecheck(c, SIG_CLOSE)
    d = data.draw(typed_terms(SIG_CLOSE, n, m, depth=2))
    thy = Theory(SIG_CLOSE, ((c, d),))
    closed = close_theory(thy)
    assert all(l == Id0(W) for l, _ in closed.axioms)
    for i in interps(SIG_CLOSE, (0, 1)) + interps(SIG_CLOSE, (2,))[::7]:
        assert satisfies(thy, i) == satisfies(closed, i)


# -------------------------------------------------------------- functions


def test_function_axioms_binary():
    sig = Signature.of(f=(2, 1))
    f = Gen("f", W)
    assert function_axioms("f", sig) == [
        (Seq(W, sugar("copier", W, 2), Tensor(W, f, f)), Seq(W, f, sugar("copier", W, 1))),
        (sugar("discard", W, 2), Seq(W, f, Discard(W))),
    ]


def test_function_axioms_constant():
    sig = Signature.of(k=(0, 1))
    k = Gen("k", W)
    assert function_axioms("k", sig) == [
        (Tensor(W, k, k), Seq(W, k, sugar("copier", W, 1))),
        (Id0(W), Seq(W, k, Discard(W))),
    ]


def test_function_axioms_bad_coarity():
    with pytest.raises(BadCoarity):
        function_axioms("R", Signature.of(R=(1, 2)))


def _is_function(rel: Relation, size: int) -> bool:
    for x in itertools.product(range(size), repeat=rel.n):
        if len([y for (a, y) in rel.pairs if a == x]) != 1:
            return False
    return True


@pytest.mark.parametrize("shape", [(0, 1), (1, 1), (2, 1)])
def test_function_axioms_characterise_total_functions(shape):
    sig = Signature.of(f=shape)
    thy = Theory(sig, tuple(function_axioms("f", sig)))
    seen = set()
    for i in interps(sig):
        ok = _is_function(i.rho["f"], i.size)
        assert satisfies(thy, i) == ok
        seen.add(ok)
    assert seen == {True, False}


# ---------------------------------------------------------------- witness


def test_witness_axioms_shape():
    sig = Signature.of(k=(0, 1), R=(1, 0))
    axs = witness_axioms("k", Gen("R", W), sig)
    assert axs[:2] == function_axioms("k", sig)
    assert axs[2] == (Id0(W), witness_diagram("k", Gen("R", W)))


def test_witness_with_discard_holds_for_every_constant():
    sig = Signature.of(k=(0, 1))
    thy = Theory(sig, tuple(witness_axioms("k", Discard(W), sig)))
    fn = Theory(sig, tuple(function_axioms("k", sig)))
    for i in interps(sig):
        assert satisfies(thy, i) == satisfies(fn, i)


def test_witness_semantics():
    sig = Signature.of(k=(0, 1), R=(1, 0))
    pair = Theory(sig, (witness_axioms("k", Gen("R", W), sig)[2],))
    checked = 0
    for i in interps(sig, (1, 2)):
        if not _is_function(i.rho["k"], i.size):
            continue
        (_, (w,)), = i.rho["k"].pairs
        some = any(((x,), ()) in i.rho["R"] for x in range(i.size))
        assert satisfies(pair, i) == ((not some) or ((w,), ()) in i.rho["R"])
        checked += 1
    assert checked == 2 + 8


def test_witness_bad_types():
    sig = Signature.of(k=(0, 1), R=(1, 1), j=(1, 1))
    with pytest.raises(BadType):
        witness_axioms("k", Gen("R", W), sig)
    with pytest.raises(BadType):
        witness_axioms("j", Discard(W), sig)


# ------------------------------------------------------- constant erasure


SIG_K = Signature.of(k=(0, 1), R=(1, 1))


def test_phi_on_the_constant():
    assert erase_constant(Gen("k", W), "k", SIG_K) == Id1(W)


def test_phi_on_other_generators():
    assert erase_constant(Gen("R", W), "k", SIG_K) == Tensor(W, Discard(W), Gen("R", W))


@given(typed_terms(SIG_K, depth=3))
def test_phi_typing(t):
    n, m = typecheck(t, SIG_K)
    assert tuple(typecheck(erase_constant(t, "k", SIG_K), SIG_K)) == (1 + n, m)


@given(typed_terms(R11, depth=3))
def test_phi_characterisation_on_constant_free_terms(c):
    n, _ = typecheck(c, R11)
    lhs = erase_constant(c, "k", R11)
    rhs = Seq(W, Tensor(W, Discard(W), sugar("id", W, n)), c)
    for i in interps(R11):
        assert eval_term(lhs, i) == eval_term(rhs, i)


@given(typed_terms(SIG_K, depth=3))
def test_phi_replaces_constant_by_input_wire(t):
    phi = erase_constant(t, "k", SIG_K)
    for i in interps(R11, (1, 2)):
        erased = eval_term(phi, i).pairs
        for x0 in range(i.size):
            rho = dict(i.rho)
            rho["k"] = Relation(0, 1, frozenset({((), (x0,))}))
            direct = eval_term(t, FiniteInterpretation(i.size, rho)).pairs
            assert direct == {(x[1:], y) for x, y in erased if x[0] == x0}


# ---------------------------------------------------------- classification


def test_empty_theory_has_non_empty_models():
    res = classify(empty_theory(R11), [0, 1, 2], 1000)
    assert res.label == MODEL_NON_EMPTY and res.model.size >= 1


def test_nonempty_sets():
    thy = nonempty_sets_theory()
    assert not satisfies(thy, FiniteInterpretation(0))
    assert satisfies(thy, FiniteInterpretation(1))
    res = classify(thy, [0, 1, 2], 1000)
    assert res.label == MODEL_NON_EMPTY and res.model.size == 1


def test_trivial_theory():
    res = classify(trivial_theory(), [0, 1, 2], 1000)
    assert res.label == MODEL_EMPTY_ONLY and res.model.size == 0
    assert "sizes [0, 1, 2]" in res.describe()


def test_contradictory_theory():
    res = classify(contradictory_theory(), [0, 1, 2], 1000)
    assert res.label == NO_MODEL and res.model is None


def test_classify_budget_is_recorded():
    thy = Theory(R11, ((p("id+"), p("R+ ;+ R-", R11)),))
    res = classify(thy, [0, 1, 2], 2)
    assert res.exhausted and "budget exhausted" in res.describe()


def test_models_stream():
    thy = Theory(R11, ((p("id+"), p("R+", R11)),))
    got = list(models(thy, [0, 1, 2], 100))
    assert len(got) == 1 + 1 + 4
    assert all(satisfies(thy, i) for i in got)


@given(typed_terms(R11, 0, 0, depth=2))
def test_adding_axioms_keeps_contradiction(extra):
    base = Theory(R11, contradictory_theory().axioms)
    more = base.extend((Id0(W), extra))
    assert classify(more, [0, 1, 2], 1000).label == NO_MODEL
