import pytest

from relcalc.axioms import axiom_schemas, get_schema, instantiate, match_side
from relcalc.errors import IllTyped, MissingBinding, RelcalcError, UnknownSymbol
from relcalc.semantics import eval_term
from relcalc.soundness import (
    DEFAULT_SIGNATURES, atom_bindings, atoms, check_axiom_soundness, soundness_sweep,
)
from relcalc.syntax import parse_term
from relcalc.terms import (
    B, W, Cocopier, Copier, Gen, Id1, Seq, Signature, Tensor, typecheck,
)

R11 = Signature.of(R=(1, 1))


def p(text, sig=None):
    return parse_term(text, sig)


# ------------------------------------------------------------ catalogue


def test_catalogue_is_duplicate_free():
    ids = [s.id for s in axiom_schemas()]
    assert len(ids) == len(set(ids)) == 82
    labels = [s.label for s in axiom_schemas()]
    assert len(labels) == len(set(labels))


def test_catalogue_groups():
    groups = {s.group for s in axiom_schemas()}
    assert groups == {"cartesian", "cocartesian", "linear", "fo", "smc"}


def test_contains_delta_l():
    s = get_schema("delta_l")
    assert s.label == "(δ_l)" and s.side == "leq"
    inst = instantiate(s, {"a": Id1(W), "b": Id1(W), "c": Id1(W)}, Signature())
    assert inst.lhs == Seq(W, Id1(W), Seq(B, Id1(W), Id1(W)))
    assert inst.rhs == Seq(B, Seq(W, Id1(W), Id1(W)), Id1(W))
    assert inst.side == "leq"


def test_contains_special_frobenius():
    inst = instantiate("S_plus", {"n": 1}, Signature())
    assert inst.lhs == Seq(W, Copier(W), Cocopier(W))
    assert inst.rhs == Id1(W)
    assert inst.side == "eq"


def test_contains_interchange():
    a, b, c, d = (Gen(x, W) for x in "ABCD")
    sig = Signature.of(A=(1, 1), B=(1, 1), C=(1, 1), D=(1, 1))
    inst = instantiate("interchange_w", {"a": a, "b": b, "c": c, "d": d}, sig)
    assert inst.lhs == Seq(W, Tensor(W, a, b), Tensor(W, c, d))
    assert inst.rhs == Tensor(W, Seq(W, a, c), Seq(W, b, d))


def test_unknown_schema():
    with pytest.raises(RelcalcError):
        get_schema("no_such_axiom")


# -------------------------------------------------------- instantiation


def test_tau_r_plus():
    inst = instantiate("tau_R_plus", {"R": "R"}, R11)
    assert inst.lhs == Id1(W)
    assert inst.rhs == Seq(B, Gen("R", W), Gen("R", B))
    assert inst.side == "leq"


def test_eta_copier_plus():
    inst = instantiate("eta_copier_plus", {"n": 1}, Signature())
    assert (inst.lhs, inst.rhs) == (Id1(W), Seq(W, Copier(W), Cocopier(W)))


def test_derived_nats_are_inferred():
    # copier⁺-nat infers n and m from the type of c
    sig = Signature.of(P=(2, 1))
    inst = instantiate("copier_plus_nat", {"c": Gen("P", W)}, sig)
    assert inst.bindings["n"] == 2 and inst.bindings["m"] == 1
    assert tuple(typecheck(inst.lhs, sig)) == tuple(typecheck(inst.rhs, sig)) == (2, 2)


def test_missing_binding():
    with pytest.raises(MissingBinding):
        instantiate("eta_copier_plus", {}, Signature())


def test_ill_typed_binding():
    with pytest.raises(IllTyped):
        instantiate("seq_assoc_w", {"a": Copier(W), "b": Copier(W), "c": Id1(W)}, Signature())
    with pytest.raises(IllTyped):
        instantiate("eta_copier_plus", {"n": "one"}, Signature())
    with pytest.raises(IllTyped):
        instantiate("seq_unit_left_w", {"n": 2, "a": Id1(W)}, Signature())


def test_symbol_binding_must_exist():
    with pytest.raises(UnknownSymbol):
        instantiate("tau_R_plus", {"R": "Q"}, R11)


def test_every_instance_typechecks_in_the_sweep_universe():
    gen = atom_bindings(per_schema=8)
    for schema in axiom_schemas():
        for sig in DEFAULT_SIGNATURES:
            for b in gen(schema, sig):
                inst = instantiate(schema, b, sig)
                assert typecheck(inst.lhs, sig) == typecheck(inst.rhs, sig)


def test_match_side_recovers_bindings():
    sig = Signature.of(A=(1, 1))
    t = p("A+ ;+ (A+ ;+ A+)", sig)
    found = match_side(get_schema("seq_assoc_w"), "lhs", t, sig)
    assert found and found[0].rhs == p("A+ ;+ A+ ;+ A+", sig)
    assert not match_side(get_schema("seq_assoc_w"), "lhs", p("A+", sig), sig)


def test_atoms_universe():
    sig = Signature.of(R=(1, 1))
    got = atoms(sig)
    assert Gen("R", W) in got and Gen("R", B) in got
    assert len(got) == 16


# ------------------------------------------------------------ soundness


def test_tau_r_soundness_over_all_19_interpretations():
    rep = check_axiom_soundness(get_schema("tau_R_plus"), domain_sizes=(0, 1, 2),
                                signatures=[R11])
    assert rep.ok and rep.instances >= 1
    assert rep.checks == rep.instances * 19


def test_frobenius_soundness_at_size_two():
    rep = check_axiom_soundness(get_schema("F_plus"), domain_sizes=(2,), signatures=[R11])
    assert rep.ok
    inst = instantiate("F_plus", {"n": 1}, Signature())
    from relcalc.semantics import FiniteInterpretation
    i = FiniteInterpretation(2)
    assert eval_term(inst.lhs, i) == eval_term(inst.rhs, i)


def test_swapped_delta_l_is_caught():
    bad = get_schema("delta_l").swapped()
    rep = check_axiom_soundness(bad, domain_sizes=(0, 1, 2))
    assert not rep.ok
    f = rep.failures[0]
    assert f.direction == "lhs<=rhs" and "delta_l_swapped" in f.describe()


@pytest.mark.parametrize("axiom", ["eta_discard_plus", "tau_R_plus", "nu_plus_l", "delta_r"])
def test_swapped_inequations_are_caught(axiom):
    rep = check_axiom_soundness(get_schema(axiom).swapped(), domain_sizes=(0, 1, 2))
    assert not rep.ok


def test_budget_cut_is_reported():
    rep = check_axiom_soundness(get_schema("S_plus"), domain_sizes=(0, 1, 2), budget=3)
    assert rep.ok and rep.exhausted


def test_sweep_sample():
    reports = soundness_sweep([get_schema("bw_frob"), get_schema("gamma_codiscard_minus")])
    assert [r.schema for r in reports] == ["bw_frob", "gamma_codiscard_minus"]
    assert all(r.ok and r.instances > 0 for r in reports)
