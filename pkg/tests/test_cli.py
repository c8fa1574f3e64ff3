import json
from importlib import resources

import pytest
from click.testing import CliRunner

from relcalc.cli import main
from relcalc.library import contradictory_theory, nonempty_sets_theory, trivial_theory

R11 = json.dumps({"symbols": {"R": {"ar": 1, "coar": 1}}})
RS = json.dumps({"symbols": {"R": {"ar": 1, "coar": 1}, "S": {"ar": 1, "coar": 1}}})


def run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env)


def data_file(name):
    return str(resources.files("relcalc") / "data" / name)


# ------------------------------------------------------------ typecheck


def test_typecheck_copier():
    r = run("typecheck", "cp+")
    assert r.exit_code == 0 and r.output.strip() == "1 -> 2"


def test_typecheck_black_unit():
    assert run("typecheck", "id0-").output.strip() == "0 -> 0"


def test_typecheck_mismatch_is_a_user_error():
    sig = json.dumps({"symbols": {"R": {"ar": 1, "coar": 1}, "S": {"ar": 2, "coar": 1}}})
    r = run("typecheck", "R+ ;+ S+", "--sig", sig)
    assert r.exit_code == 1


def test_typecheck_json_either_side_of_the_command():
    for args in (["--json", "typecheck", "sw+"], ["typecheck", "sw+", "--json"]):
        out = json.loads(run(*args).output)
        assert out == {"status": "ok", "type": "2 -> 2", "input": 2, "output": 2}


def test_parse_errors_exit_1_with_json_kind():
    r = run("--json", "typecheck", "cp+ ;+")
    assert r.exit_code == 1 and json.loads(r.output)["kind"] == "ParseError"


# ----------------------------------------------------------------- eval


def test_eval_top_diagram():
    interp = json.dumps({"domain": 2, "relations": {}})
    r = run("eval", "dc+ ;+ cd+", "--interp", interp)
    assert r.exit_code == 0 and len(json.loads(r.output)) == 4


def test_eval_unit_on_empty_domain():
    r = run("eval", "id0+", "--interp", json.dumps({"domain": 0, "relations": {}}))
    assert json.loads(r.output) == [[[], []]]


def test_eval_meet_of_disjoint_relations():
    interp = json.dumps({"domain": 2, "relations": {"R": [[[0], [0]]], "S": [[[1], [1]]]}})
    r = run("eval", "cp+ ;+ (R+ *+ S+) ;+ cc+", "--interp", interp, "--sig", RS)
    assert r.exit_code == 0 and json.loads(r.output) == []


def test_eval_reads_files(tmp_path):
    (tmp_path / "i.json").write_text(json.dumps({"domain": 2, "relations": {"R": [[[0], [1]]]}}))
    (tmp_path / "s.json").write_text(R11)
    r = run("eval", "R-", "--interp", str(tmp_path / "i.json"), "--sig", str(tmp_path / "s.json"))
    assert r.exit_code == 0 and len(json.loads(r.output)) == 3


def test_eval_missing_file():
    assert run("eval", "id+", "--interp", "/nonexistent.json").exit_code == 1


# ---------------------------------------------------------------- check


def test_check_worked_proof():
    r = run("check", "--proof", data_file("exists_forall.proof.json"))
    assert r.exit_code == 0 and r.output.startswith("OK: 24 steps")


def test_check_empty_proof(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"start": "cp+ ;+ cc+", "end": "cp+ ;+ cc+", "steps": []}))
    assert run("check", "--proof", str(p)).exit_code == 0


def test_check_corrupted_step(tmp_path):
    obj = json.loads(open(data_file("exists_forall.proof.json")).read())
    obj["steps"][6]["axiom"] = "delta_r"
    obj["theory"] = json.loads(open(data_file("exists_forall.theory.json")).read())
    p = tmp_path / "p.json"
    p.write_text(json.dumps(obj))
    r = run("--json", "check", "--proof", str(p))
    out = json.loads(r.output)
    assert r.exit_code == 2 and out["status"] == "failed" and out["failed_step"] == 7
    human = run("check", "--proof", str(p))
    assert human.exit_code == 2 and human.output.startswith("FAILED at step 7")


def test_check_explicit_theory(tmp_path):
    thy = json.dumps({"signature": json.loads(R11), "axioms": [{"lhs": "R+", "rhs": "id+"}]})
    proof = json.dumps({"start": "R+", "end": "id+", "steps": [{"thyAxiom": 0}]})
    p = tmp_path / "p.json"
    p.write_text(proof)
    r = run("check", "--proof", str(p), "--theory", thy)
    assert r.exit_code == 0, r.output


def test_check_malformed_script(tmp_path):
    p = tmp_path / "p.json"
    p.write_text("[1, 2")
    assert run("check", "--proof", str(p)).exit_code == 1


# ------------------------------------------------------------ soundness


def test_soundness_single_schema():
    r = run("--json", "soundness", "--schema", "tau_R_plus")
    out = json.loads(r.output)
    assert r.exit_code == 0 and out["failures"] == 0
    assert [x["schema"] for x in out["reports"]] == ["tau_R_plus"]


def test_soundness_table():
    r = run("soundness", "--schema", "S_plus", "--schema", "delta_l", "--sizes", "0,1")
    assert r.exit_code == 0
    assert r.output.splitlines()[0].split() == ["schema", "instances", "checks", "failures"]
    assert "2 schemas" in r.output


def test_soundness_budget_cut_is_inconclusive():
    r = run("soundness", "--schema", "S_plus", "--budget", "2")
    assert r.exit_code == 3 and "(budget cut)" in r.output


def test_soundness_unknown_schema():
    assert run("soundness", "--schema", "nope").exit_code == 1


# --------------------------------------------------------------- encode


@pytest.mark.parametrize("source,text,extra,typ", [
    ("cr", "R & ^R", [], "1 -> 1"),
    ("fol", r"exists x2. P(x1,x2) /\ Q(x2)", ["-n", "1"], "1 -> 0"),
    ("prop", r"A /\ !A", [], "0 -> 0"),
    ("pfl", "]R & I", ["--sig", json.dumps({"symbols": {"R": {"ar": 2, "coar": 0}}})], "2 -> 0"),
])
def test_encode_sources(source, text, extra, typ):
    r = run("--json", "encode", source, text, *extra)
    assert r.exit_code == 0, r.output
    assert json.loads(r.output)["type"] == typ


def test_encode_fol_reports_function_axioms():
    r = run("encode", "fol", "x1 = f(x1)", "-n", "1")
    assert r.exit_code == 0 and r.output.count("assuming") == 2


def test_encode_pfl_needs_a_signature():
    assert run("encode", "pfl", "I").exit_code == 1


def test_encode_scope_error():
    assert run("encode", "fol", "P(x1)").exit_code == 1


def test_encode_unknown_source():
    assert run("encode", "lisp", "x").exit_code == 1


# --------------------------------------------------------------- search


def test_search_finds_countermodel():
    r = run("--json", "search", "R+", "id+", "--sig", R11)
    out = json.loads(r.output)
    assert r.exit_code == 0 and out["result"] == "countermodel"
    assert out["countermodel"] == {"domain": 2, "relations": {"R": [[[0], [1]]]}}


def test_search_complete_without_countermodel():
    r = run("search", "R+", "R+ ;+ id+", "--sig", R11)
    assert r.exit_code == 0 and "search complete" in r.output


def test_search_budget_from_environment():
    r = run("search", "id+", "R+ ;- R-", "--sig", R11, env={"RELCALC_BUDGET": "5"})
    assert r.exit_code == 3 and "budget exhausted" in r.output
    assert run("search", "id+", "R+", "--sig", R11, "--budget", "5",
               env={"RELCALC_BUDGET": "0"}).exit_code == 0


def test_bad_environment_budget():
    r = run("search", "id+", "R+", "--sig", R11, env={"RELCALC_BUDGET": "lots"})
    assert r.exit_code == 1


def test_bad_sizes():
    assert run("search", "id+", "id+", "--sizes", "0,x").exit_code == 1
    assert run("eval", "id+").exit_code == 1  # missing --interp


# ------------------------------------------------------------- classify


@pytest.mark.parametrize("thy,label", [
    (nonempty_sets_theory(), "ModelNonEmpty"),
    (trivial_theory(), "ModelEmptyOnly"),
    (contradictory_theory(), "NoModelUpToBound"),
])
def test_classify_labels(thy, label, tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps(thy.to_json()))
    out = json.loads(run("--json", "classify", "--theory", str(p)).output)
    assert out["label"] == label


def test_classify_human_output():
    r = run("classify", "--theory", json.dumps(trivial_theory().to_json()))
    assert r.exit_code == 0 and "ModelEmptyOnly" in r.output and "model:" in r.output


def test_output_is_deterministic():
    args = ["--json", "soundness", "--schema", "F_plus", "--sizes", "0,1,2"]
    assert run(*args).output == run(*args).output


def test_help_documents_grammars():
    r = run("--help")
    assert "Encoder sources" in r.output and "cp+[3]" in r.output
