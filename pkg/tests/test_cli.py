import json
import os
from pathlib import Path

import jsonschema
import pytest
from click.testing import CliRunner

from jacdiag.cli import main
from jacdiag.diagrams import JacobiGraph, graph_to_json, sum_to_json, DiagramSum

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "jacdiag" / "schemas"


def load_schema(name):
    with open(SCHEMA_DIR / f"{name}.schema.json") as fh:
        return json.load(fh)


def run_ok(args, code=0):
    runner = CliRunner()
    res = runner.invoke(main, args, catch_exceptions=False)
    assert res.exit_code == code, res.output
    return res.output


def check(args, schema, code=0):
    out = run_ok(args, code)
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema(schema))
    return obj


THETA = JacobiGraph.make([(0, 1, 2), (3, 4, 5)], (), [(0, 3), (1, 4), (2, 5)])
LADDER = JacobiGraph.make([(0, 1, 2), (3, 4, 5)], (6, 7),
                          [(0, 3), (1, 4), (2, 6), (5, 7)])


@pytest.fixture()
def theta_file(tmp_path):
    p = tmp_path / "theta.json"
    p.write_text(json.dumps(graph_to_json(THETA)))
    return str(p)


@pytest.fixture()
def ladder_file(tmp_path):
    p = tmp_path / "ladder.json"
    p.write_text(json.dumps(graph_to_json(LADDER)))
    return str(p)


@pytest.fixture()
def matrix25_file(tmp_path):
    p = tmp_path / "diag25.json"
    p.write_text(json.dumps({"n": 1, "entries": [[25]]}))
    return str(p)


def test_theta_lens_schema_and_value():
    obj = check(["theta", "lens", "-p", "156", "-q", "5"], "theta")
    assert obj["group_order"] == 156
    assert abs(obj["value"]["re"] - 3.117839e-08) < 1e-13
    assert abs(obj["value"]["im"] + 1.786361e-06) < 1e-11


def test_theta_trivial():
    obj = check(["theta", "lens", "-p", "1", "-q", "1"], "theta")
    assert obj["value"]["re"] == 0 and obj["value"]["im"] == 0


def test_theta_matrix_matches_lens(matrix25_file):
    a = check(["theta", "matrix", "-f", matrix25_file], "theta")
    b = check(["theta", "lens", "-p", "25", "-q", "1"], "theta")
    assert a["value"]["re"] == b["value"]["re"]
    assert a["value"]["im"] == b["value"]["im"]


def test_theta_domain_error_exit_2(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"n": 1, "entries": [[0]]}))
    runner = CliRunner()
    res = runner.invoke(main, ["theta", "matrix", "-f", str(p)])
    assert res.exit_code == 2


def test_compare_25():
    obj = check(["compare", "25", "4", "9"], "compare")
    assert obj["dedekind"]["equal"] is True
    assert obj["verdicts"]["classical_lmo_distinguishes"] is False
    assert obj["verdicts"]["decorated_distinguishes"] is False


def test_compare_156():
    obj = check(["compare", "156", "5", "29"], "compare")
    assert obj["verdicts"]["decorated_distinguishes"] is True
    # the literal sums differ, so the classical verdict is a separation here
    assert obj["dedekind"]["equal"] is False
    assert obj["residues"]["asymmetric"] is True


def test_compare_same_input():
    obj = check(["compare", "5", "1", "1"], "compare")
    assert obj["verdicts"]["classical_lmo_distinguishes"] is False
    assert obj["verdicts"]["decorated_distinguishes"] is False


def test_dedekind_values_and_equality():
    a = check(["dedekind", "-p", "25", "-q", "4"], "dedekind")
    b = check(["dedekind", "-p", "25", "-q", "9"], "dedekind")
    assert a["value"] == b["value"] == {"num": 4, "den": 25}
    with_bad = CliRunner().invoke(main, ["dedekind", "-p", "25", "-q", "5"])
    assert with_bad.exit_code == 2


def test_residue_report_cli():
    obj = check(["residue", "156", "5", "29"], "residue")
    assert obj["asymmetric"] is True
    obj = check(["residue", "7", "1", "1"], "residue")
    assert obj["asymmetric"] is False


def test_kirby_fuzz_lens_reproducible():
    args = ["kirby-fuzz", "--lens", "25", "4", "--trials", "20", "--seed", "7"]
    out1 = run_ok(args)
    out2 = run_ok(args)
    assert out1 == out2                      # byte-identical with same seed
    obj = json.loads(out1)
    jsonschema.validate(obj, load_schema("kirby_fuzz"))
    assert obj["all_equivalent"] is True
    assert obj["max_abs_delta_theta"] < 1e-9
    assert obj["violations"] == []


def test_kirby_fuzz_zero_trials_vacuous():
    obj = check(["kirby-fuzz", "--lens", "7", "2", "--trials", "0",
                 "--seed", "0"], "kirby_fuzz")
    assert obj["trials"] == 0
    assert obj["all_equivalent"] is True


def test_kirby_fuzz_usage_error():
    res = CliRunner().invoke(main, ["kirby-fuzz", "--trials", "5"])
    assert res.exit_code == 2


def test_simplify_identity_on_normal_form(theta_file):
    obj = check(["simplify", "-f", theta_file], "simplify")
    assert obj["status"] == "ok"
    assert obj["steps"] == 0
    assert len(obj["result"]) == 1


def test_simplify_surfaces_violation(tmp_path, k4_graph):
    p = tmp_path / "k4.json"
    p.write_text(json.dumps(graph_to_json(k4_graph)))
    runner = CliRunner()
    res = runner.invoke(main, ["simplify", "-f", str(p)])
    assert res.exit_code == 1
    obj = json.loads(res.output)
    jsonschema.validate(obj, load_schema("simplify"))
    assert obj["status"] == "violation"
    assert obj["artifact"]["input_i_count"] == 6


def test_dh_cli(ladder_file):
    obj = check(["dh", "-f", ladder_file], "diagram_sum_result")
    assert len(obj["result"]) == 1           # ladder joins to the closed class


def test_bracket_cli(ladder_file):
    obj = check(["bracket", "-a", ladder_file, "-b", ladder_file],
                "diagram_sum_result")
    from jacdiag.operators import l2
    lib = l2(DiagramSum.of(LADDER), DiagramSum.of(LADDER))
    assert obj["result"] == sum_to_json(lib)
    # the self-bracket of this even-legged diagram cancels
    assert lib.is_zero()


def test_csum_cli(theta_file):
    obj = check(["csum", "-a", theta_file, "-b", theta_file],
                "diagram_sum_result")
    assert obj["result"]


def test_check_axiom_cs2_cli(theta_file):
    obj = check(["check-axiom", "CS2", "-i", theta_file, "-i", theta_file],
                "check_axiom")
    assert obj["verdict"] == "equal-in-normal-form"


def test_check_axiom_cs6_cli(ladder_file, theta_file):
    runner = CliRunner()
    res = runner.invoke(main, ["check-axiom", "CS6", "-i", ladder_file,
                               "-i", ladder_file, "-i", theta_file])
    assert res.exit_code == 0
    obj = json.loads(res.output)
    jsonschema.validate(obj, load_schema("check_axiom"))
    assert obj["verdict"] == "non-terminating"
    assert "parts" in obj


def test_eval_diagram_cli(theta_file):
    obj = check(["eval-diagram", "-f", theta_file, "-p", "7", "-q", "2"],
                "eval_diagram")
    assert obj["edges"] == 3
    direct = check(["theta", "lens", "-p", "7", "-q", "2"], "theta")
    assert obj["value"]["re"] == direct["value"]["re"]
    assert obj["value"]["im"] == direct["value"]["im"]


def test_grt_verify_cli():
    obj = check(["grt-verify"], "grt_verify")
    assert obj["equal"] is False
    assert obj["vertex_constant"] == {"num": -1, "den": 4}
    assert obj["lhs"]["x_image"] == [] and obj["lhs"]["y_image"] == []
    assert obj["rhs"]["y_image"] == []
    assert len(obj["rhs"]["x_image"]) == 6


def test_outputs_byte_identical():
    for args in (["theta", "lens", "-p", "25", "-q", "9"],
                 ["compare", "25", "4", "9"],
                 ["grt-verify"],
                 ["residue", "156", "5", "29"]):
        assert run_ok(args) == run_ok(args)
