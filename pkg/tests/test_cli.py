from __future__ import annotations

import io
import json

import jsonschema
import pytest

from legsheaf import acceptance, corpus
from legsheaf.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, load_schema, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stream=out)
    return code, out.getvalue()


def run_json(command, *argv):
    code, text = run(command, *argv)
    assert code == EXIT_OK, text
    data = json.loads(text)
    jsonschema.validate(data, load_schema(command))
    return data


def test_invariants():
    data = run_json("invariants", "--front", "trefoil")
    assert (data["tb"], data["rot"], data["writhe"]) == (1, [0], 3)
    assert data["binary"] is True


def test_invariants_from_front_file(tmp_path):
    f = tmp_path / "t.frt"
    f.write_text("# trefoil\nu1 u2 x3 x3 x3 d2 d1\n")
    assert run_json("invariants", "--front", str(f))["tb"] == 1


def test_invariants_from_braid_match_corpus():
    a = run_json("invariants", "--braid", "1 1 1")
    b = run_json("invariants", "--front", "trefoil")
    assert a == b


def test_rulings():
    data = run_json("rulings", "--front", "m8_21")
    assert data["ruling_polynomial"]["coefficients"] == {"-1": 3, "1": 2}
    assert len(data["rulings"]) == 5


def test_homfly_identity_fields():
    data = run_json("homfly", "--braid", "1 1 1")
    assert data["lowest_a_coefficient"] == data["ruling_sum"]
    assert data["sign_convention"] == "intro"
    theorem = run_json("homfly", "--braid", "1 1 1", "--sign", "theorem")
    assert theorem["lowest_a_coefficient"] != theorem["ruling_sum"]


def test_homfly_of_non_positive_braid_omits_ruling_fields():
    data = run_json("homfly", "--braid", "1 -2 1 -2")
    assert "ruling_sum" not in data


def test_enumerate_with_strata():
    data = run_json("enumerate", "--front", "trefoil", "--field", "3", "--stratify")
    assert data["classes"] == 10 and data["orbifold"] == "5"
    assert sum(s["classes"] for s in data["strata"]) == 10
    assert all("ruling" in o for o in data["objects"])


def test_enumerate_cylindrical():
    data = run_json("enumerate", "--braid", "1 1", "--closure", "cylindrical", "--field", "2")
    assert data["orbifold"] == "4"


def test_ext_diagonal_and_jobs():
    one = run_json("ext", "--front", "hopf_rainbow", "--field", "3")
    two = run_json("ext", "--front", "hopf_rainbow", "--field", "3", "--jobs", "2")
    assert one == two
    assert one["routes_agree"] is True
    diag = run_json("ext", "--front", "hopf_rainbow", "--pairs", "diagonal")
    assert all(p["source"] == p["target"] for p in diag["pairs"])


def test_khr_normalized_and_bracket():
    data = run_json("khr", "--braid", "-1", "--strands", "2", "--qmax", "3")
    assert data["normalization"] == {"a": -3, "q2": 3}
    assert data["truncation"] == 3
    bracket = run_json("khr", "--braid", "-1", "--strands", "2", "--qmax", "3", "--bracket")
    assert bracket["normalization"] == {"a": 0, "q2": 0}
    assert [2, -2, 0, 1] in bracket["series"]


def test_output_is_deterministic():
    assert run("rulings", "--front", "torus_3_4") == run("rulings", "--front", "torus_3_4")


def test_table_format():
    code, text = run("enumerate", "--front", "unknot", "--format", "table")
    assert code == EXIT_OK
    assert "classes: 1" in text


@pytest.mark.parametrize("argv", [
    ["invariants", "--front", "no_such_front"],
    ["invariants", "--front", "trefoil", "--braid", "1"],
    ["invariants"],
    ["enumerate", "--front", "chekanov_1"],
    ["enumerate", "--front", "trefoil", "--field", "4"],
    ["invariants", "--braid", "1 x"],
    ["rulings", "--braid", "1 -1"],
    ["homfly", "--braid", "3", "--strands", "2"],
    ["ext", "--front", "trefoil", "--jobs", "0"],
    ["nonsense"],
])
def test_input_errors_exit_2(argv):
    assert run(*argv)[0] == EXIT_INPUT


def test_malformed_front_file_exits_2(tmp_path):
    f = tmp_path / "bad.frt"
    f.write_text("u1 u2 d1 d2\n")
    assert run("invariants", "--front", str(f))[0] == EXIT_INPUT


def test_size_cap_exits_3():
    assert run("khr", "--braid", "1 1 1 1 1 1 1 1 1", "--strands", "2")[0] == EXIT_RESOURCE


def test_verify_reports_failures(monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA", {1: ("always fails", lambda: (False, "no"))})
    code, text = run("verify", "--format", "table")
    assert code == EXIT_FAILED
    assert "criterion  1 FAIL" in text


def test_verify_json():
    data = run_json("verify", "--criteria", "1,3")
    assert data["passed"] is True
    assert [c["number"] for c in data["criteria"]] == [1, 3]


def test_verify_unknown_criterion():
    assert run("verify", "--criteria", "99")[0] == EXIT_INPUT


@pytest.mark.parametrize("name", corpus.NAMES)
def test_corpus_matches_recorded_outputs(name):
    want = corpus.expected(name)
    assert run_json("invariants", "--front", name) == want["invariants"]
    if "ruling_polynomial" in want:
        assert run_json("rulings", "--front", name)["ruling_polynomial"]["coefficients"] == want["ruling_polynomial"]
    for p, counts in want.get("objects", {}).items():
        data = run_json("enumerate", "--front", name, "--field", p)
        assert {k: data[k] for k in counts} == counts
