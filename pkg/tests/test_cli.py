import json

import pytest

from biheyting.cli import exit_code, make_report, run, strip_timing


def run_json(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = run(list(argv) + ["--format", "json", "-o", str(out)])
    return code, json.loads(out.read_text())


def test_prove_pass(tmp_path):
    code, rep = run_json(tmp_path, "prove", "p |- q -> p")
    assert code == 0 and rep["summary"]["PASS"] == 1
    assert rep["config"]["seed"] == 20240611 and rep["tool"] == "biheyting"


def test_prove_not_derivable_fails_unless_expected(tmp_path):
    code, rep = run_json(tmp_path, "prove", "|- p \\/ -p")
    assert code == 1
    assert rep["records"][0]["details"]["countermodel"]["poset"]["n"] == 2
    code, _ = run_json(tmp_path, "prove", "|- p \\/ -p", "--expect", "not-derivable")
    assert code == 0


def test_prove_unknown_does_not_fail(tmp_path):
    code, rep = run_json(tmp_path, "prove", "--engine", "g4ip", "--budget", "2",
                         "|- ((p -> q) -> p) -> p")
    assert code == 0 and rep["summary"]["UNKNOWN"] == 1


def test_batch_jsonl(tmp_path, capsys):
    batch = tmp_path / "tasks.txt"
    batch.write_text("# comment\np |- q -> p\n|- p \\/ -p\np -> |- q\n")
    code = run(["prove", "--batch", str(batch), "--format", "jsonl"])
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert code == 1 and len(lines) == 3
    assert set(lines[0]) == {"task", "verdict", "nodes", "time_ms"}
    assert lines[1]["verdict"] == "not_derivable" and "countermodel" in lines[1]
    assert lines[2]["status"] == "FAIL" and "error" in lines[2]["details"]


def test_fine_delta0(tmp_path):
    code, rep = run_json(tmp_path, "fine", "--suite", "delta0")
    assert code == 0
    assert rep["records"][0]["details"]["witness"] == {"mode": "cofinite", "points": [["D", 0]]}


def test_bb2_equiv(tmp_path):
    code, rep = run_json(tmp_path, "bb2-equiv", "--max-n", "3")
    assert code == 0 and rep["summary"]["PASS"] == 8


def test_abcd_exit_code(tmp_path):
    code, rep = run_json(tmp_path, "fine", "--suite", "abcd", "--n", "3")
    assert code == 1 and rep["summary"]["FAIL"] == 6


def test_parse_command(tmp_path):
    code, rep = run_json(tmp_path, "parse", "p->q->r", "p ->")
    assert code == 1
    assert rep["records"][0]["details"]["canonical"] == "p -> q -> r"
    assert rep["records"][1]["details"]["column"] == 5


def test_eval_command(tmp_path):
    code, rep = run_json(tmp_path, "eval", "p \\/ -p", "--valuation", '{"p": [1]}')
    assert code == 0 and rep["records"][0]["details"]["value"] == [1]
    assert rep["records"][0]["details"]["top"] is False
    val = '{"p": {"mode": "finite", "points": [["C", 0]]}, "q": {"mode": "finite", "points": [["B", 0]]}}'
    code, rep = run_json(tmp_path, "eval", "(-p)", "--fine", "--valuation", val)
    assert rep["records"][0]["details"]["value"]["points"] == [["B", 0], ["B", 1]]


def test_enumerate_and_incompleteness(tmp_path):
    code, rep = run_json(tmp_path, "enumerate", "5")
    assert code == 0 and [r["details"]["count"] for r in rep["records"]] == [1, 2, 5, 16, 63]
    code, rep = run_json(tmp_path, "incompleteness", "--max-n", "4")
    assert code == 0


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["prove"],
    ["enumerate", "0"],
    ["enumerate", "many"],
    ["fine", "--suite", "nope"],
    ["eval", "p ->"],
    ["export-dot", "chain:2", "/nonexistent/dir/x.dot"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_export_dot_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.dot", tmp_path / "b.dot"
    assert run(["export-dot", "fine:4", str(a)]) == 0
    assert run(["export-dot", "fine:4", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.count("label=") == 18 and 'label="d0"' in text
    c = tmp_path / "c.dot"
    assert run(["export-dot", "chain:2", str(c)]) == 0
    assert c.read_text().count("label=") == 2 and c.read_text().count("->") == 1


def test_reports_are_deterministic_apart_from_timing(tmp_path):
    argv = ["fine", "--suite", "sample", "--samples", "200", "--seed", "5"]
    _, a = run_json(tmp_path, *argv)
    _, b = run_json(tmp_path, *argv)
    assert strip_timing(a) == strip_timing(b)
    assert a["config"]["seed"] == 5


def test_summary_and_exit_code_helpers():
    recs = [{"id": "a", "status": "PASS", "details": {}, "time_ms": 1.0},
            {"id": "b", "status": "UNKNOWN", "details": {}, "time_ms": 2.0}]
    rep = make_report("x", {}, recs)
    assert rep["summary"] == {"PASS": 1, "FAIL": 0, "UNKNOWN": 1}
    assert exit_code(rep) == 0
    rep = make_report("x", {}, recs + [{"id": "c", "status": "FAIL", "details": {}, "time_ms": 0}])
    assert exit_code(rep) == 1
    assert "time_ms" not in strip_timing(rep)["records"][0]


def test_acceptance_fault_injection(tmp_path):
    code, rep = run_json(tmp_path, "acceptance", "--only", "C9")
    assert code == 0
    code, rep = run_json(tmp_path, "acceptance", "--only", "C9", "--inject-fault", "C9")
    assert code == 1 and rep["records"][0]["details"]["fault_injected"]
