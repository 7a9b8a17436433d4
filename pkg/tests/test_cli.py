import json
import subprocess
import sys

import pytest

from dpcolor.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_count_dp_c4(capsys):
    code, out = run(capsys, "count", "--g6", "Cl", "--k", "3", "--mode", "dp")
    (rec,) = records(out)
    assert code == 0
    assert rec["value"] == 15 and rec["mode"] == "dp" and not rec["partial"]
    assert rec["labelings_total"] == 6**4


def test_count_modes(capsys):
    assert records(run(capsys, "count", "--g6", "Cl", "--k", "4", "--mode", "linear")[1])[0]["value"] == 80
    assert records(run(capsys, "count", "--g6", "Cl", "--k", "3", "--mode", "signed")[1])[0]["value"] == 16
    rec = records(run(capsys, "count", "--g6", "Cl", "--k", "3", "--mode", "classical")[1])[0]
    assert rec["value"] == rec["deletion_contraction"] == 18
    rec = records(run(capsys, "count", "--edges", "0 1;1 2;2 3;0 3", "--k", "3", "--labeling",
                      "0 1 : 012;1 2 : 012;2 3 : 120;0 3 : 012")[1])[0]
    assert rec["value"] == 15


def test_count_dedup_off_and_tree_edges(capsys):
    a = records(run(capsys, "count", "--g6", "Cl", "--k", "3", "--dedup", "off")[1])[0]
    b = records(run(capsys, "count", "--g6", "Cl", "--k", "3", "--tree-edges", "0-1,1-2,2-3")[1])[0]
    assert a["value"] == b["value"] == 15
    assert a["labelings_examined"] == 6


def test_count_budget_exit_code(capsys):
    code, out = run(capsys, "count", "--g6", "C~", "--k", "4", "--budget", "1000")
    assert code == 3 and records(out)[0]["partial"]
    code, _ = run(capsys, "colorable", "--g6", "C~", "--k", "4", "--budget", "1000")
    assert code == 3
    code, out = run(capsys, "colorable", "--g6", "C~", "--k", "4", "--budget", "0")
    assert code == 0 and records(out)[0]["colorable"]


def test_bound_main_ii(capsys):
    code, out = run(capsys, "bound", "--theorem", "main-ii", "--n", "5", "--m", "6", "--k", "3")
    (rec,) = records(out)
    assert code == 0 and rec["floor"] == 9
    assert rec["exponent"] == {"num": 2, "den": 1}


def test_bound_not_applicable_exit_code(capsys):
    code, out = run(capsys, "bound", "--theorem", "main-ii", "--g6", "C~", "--k", "3")
    assert code == 1 and not records(out)[0]["applicable"]
    code, out = run(capsys, "bound", "--theorem", "af-weak", "--n", "5", "--S", "15", "--t", "3", "--d", "6")
    assert code == 0 and records(out)[0]["floor"] == 9


def test_family(capsys):
    code, out = run(capsys, "family", "--family", "triangle-free-planar-dp", "--n", "10", "--k", "4", "--c", "1/2", "--m", "15")
    rec = records(out)[0]
    assert code == 0 and rec["exponent"] == {"num": 19, "den": 3}


def test_search_degree_anchored_k5(capsys):
    code, out = run(capsys, "search-degree", "--k", "5", "--anchored")
    recs = records(out)
    summary = recs[-1]
    assert code == 0 and summary["worst_case_degree"] == 3 and summary["anchored"]
    assert len(recs) == summary["classes"] + 1


def test_search_degree_single(capsys):
    code, out = run(capsys, "search-degree", "--p", "7", "--perm", "1023456", "--anchor", "0,0")
    rec = records(out)[0]
    assert code == 0 and rec["degree"] == 5 and rec["witness_ok"]
    code, out = run(capsys, "search-degree", "--k", "5", "--perm", "10234", "--anchor", "0,0", "--product-l")
    assert records(out)[0]["degree"] == 3


def test_cover(capsys):
    code, out = run(capsys, "cover", "--g6", "Cl", "--labeling", "0 1 : 0123;1 2 : 0123;2 3 : 1023;0 3 : 0123")
    rec = records(out)[0]
    assert code == 0
    assert rec["degree"] == rec["expected_degree"] == 5
    assert rec["nonzeros"] >= rec["alon_furedi_exact"] >= rec["alon_furedi_weak"]["floor"]
    code, out = run(capsys, "cover", "--g6", "Cl", "--labeling", "0 1 : 012;1 2 : 012;2 3 : 012;0 3 : 012",
                    "--anchored", "--kappa", "0,1,0,1")
    assert records(out)[0]["degree"] == 4


def test_verify_sweeps(capsys, tmp_path):
    out_file = tmp_path / "r.jsonl"
    code, out = run(capsys, "verify", "--sweep", "soundness", "--theorem", "main-ii", "--n-max", "4",
                    "--k", "3", "--output", str(out_file))
    assert code == 0 and records(out)[-1]["ok"]
    assert len(out_file.read_text().splitlines()) == records(out)[-1]["records"]
    code, out = run(capsys, "verify", "--sweep", "conjecture", "--n-max", "4", "--k-list", "3,4")
    assert code == 0 and records(out)[-1]["failures"] == 0
    code, out = run(capsys, "verify", "--sweep", "conjecture", "--n-max", "6", "--sample", "5", "--seed", "1")
    assert code == 0 and records(out)[-1]["records"] == 5


def test_output_formats(capsys):
    _, out = run(capsys, "bound", "--theorem", "linear", "--n", "4", "--m", "3", "--k", "4", "--format", "csv")
    header, row = out.splitlines()
    assert "floor" in header.split(",") and "64" in row.split(",")
    _, out = run(capsys, "count", "--g6", "Cl", "--k", "3", "--format", "table")
    assert any(line.startswith("value") and line.split()[-1] == "15" for line in out.splitlines())


def test_jobs_do_not_change_output(capsys):
    a = run(capsys, "count", "--g6", "C~", "--k", "4")[1]
    b = run(capsys, "count", "--g6", "C~", "--k", "4", "--jobs", "2")[1]
    assert a == b
    a = run(capsys, "verify", "--sweep", "soundness", "--theorem", "linear", "--n-max", "4", "--k", "4")[1]
    b = run(capsys, "verify", "--sweep", "soundness", "--theorem", "linear", "--n-max", "4", "--k", "4", "--jobs", "2")[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ["count", "--k", "3"],
    ["count", "--g6", "Cl"],
    ["count", "--g6", "Cl", "--edges", "0 1", "--k", "3"],
    ["count", "--g6", "C", "--k", "3"],
    ["bound", "--theorem", "main-ii", "--k", "3"],
    ["bound", "--theorem", "nope"],
    ["search-degree", "--k", "6"],
    ["family", "--family", "no-cycles-4-9", "--n", "10"],
    ["cover", "--g6", "Cl"],
    ["verify", "--sweep", "soundness"],
    [],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dpcolor", "bound", "--theorem", "main-i", "--n", "5", "--m", "6", "--k", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["floor"] == 26
