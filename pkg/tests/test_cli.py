"""End-to-end checks of the command line front end.

main() runs in process so exit codes and both streams can be asserted
exactly.  One test shells out to the installed console script to make
sure the packaging entry point works at all; everything else stays in
process because subprocess startup would dominate the suite.
"""

import json
import subprocess
from itertools import product

import pytest

from curvext import (ExtensionClass, class_to_json, curve_to_json,
                     datum_to_json, det_test)
from curvext.cli import main
from helpers import curve_g1_f5, datum_on_infinity


def run(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv)
    return code, json.loads(out), err


def _dead_line(datum):
    # m = 1 here, so det is linear in the coordinates and any single
    # nonzero class with det 0 spans a line the search cannot leave
    F = datum.curve.field
    for coords in product(list(F.iter_payloads()), repeat=datum.class_dim):
        if all(F.is_zero(v) for v in coords):
            continue
        if not det_test(ExtensionClass(datum, list(coords))):
            return list(coords)
    raise AssertionError("no singular class on a dim-2 space over F5")


@pytest.fixture(scope="module")
def tree(tmp_path_factory):
    """One directory of JSON fixtures shared by every test here."""
    root = tmp_path_factory.mktemp("cli")
    curve = curve_g1_f5()

    def dump(name, obj):
        path = root / name
        path.write_text(json.dumps(obj), encoding="utf-8")
        return str(path)

    d4 = datum_on_infinity(curve, 4)
    d2 = datum_on_infinity(curve, 2)
    paths = {
        "curve": dump("curve.json", curve_to_json(curve)),
        "cls": dump("cls.json", class_to_json(ExtensionClass(d4, [1, 0, 2, 3]))),
        "zero": dump("zero.json", class_to_json(ExtensionClass(d4, [0, 0, 0, 0]))),
        "subspace": dump("subspace.json",
                         {"datum": datum_to_json(d2), "V": [[1, 0], [0, 1]]}),
        "dead": dump("dead.json",
                     {"datum": datum_to_json(d2), "V": [_dead_line(d2)]}),
        "points": dump("points.json", ["infinity", {"x": 0, "y": 1}]),
        "root": str(root),
    }
    (root / "bad.json").write_text("{not json", encoding="utf-8")
    paths["bad"] = str(root / "bad.json")
    # class file whose datum names the curve by relative path
    rel = {"datum": {"curve": "curve.json",
                     "N": [{"point": "infinity", "mult": 4}],
                     "M": [{"point": "infinity", "mult": 2}]},
           "e": [1, 0, 2, 3]}
    paths["cls_rel"] = dump("cls_rel.json", rel)
    return paths


TOP_KEYS = ["command", "inputs", "result", "timings", "witnesses"]


def test_report_shape_and_serialization(tree, capsys):
    code, out, err = run(capsys, ["curve", "validate", tree["curve"]])
    assert code == 0
    report = json.loads(out)
    assert sorted(report) == TOP_KEYS
    assert report["command"] == "curve validate"
    assert report["inputs"] == {"file": tree["curve"]}
    assert report["result"]["status"] == "ok"
    assert report["result"]["valid"] is True
    assert report["result"]["genus"] == 1
    assert report["result"]["f_degree"] == 3
    assert report["witnesses"] == []
    # stdout is the canonical serialization, nothing more
    want = json.dumps(report, sort_keys=True, separators=(",", ": "), indent=1)
    assert out == want + "\n"
    # the human table goes to stderr and never pollutes stdout
    assert "curve validate" in err
    assert "wall_seconds" in err
    assert "wall_seconds" not in out


def _command_matrix(tree):
    return [
        ["curve", "validate", tree["curve"]],
        ["rr", "basis", tree["curve"],
         "--divisor", '[{"point": "infinity", "mult": 5}]'],
        ["ext", "det", tree["cls"]],
        ["ext", "prop1", tree["cls"]],
        ["ext", "search", tree["subspace"]],
        ["ext", "destab", tree["zero"]],
        ["ext", "destab", tree["zero"], "--max-degree", "0"],
        ["ext", "destab", tree["cls"], "--points", tree["points"]],
        ["secant", "member", tree["zero"]],
        ["secant", "member", tree["cls"], "--d", "0"],
        ["secant", "experiment", tree["curve"], "--n", "4", "--dim", "2",
         "--trials", "2", "--seed", "7"],
        ["bounds", "m", tree["curve"],
         "--divisor", '[{"point": "infinity", "mult": 3}]'],
        ["bounds", "delta0", "--n", "6", "--g", "2", "--m", "3"],
        ["bounds", "theorem2", "--n", "4", "--g", "2", "--m", "2",
         "--degF", "1", "--c1sq", "3/7", "--k", "5"],
    ]


def test_every_command_is_byte_stable(tree, capsys):
    for argv in _command_matrix(tree):
        first = run(capsys, argv)
        second = run(capsys, argv)
        assert first[0] == 0, (argv, first[1])
        assert second[0] == 0
        assert first[1] == second[1], argv
        report = json.loads(first[1])
        assert sorted(report) == TOP_KEYS
        assert report["result"]["status"] == "ok"


def test_rr_basis_payload(tree, capsys):
    code, report, _ = run_json(
        capsys, ["rr", "basis", tree["curve"],
                 "--divisor", '[{"point": "infinity", "mult": 5}]'])
    assert code == 0
    res = report["result"]
    assert res["dim"] == 5
    assert res["degree"] == 5
    assert res["pole_orders"] == [0, 2, 3, 4, 5]
    assert len(res["basis"]) == 5
    assert res["basis"][0]["a"] == [1]
    assert report["inputs"]["divisor"] == [{"point": "infinity", "mult": 5}]


def test_ext_det_and_prop1_agree(tree, capsys):
    code, det_rep, _ = run_json(capsys, ["ext", "det", tree["cls"]])
    assert code == 0
    res = det_rep["result"]
    assert (res["m"], res["n"]) == (2, 4)
    assert res["nonzero"] is (res["det"] != 0)
    assert res["certifies_semistable"] is res["nonzero"]

    code, p1, _ = run_json(capsys, ["ext", "prop1", tree["cls"]])
    assert code == 0
    cert = p1["result"]["certificate"]
    assert cert["outcome"] in ("certified-semistable", "inconclusive")
    if res["nonzero"]:
        assert cert["outcome"] == "certified-semistable"


def test_search_reports_witness(tree, capsys):
    code, report, _ = run_json(capsys, ["ext", "search", tree["subspace"]])
    assert code == 0
    res = report["result"]
    assert res["found"] is True
    assert res["examined"] >= 1
    (witness,) = report["witnesses"]
    assert witness["coefficients"] == res["coefficients"]
    assert len(witness["coords"]) == 2
    assert max(abs(c) for c in res["coefficients"]) <= res["box"]


def test_destab_on_the_zero_class(tree, capsys):
    code, report, _ = run_json(capsys, ["ext", "destab", tree["zero"]])
    assert code == 0
    res = report["result"]
    assert res["found"] is True and res["complete"] is True
    # the zero class is destabilized by the empty divisor
    assert report["witnesses"] == [[]]

    code, capped, _ = run_json(
        capsys, ["ext", "destab", tree["zero"], "--max-degree", "0"])
    assert code == 0
    assert capped["result"]["complete"] is False
    assert capped["inputs"]["max_degree"] == 0


def test_secant_member_reports(tree, capsys):
    code, report, _ = run_json(capsys, ["secant", "member", tree["zero"]])
    assert code == 0
    res = report["result"]
    assert res["member"] is True and res["d"] == 1
    assert report["witnesses"] == [[]]

    code, report, _ = run_json(
        capsys, ["secant", "member", tree["cls"], "--d", "0"])
    assert code == 0
    res = report["result"]
    assert res["member"] is False and res["d"] == 0
    assert report["witnesses"] == []
    assert report["inputs"]["d"] == 0


def test_experiment_thread_count_is_invisible(tree, capsys):
    base = ["secant", "experiment", tree["curve"], "--n", "4", "--dim", "3",
            "--trials", "3", "--seed", "11"]
    one = run(capsys, base + ["--threads", "1"])
    eight = run(capsys, base + ["--threads", "8"])
    assert one[0] == eight[0] == 0
    assert one[1] == eight[1]
    report = json.loads(one[1])
    assert "threads" not in report["inputs"]
    assert report["inputs"]["seed"] == 11
    res = report["result"]
    assert res["trials"] == 3 and res["violations"] == 0
    assert [o["trial"] for o in res["outcomes"]] == [0, 1, 2]


def test_relative_curve_path_resolves_against_the_class_file(tree, capsys):
    code, report, _ = run_json(capsys, ["ext", "det", tree["cls_rel"]])
    assert code == 0
    direct = run_json(capsys, ["ext", "det", tree["cls"]])[1]
    assert report["result"] == direct["result"]


def test_bounds_commands(tree, capsys):
    code, report, _ = run_json(
        capsys, ["bounds", "m", tree["curve"],
                 "--divisor", '[{"point": "infinity", "mult": 3}]'])
    assert code == 0
    assert report["result"] == {"status": "ok", "m": 3, "deg_M": 3, "genus": 1}

    code, report, _ = run_json(
        capsys, ["bounds", "delta0", "--n", "6", "--g", "2", "--m", "3"])
    assert code == 0
    assert report["result"]["delta0"] == 6 - 3 + 2 - 1

    code, report, _ = run_json(
        capsys, ["bounds", "theorem2", "--n", "4", "--g", "2", "--m", "2",
                 "--degF", "1", "--c1sq", "0", "--k", "4"])
    assert code == 0
    res = report["result"]
    assert res["A"].startswith("2.552585092994045684")
    assert res["bound"] == "-" + res["A"]


def test_theorem2_gate_exits_two_with_inputs_echoed(tree, capsys):
    argv = ["bounds", "theorem2", "--n", "4", "--g", "2", "--m", "2",
            "--degF", "1", "--c1sq", "0", "--k", "3"]
    code, report, err = run_json(capsys, argv)
    assert code == 2
    assert report["result"]["status"] == "not-applicable"
    assert "message" in report["result"]
    assert report["inputs"]["k"] == 3
    assert report["inputs"]["n"] == 4
    assert "not-applicable" in err


def test_search_exhaustion_exits_two(tree, capsys):
    code, report, _ = run_json(capsys, ["ext", "search", tree["dead"]])
    assert code == 2
    assert report["result"]["status"] == "exhausted"
    assert report["inputs"]["file"] == tree["dead"]


def test_input_errors_exit_one(tree, capsys):
    cases = [
        ["curve", "validate", tree["root"] + "/missing.json"],
        ["curve", "validate", tree["bad"]],
        ["rr", "basis", tree["curve"], "--divisor", "{"],
        ["secant", "experiment", tree["curve"], "--n", "3", "--dim", "1",
         "--trials", "1"],
        ["secant", "member", tree["cls"], "--d", "-1"],
    ]
    for argv in cases:
        code, report, _ = run_json(capsys, argv)
        assert code == 1, argv
        assert report["result"]["status"] == "input-error"
        assert report["result"]["message"]


def test_usage_errors_exit_one_with_a_report(tree, capsys):
    cases = [
        ["bogus"],
        ["bounds", "delta0", "--n", "6", "--g", "2"],
        ["ext", "destab", tree["zero"], "--max-degree", "0",
         "--points", tree["points"]],
        [],
    ]
    for argv in cases:
        code, out, _ = run(capsys, argv)
        assert code == 1, argv
        report = json.loads(out)
        assert report["result"]["status"] == "input-error"
        assert sorted(report) == TOP_KEYS


def test_inputs_echo_survives_handler_errors(tree, capsys):
    # the divisor parses, then construction fails; both inputs come back
    argv = ["rr", "basis", tree["curve"],
            "--divisor", '[{"point": "infinity", "mult": "x"}]']
    code, report, _ = run_json(capsys, argv)
    assert code == 1
    assert report["inputs"]["curve"] == tree["curve"]
    assert report["inputs"]["divisor"] == [{"point": "infinity", "mult": "x"}]


def test_console_script_round_trip(tree):
    proc = subprocess.run(
        ["curvext", "bounds", "delta0", "--n", "4", "--g", "1", "--m", "2"],
        capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["command"] == "bounds delta0"
    assert report["result"]["delta0"] == 2
    assert "wall_seconds" in proc.stderr
