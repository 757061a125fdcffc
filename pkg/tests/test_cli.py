"""End-to-end command line checks via subprocess."""

import json
import os
import subprocess
import sys
from pathlib import Path


SRC = str(Path(__file__).resolve().parents[1] / "src")


def run_cli(*args, stdin=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = SRC + os.pathsep + env.get("PYTHONPATH", "")
    env.setdefault("NEWTONSTRATA_BACKEND", "numpy")
    return subprocess.run(
        [sys.executable, "-m", "newtonstrata", *args],
        capture_output=True,
        text=True,
        input=stdin,
        env=env,
    )


def test_table_g4_text():
    res = run_cli("table", "--g", "4", "--format", "text")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert len(lines) == 9  # header + 8 rows
    assert lines[0].split() == ["NP", "xi", "f", "sdim", "c", "i", "ES"]
    rows = [line.split() for line in lines[1:]]
    data = {r[1]: (r[2], r[3], r[4], r[5], r[6]) for r in rows}
    assert data["(4,0)+(0,4)"] == ("4", "10", "10", "0", "(1,2,3,4)")
    assert data["(4,4)"] == ("0", "4", "0", "4", "(0,0,0,0)")
    assert data["(3,1)+(1,3)"] == ("0", "6", "5", "1", "(0,1,2,2)")


def test_table_json_and_csv():
    res = run_cli("table", "--g", "2", "--format", "json")
    obj = json.loads(res.stdout)
    assert obj["g"] == 2 and len(obj["rows"]) == 3
    assert all(r["c"] + r["i"] == r["sdim"] for r in obj["rows"])

    res = run_cli("table", "--g", "1", "--format", "csv")
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "xi,f,sdim,c,i,es,conjectured_max_total_dim"
    assert len(lines) == 3


def test_table_g1_two_rows():
    res = run_cli("table", "--g", "1")
    assert res.returncode == 0
    assert len(res.stdout.strip().splitlines()) == 3


def test_table_bad_g_usage():
    res = run_cli("table", "--g", "0")
    assert res.returncode == 2


def test_table_bound_exceeded():
    res = run_cli("table", "--g", "12", "--bound", "16")
    assert res.returncode == 2


def test_hasse_g4_dot():
    res = run_cli("hasse", "--g", "4")
    assert res.returncode == 0
    assert res.stdout.startswith("digraph hasse {")
    assert res.stdout.count("->") == 8
    assert res.stdout.count("label=") == 8  # one per node


def test_hasse_g1():
    res = run_cli("hasse", "--g", "1")
    assert res.stdout.count("->") == 1


def test_hasse_nonsymmetric():
    res = run_cli("hasse", "--d", "2", "--c", "1", "--format", "json")
    obj = json.loads(res.stdout)
    # the chain (1,0)^2+(0,1)  >  (1,0)+(1,1)  >  (2,1)
    assert len(obj["nodes"]) == 3
    assert sorted(obj["edges"]) == [
        ["(1,0) + (1,1)", "(1,0)^2 + (0,1)"],
        ["(2,1)", "(1,0) + (1,1)"],
    ]


def test_enumerate():
    res = run_cli("enumerate", "--d", "1", "--c", "1")
    obj = json.loads(res.stdout)
    assert obj["count"] == 2
    assert obj["polygons"] == ["(1,0) + (0,1)", "(1,1)"]


def test_invariants_symmetric():
    res = run_cli("invariants", "(2,1)+(1,1)+(1,2)")
    obj = json.loads(res.stdout)
    assert obj["f"] == 0 and obj["sdim"] == 5 and obj["c"] == 3 and obj["i"] == 2
    assert obj["es"] == [0, 1, 1, 1]
    assert obj["conjectural_fields"] == ["conjectured_max_total_dim"]


def test_invariants_nonsymmetric():
    res = run_cli("invariants", "(2,1)")
    obj = json.loads(res.stdout)
    assert obj["symmetric"] is False and "sdim" not in obj
    assert obj["cu"] == 0


def test_es_delta():
    res = run_cli("es", "(3,1)+(1,3)")
    assert json.loads(res.stdout)["es"] == [0, 1, 2, 2]


def test_es_parse_error():
    res = run_cli("es", "(3,1)+(")
    assert res.returncode == 1


def test_es_not_symmetric_is_input_error():
    res = run_cli("es", "(2,1)")
    assert res.returncode == 1


def test_homstab():
    res = run_cli("homstab", "--xi", "(1,1)", "--n", "1", "--nmax", "4", "--p", "3")
    obj = json.loads(res.stdout)
    assert obj["stabilization_index"] <= 2
    assert len(obj["image_order_exponents"]) == 4

    res = run_cli("homstab", "--xi", "(2,1)+(1,2)", "--n", "1", "--nmax", "3")
    obj = json.loads(res.stdout)
    assert obj["stabilization_index"] == 2

    # a single pair works too; no symmetry needed for the chain
    res = run_cli("homstab", "--xi", "(2,1)", "--n", "1", "--nmax", "3")
    assert res.returncode == 0
    assert json.loads(res.stdout)["stabilization_index"] == 1

    res = run_cli("homstab", "--xi", "(1,1)", "--n", "1", "--nmax", "9")
    assert res.returncode == 2  # beyond the default level bound


def test_polforms():
    res = run_cli("polforms", "(1,1)^2", "--e", "2")
    obj = json.loads(res.stdout)
    assert obj["count"] == 2
    res = run_cli("polforms", "(1,1)^2", "--e", "2", "--format", "dot")
    assert res.stdout.startswith("digraph moves {")


def test_frobnp_file_and_stdin(tmp_path):
    mat = tmp_path / "m.json"
    mat.write_text("[[0, 2], [1, 0]]")
    res = run_cli("frobnp", str(mat), "--p", "2")
    obj = json.loads(res.stdout)
    assert obj["xi"] == "(1,1)" and obj["slopes"] == ["1/2", "1/2"]

    res = run_cli("frobnp", "-", "--p", "2", stdin='[[1, 0], [0, "1/1"]]')
    assert json.loads(res.stdout)["xi"] == "(1,0)^2"


def test_frobnp_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[[0, 0], [0, 0]]")
    res = run_cli("frobnp", str(bad), "--p", "2")
    assert res.returncode == 1  # singular matrix
    notjson = tmp_path / "x.json"
    notjson.write_text("hello")
    assert run_cli("frobnp", str(notjson)).returncode == 1


def test_common_source_cmd():
    res = run_cli(
        "common-source",
        "--xi",
        "(1,1)^2",
        "ss:[I(0),I(0)];parts:[]",
        "ss:[II(0)];parts:[]",
    )
    obj = json.loads(res.stdout)
    assert obj["source"] == "ss:[I(0),I(0)];parts:[]"
    assert obj["path1"] == [] and obj["path2"] == ["ii-beta"]


def test_common_source_depth_exceeded():
    res = run_cli(
        "common-source",
        "--xi",
        "(1,1)^2",
        "ss:[II(0)];parts:[]",
        "ss:[I(0),I(0)];parts:[]",
        "--depth",
        "1",
    )
    assert res.returncode == 0  # depth 1 suffices here
    res = run_cli(
        "common-source",
        "--xi",
        "(1,1)^4",
        "ss:[II(1),II(1)];parts:[]",
        "ss:[I(0),I(0),I(0),I(0)];parts:[]",
        "--depth",
        "1",
    )
    assert res.returncode == 2


def test_nonprime_p_rejected():
    res = run_cli("es", "(1,1)", "--p", "4")
    assert res.returncode == 1


def test_out_file(tmp_path):
    target = tmp_path / "t.json"
    res = run_cli("table", "--g", "1", "--format", "json", "--out", str(target))
    assert res.returncode == 0 and res.stdout == ""
    assert json.loads(target.read_text())["g"] == 1


def test_internal_check_maps_to_exit_3(monkeypatch):
    from newtonstrata import cli
    from newtonstrata.errors import InternalCheckError

    def boom(args, cfg):
        raise InternalCheckError("induced for the exit-code contract")

    monkeypatch.setitem(cli._HANDLERS, "es", boom)
    assert cli.main(["es", "(1,1)"]) == 3


def test_outputs_are_deterministic():
    a = run_cli("table", "--g", "3", "--format", "json").stdout
    b = run_cli("table", "--g", "3", "--format", "json").stdout
    assert a == b
    c = run_cli("hasse", "--g", "3").stdout
    d = run_cli("hasse", "--g", "3").stdout
    assert c == d
