import csv
import json

import pytest

from chshgen import cli


def run(tmp_path, *args):
    return cli.main(["--out", str(tmp_path), *args])


def load(path):
    return json.loads(path.read_text())


def test_chsh(tmp_path, capsys):
    assert run(tmp_path, "chsh") == 0
    rep = load(tmp_path / "chsh.json")
    assert abs(rep["sweep_max"] - 0.853553) < 1e-6
    assert abs(rep["sweep_max"] - rep["closed_form_max"]) < 1e-9
    assert len(rep["sweep_argmax"]) == 4
    assert "0.853553" in capsys.readouterr().out
    man = load(tmp_path / "chsh.manifest.json")
    assert man["command"] == "chsh" and man["outputs"] == [str(tmp_path / "chsh.json")]


@pytest.mark.parametrize("n,rows", [(2, 8), (4, 8)])
def test_table_rows(tmp_path, n, rows):
    assert run(tmp_path, "table", str(n)) == 0
    with open(tmp_path / f"table{n}.csv") as fh:
        assert len(list(csv.reader(fh))) == rows + 1
    assert "diff" in load(tmp_path / f"table{n}.json")


def test_table5_gaps(tmp_path):
    assert run(tmp_path, "table", "5") == 0
    doc = load(tmp_path / "table5.json")
    assert all(r["gap"] > 0.44 for r in doc["records"])
    assert doc["diff"]["mismatched"] == 33


def test_table1_diff(tmp_path):
    assert run(tmp_path, "table", "1") == 0
    diff = load(tmp_path / "table1.json")["diff"]
    assert diff["computed_counts"] == {"0.85": 28, "0.80": 32, "0.67": 48, "0.55": 32, "0.50": 56}


def test_surface(tmp_path):
    assert run(tmp_path, "surface", "--dim", "2", "--f", "[0,0,0,1]", "--g", "[0,1,1,0]") == 0
    with open(tmp_path / "surface_d2.csv") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 64 and {len(r) for r in rows} == {64}


def test_classes_kind1(tmp_path):
    args = ["classes", "1", "--dim", "2", "--f", "[0,0,0,1]", "--g", "[0,1,1,0]", "--precision", "1"]
    assert run(tmp_path, *args) == 0
    assert len(load(tmp_path / "classes1_d2.json")["classes"]) == 8


def test_classes_kind2_and_3(tmp_path):
    assert run(tmp_path, "classes", "2", "--theta0", "pi/8", "--theta1", "15pi/8") == 0
    doc = load(tmp_path / "classes2_d2.json")
    assert sum(c["size"] for c in doc["classes"]) == 196
    assert run(tmp_path, "classes", "3", "--dim", "3") == 0
    doc = load(tmp_path / "classes3_d3.json")
    assert doc["classes"][0]["key"] == 0.86 and len(doc["pairs"]) == 8


def test_distinguishers(tmp_path):
    assert run(tmp_path, "distinguishers", "d2") == 0
    assert len(load(tmp_path / "distinguishers_d2.json")["records"]) == 8
    assert run(tmp_path, "--threshold", "0.3", "distinguishers", "d3") == 0
    doc = load(tmp_path / "distinguishers_d3.json")
    assert doc["threshold"] == 0.3 and all(r["gap"] > 0.3 for r in doc["records"])


def test_simulate_decides_three(tmp_path):
    assert run(tmp_path, "simulate", "--dim", "3", "--rounds", "100000", "--seed", "42") == 0
    assert load(tmp_path / "simulate_d3.json")["decided_dim"] == 3


def test_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert cli.main(["--out", str(out), "--seed", "7", "simulate", "--dim", "2", "--rounds", "500", "--log"]) == 0
    for name in ("simulate_d2.json", "simulate_d2_log.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_json_floats_round_trip(tmp_path):
    assert run(tmp_path, "distinguishers", "d2") == 0
    text = (tmp_path / "distinguishers_d2.json").read_text()
    for rec in json.loads(text)["records"]:
        assert float(repr(rec["p_d3"])) == rec["p_d3"]


@pytest.mark.parametrize(
    "args,token",
    [
        (["surface", "--dim", "2", "--f", "[0,2,0,1]", "--g", "[0,1,1,0]"], "[0,2,0,1]"),
        (["surface", "--dim", "5", "--f", "[0,0,0,1]", "--g", "[0,1,1,0]"], "'5'"),
        (["classes", "2", "--theta0", "pi/7", "--theta1", "0"], "pi/7"),
        (["simulate", "--dim", "2", "--theta0", "bogus"], "bogus"),
        (["--precision", "-1", "chsh"], "-1"),
        (["table", "6"], "6"),
    ],
)
def test_usage_errors_name_token(tmp_path, capsys, args, token):
    assert run(tmp_path, *args) == cli.EXIT_USAGE
    assert token in capsys.readouterr().err


def test_bad_g_for_dim(tmp_path, capsys):
    assert run(tmp_path, "surface", "--dim", "3", "--f", "[0,0,0,1]", "--g", "[0,1,1,0]") == cli.EXIT_USAGE
    assert "[0,1,1,0]" in capsys.readouterr().err


def test_domain_error(tmp_path):
    assert run(tmp_path, "surface", "--dim", "2", "--f", "[1,1,1,1]", "--g", "[0,1,1,0]") == cli.EXIT_DOMAIN


def test_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.main(["--out", str(blocker / "sub"), "chsh"]) == cli.EXIT_IO


def test_flags_after_subcommand(tmp_path):
    assert cli.main(["chsh", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "chsh.json").exists()
