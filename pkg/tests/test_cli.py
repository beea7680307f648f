import io as pyio
import json

import pytest

from splitsync import catalog
from splitsync.cli import run_cli

INTRO = "cnfa 3\nsym a : 1,3 ; 2 ; 1\nsym b : 2 ; 1 ; 2,3\n"


@pytest.fixture
def intro_file(tmp_path):
    p = tmp_path / "intro.cnfa"
    p.write_text(INTRO)
    return str(p)


def run(*argv):
    out = pyio.StringIO()
    code = run_cli(list(argv), out)
    return code, out.getvalue()


def test_d3(intro_file):
    code, out = run("d3", intro_file)
    assert code == 0 and "length      4" in out


def test_d3_json(intro_file):
    code, out = run("d3", intro_file, "--json", "--engine", "split")
    doc = json.loads(out)
    assert code == 0 and doc["length"] == 4 and doc["engine"] == "split"


def test_d3_not_directing(tmp_path):
    p = tmp_path / "id.dfa"
    p.write_text("dfa 2\nsym i : 1 ; 2\n")
    assert run("d3", str(p))[0] == 1


def test_verify(intro_file):
    code, out = run("verify", intro_file, "--word", "a,a,b,b", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["accepted"] and doc["sync_states"] == [2]


def test_verify_rejected(intro_file):
    assert run("verify", intro_file, "--word", "a")[0] == 1


def test_verify_unknown_letter(intro_file):
    assert run("verify", intro_file, "--word", "z")[0] == 2


def test_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.cnfa"
    p.write_text("cnfa 3\nsym x : ; 1 ; 2\n")
    assert run("d3", str(p))[0] == 2
    assert "line 2, column 9" in capsys.readouterr().err


def test_binary_input(tmp_path):
    p = tmp_path / "bin"
    p.write_bytes(b"\xff\xfe\x00garbage")
    assert run("classify", str(p))[0] == 2


def test_usage_error():
    assert run("frobnicate")[0] == 2


def test_budget(tmp_path, monkeypatch):
    p = tmp_path / "big.cnfa"
    p.write_text("cnfa 3\nsym a : 1,2,3 ; 1,2,3 ; 1,2,3\n")
    monkeypatch.setenv("SPLITSYNC_BUDGET", "5")
    assert run("split", str(p))[0] == 3
    assert run("d3", str(p), "--engine", "split")[0] == 3


def test_split(intro_file, tmp_path):
    code, out = run("split", intro_file)
    assert code == 0 and out.startswith("dfa 3")
    target = tmp_path / "out.dfa"
    assert run("split", intro_file, "-o", str(target))[0] == 0
    assert target.read_text() == out
    code, out = run("split", intro_file, "--at", "1", "a", "--json")
    assert len(json.loads(out)["automaton"]["symbols"]) == 3


def test_classify(intro_file):
    code, out = run("classify", intro_file, "--json")
    assert code == 0 and json.loads(out)["tightest"] == ["one_cluster", 4]


def test_graph_and_inverse(tmp_path):
    p = tmp_path / "a3.dfa"
    p.write_text((catalog.data_dir() / "a3.txt").read_text())
    code, out = run("graph", str(p), "--json")
    assert code == 0 and len(json.loads(out)["edges"]) == 2
    code, out = run("inverse-split", str(p), "--json")
    doc = json.loads(out)
    assert doc["complete"] and len(doc["members"]) == 4


def test_graph_needs_dfa(intro_file):
    assert run("graph", intro_file)[0] == 2


def test_census(tmp_path):
    code, out = run("census", "--states", "3", "--json", "--out", str(tmp_path / "c3"))
    doc = json.loads(out)
    assert code == 0 and doc["counts_iso"] == {"dfas": 15, "cnfas": 50}
    assert len(list((tmp_path / "c3").glob("member_*"))) == 50


def test_census_deterministic_across_jobs():
    assert run("census", "--states", "3", "--json")[1] == run("census", "--states", "3", "--json", "--jobs", "2")[1]


def test_census_table():
    code, out = run("census", "--states", "2")
    assert code == 0 and "up to isomorphism  4     20" in out


def test_catalog_commands(tmp_path, monkeypatch):
    code, out = run("catalog", "kari", "--json")
    assert code == 0 and json.loads(out)["expected"] == 25
    assert run("catalog", "cerny", "--n", "5")[0] == 0
    assert run("catalog", "nope")[0] == 2
    monkeypatch.setenv(catalog.DATA_ENV, str(tmp_path))
    assert run("catalog", "roman")[0] == 4
    assert run("census", "--states", "5")[0] == 4
