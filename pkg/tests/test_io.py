import json

import pytest
from hypothesis import given, settings, strategies as st

from splitsync import io
from splitsync.catalog import cerny_cnfa
from splitsync.classes import classify
from splitsync.core import Automaton, Symbol, random_cnfa
from splitsync.critical import census
from splitsync.directing import d3_implicit, d3_oracle

INTRO = "cnfa 3\nsym a : 1,3 ; 2 ; 1\nsym b : 2 ; 1 ; 2,3\n"


def test_parse_intro(intro):
    aut = io.parse(INTRO)
    assert aut == intro
    assert aut.names == ("a", "b")


def test_serialize_roundtrip_text():
    commented = "# the worked example\n" + INTRO.replace("cnfa 3", "cnfa 3   ")
    assert io.serialize(io.parse(commented)) == INTRO


def _error(text):
    with pytest.raises(io.ParseError) as info:
        io.parse(text)
    return info.value


def test_empty_image():
    err = _error("cnfa 3\nsym x : ; 1 ; 2\n")
    assert "empty image" in err.message
    assert (err.line, err.column) == (2, 9)


def test_bad_header():
    err = _error("nfa 3\n")
    assert err.line == 1 and "header" in err.message


def test_state_out_of_range():
    err = _error("cnfa 2\nsym a : 1 ; 3\n")
    assert "out of range" in err.message and err.line == 2 and err.column == 13


def test_duplicate_body():
    err = _error("cnfa 2\nsym a : 1 ; 2\nsym b : 1 ; 2\n")
    assert "duplicates" in err.message and err.line == 3


def test_dfa_header_requires_singletons():
    err = _error("dfa 2\nsym a : 1,2 ; 2\n")
    assert "single state" in err.message


def test_too_many_states():
    assert "outside" in _error("cnfa 17\n").message


def test_not_ascending():
    assert "ascending" in _error("cnfa 2\nsym a : 2,1 ; 2\n").message


def test_wrong_image_count():
    assert "expected 2 images" in _error("cnfa 2\nsym a : 1\n").message


def test_missing_header():
    assert _error("# nothing\n").line == 1


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.floats(0, 0.7), st.integers(0, 10**6))
def test_roundtrip(n, k, density, seed):
    aut = random_cnfa(n, k, density, seed)
    back = io.parse(io.serialize(aut))
    assert back == aut and back.names == aut.names and back.symbols == aut.symbols


@settings(max_examples=500, deadline=None)
@given(st.text(alphabet="cnfad sym:;,#0123456789\n\t-x", max_size=80))
def test_parser_total(text):
    try:
        io.parse(text)
    except io.ParseError as err:
        assert err.line >= 1 and err.column >= 1


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=60))
def test_parser_total_bytes(blob):
    try:
        io.parse(blob.decode("latin-1"))
    except io.ParseError:
        pass


def test_directing_doc_roundtrip(intro):
    rep = d3_oracle(intro)
    doc = json.loads(io.dumps(io.directing_doc(intro, rep)))
    assert doc["schema"] == 1 and doc["length"] == 4
    assert io.directing_from_doc(intro, doc) == rep


def test_classes_doc(intro):
    doc = json.loads(io.dumps(io.classes_doc(intro, classify(intro))))
    assert doc["tightest"] == ["one_cluster", 4]
    assert doc["classes"]["one_cluster"]["certificate"] == ["b", 1]


def test_census_doc_roundtrip():
    rep = census(2)
    doc = io.census_doc(rep)
    assert json.loads(io.dumps(doc)) == doc
    assert io.census_doc(io.census_from_doc(doc)) == doc


def test_persist_and_load(tmp_path):
    rep = census(2)
    io.persist_census(rep, tmp_path)
    assert io.census_doc(io.load_census(tmp_path)) == io.census_doc(rep)


def test_census_three_directory(tmp_path):
    io.persist_census(census(3), tmp_path)
    assert len(list(tmp_path.glob("member_*"))) == 50


def test_tampered_member(tmp_path):
    io.persist_census(census(2), tmp_path)
    victim = sorted(tmp_path.glob("member_*"))[3]
    victim.write_text(io.serialize(cerny_cnfa(2)))
    with pytest.raises(io.CensusIntegrityError) as info:
        io.load_census(tmp_path)
    assert victim.name in str(info.value)


def test_missing_index(tmp_path):
    with pytest.raises(io.CensusIntegrityError):
        io.load_census(tmp_path)


def test_automaton_doc_roundtrip(intro):
    assert io.automaton_from_doc(io.automaton_doc(intro)) == intro


def test_file_helpers(tmp_path, intro):
    path = tmp_path / "x.cnfa"
    io.write_automaton(intro, path, comment="hello")
    assert path.read_text().startswith("# hello\n")
    assert io.read_automaton(path) == intro
    assert d3_implicit(io.read_automaton(path)).length == 4


def test_single_symbol_dfa_header():
    aut = Automaton(2, [Symbol.from_map([2, 2])])
    assert io.serialize(aut).startswith("dfa 2\n")
