import pytest
from hypothesis import given, settings, strategies as st

from splitsync.catalog import cerny, cerny_cnfa
from splitsync.core import Automaton, AutomatonError, Symbol, random_cnfa, stateset, word_from_names
from splitsync.directing import (
    DirectingReport, d3, d3_implicit, d3_oracle, d3_via_split, dfa_shortest_sync, verify_d3,
)
from splitsync.split import BudgetExceeded


def test_intro_all_engines(intro):
    for engine in ("implicit", "split", "oracle"):
        rep = d3(intro, engine)
        assert rep.directing and rep.length == 4
        assert verify_d3(intro, rep.witness).sync_states >> (rep.sync_state - 1) & 1


def test_intro_witness_baba_is_valid(intro):
    res = verify_d3(intro, word_from_names(intro, "baba"))
    assert res.accepted
    assert res.sync_states & stateset(1)
    assert res.end_sets == (stateset(1, 3), stateset(1, 2), stateset(1, 2, 3))


def test_aabb_sync_state_two(intro):
    res = verify_d3(intro, word_from_names(intro, "aabb"))
    assert res.accepted and res.sync_states == stateset(2)


def test_empty_word_rejected(intro):
    assert not verify_d3(intro, ()).accepted


def test_cerny_lengths():
    for n in range(2, 8):
        assert dfa_shortest_sync(cerny(n)).length == (n - 1) ** 2
        assert d3_implicit(cerny_cnfa(n)).length == (n - 1) ** 2
    assert d3_via_split(cerny_cnfa(4)).length == 9


def test_single_state():
    aut = Automaton(1, [Symbol.from_map([1])])
    assert dfa_shortest_sync(aut).length == 0
    assert d3_implicit(aut).length == 0


def test_two_state_constant():
    assert dfa_shortest_sync(Automaton(2, [Symbol.from_map([1, 1])])).length == 1


def test_cerny3_oracle_matches():
    assert d3_oracle(cerny(3)).length == dfa_shortest_sync(cerny(3)).length == 4


def test_non_directing():
    sinks = Automaton(2, [Symbol.identity(2)])
    for engine in ("implicit", "split", "oracle"):
        rep = d3(sinks, engine)
        assert not rep.directing and rep.length is None and rep.witness is None


def test_dfa_engine_rejects_cnfa(intro):
    with pytest.raises(AutomatonError):
        dfa_shortest_sync(intro)


def test_oracle_limited_to_small_n():
    with pytest.raises(AutomatonError):
        d3_oracle(cerny(5))


def test_unknown_engine(intro):
    with pytest.raises(AutomatonError):
        d3(intro, "nope")


def test_split_engine_budget():
    aut = Automaton(4, [Symbol(tuple([15] * 4))])
    with pytest.raises(BudgetExceeded):
        d3_via_split(aut, budget=10)


def test_report_invariants():
    with pytest.raises(ValueError):
        DirectingReport(False, 3, None, None, "x")
    with pytest.raises(ValueError):
        DirectingReport(True, 2, (0,), 1, "x")


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3), st.floats(0.0, 0.6), st.integers(0, 10**6))
def test_engines_agree(n, k, density, seed):
    aut = random_cnfa(n, k, density, seed)
    reps = [d3_implicit(aut), d3_via_split(aut), d3_oracle(aut)]
    assert len({(r.directing, r.length) for r in reps}) == 1
    for r in reps:
        if r.directing:
            res = verify_d3(aut, r.witness)
            assert res.accepted and res.sync_states >> (r.sync_state - 1) & 1
