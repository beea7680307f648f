import itertools
import json

import pytest

from splitsync import catalog
from splitsync.catalog import cerny, cerny_cnfa, two_state
from splitsync.core import (
    Automaton, AutomatonError, Symbol, add_identity, canonical_form, drop_identity, extension_leq,
    symbol_union,
)
from splitsync.critical import (
    basic_critical_from_dfa, census, critical_dfa_search, differing_states, has_short_cycle,
    inverse_split_bruteforce, inverse_split_enumerate, merge_cnfa, preimages_of, symbol_graph,
)
from splitsync.directing import dfa_shortest_sync
from splitsync.split import full_split

A3 = catalog.load("a3").automaton
A3P = add_identity(A3)


def _edges(graph):
    return {frozenset(e) for e in graph.edge_names()}


def test_a3_plus_graph():
    g = symbol_graph(A3P)
    assert _edges(g) == {frozenset("bc"), frozenset(("b", "id")), frozenset("de")}
    assert not has_short_cycle(g)


def test_cerny_plus_graph():
    # on two states C_2 is the swap plus a constant, whose graph has two edges
    for n in range(3, 7):
        assert _edges(symbol_graph(add_identity(cerny(n)))) == {frozenset(("b", "id"))}


def test_roman_kari_graphs_empty():
    for name in ("roman", "kari"):
        assert symbol_graph(add_identity(catalog.load(name).automaton)).edges == ()


def test_edge_rule_matches_definition():
    for dfa in (A3P, add_identity(catalog.load("a4").automaton), add_identity(two_state())):
        g = symbol_graph(dfa)
        for i, j in itertools.combinations(range(len(dfa)), 2):
            diff = differing_states(dfa.symbols[i], dfa.symbols[j])
            assert ((i, j) in g.edges) == (len(diff) == 1)


def test_symbol_graph_needs_dfa(intro):
    with pytest.raises(AutomatonError):
        symbol_graph(intro)


def test_two_state_four_cycle():
    g = symbol_graph(add_identity(two_state()))
    assert len(g.edges) == 4
    assert has_short_cycle(g)


def test_empty_graph_no_short_cycle():
    assert not has_short_cycle(symbol_graph(cerny(4)))


def test_triangle_detected():
    # three letters pairwise differing only at state 1
    dfa = Automaton(2, [Symbol.from_map([1, 1]), Symbol.from_map([2, 1])])
    g = symbol_graph(add_identity(Automaton(3, [
        Symbol.from_map([1, 1, 1]), Symbol.from_map([2, 1, 1]), Symbol.from_map([3, 1, 1])])))
    assert has_short_cycle(g)
    assert not has_short_cycle(symbol_graph(dfa))


def test_merge_a3():
    m = merge_cnfa(A3P, [("b", "c"), ("d", "e")])
    assert len(m) == 4
    s = {nm: sym for sym, nm in zip(m.symbols, m.names)}
    assert s["b|c"] == symbol_union(A3.symbols[1], A3.symbols[2])
    assert set(m.names) == {"a", "b|c", "d|e", "id"}


def test_merge_empty_is_identity():
    assert merge_cnfa(A3P, []) == A3P


def test_merge_cerny():
    for n in range(3, 7):
        assert drop_identity(merge_cnfa(add_identity(cerny(n)), [("b", "id")])) == cerny_cnfa(n)


def test_merge_rejects_non_edge():
    with pytest.raises(AutomatonError):
        merge_cnfa(A3P, [("a", "b")])


def test_merged_letters_have_one_choice():
    inv = inverse_split_enumerate(A3P)
    for m in inv.members:
        for s in m.symbols:
            sizes = [bin(img).count("1") for img in s.images]
            assert sum(1 for k in sizes if k > 1) <= 1 and max(sizes) <= 2


def test_inverse_split_a3():
    inv = inverse_split_enumerate(A3P)
    assert len(inv.members) == 8 and inv.complete
    for m in inv.members:
        assert full_split(m).automaton == A3P


def test_inverse_split_t42():
    t42 = add_identity(catalog.load("t42").automaton)
    inv = inverse_split_enumerate(t42)
    assert inv.members == (t42,) and inv.complete


def test_round_trip_cerny():
    for n in range(2, 7):
        plus = add_identity(cerny(n))
        for m in inverse_split_enumerate(plus).members:
            assert full_split(m).automaton == plus


def test_two_state_enumerate_incomplete():
    inv = inverse_split_enumerate(add_identity(two_state()))
    assert len(inv.members) == 16 and not inv.complete


def test_two_state_bruteforce():
    plus = add_identity(two_state())
    brute = inverse_split_bruteforce(plus)
    assert len(brute.members) == 17
    extra = set(brute.members) - set(inverse_split_enumerate(plus).members)
    assert extra == {Automaton(2, [Symbol.from_sets([[1, 2], [1, 2]])])}


def test_bruteforce_matches_enumerate_without_short_cycles():
    dfa = add_identity(Automaton(2, [Symbol.from_map([1, 1])]))
    assert set(inverse_split_bruteforce(dfa).members) == set(inverse_split_enumerate(dfa).members)


def test_bruteforce_empty_graph():
    dfa = Automaton(2, [Symbol.from_map([1, 1]), Symbol.from_map([2, 2])])
    assert inverse_split_bruteforce(dfa).members == (dfa,)


def test_bruteforce_only_two_states():
    with pytest.raises(AutomatonError):
        inverse_split_bruteforce(A3P)


def test_basic_critical_from_dfa_examples():
    for n in range(3, 7):
        got = basic_critical_from_dfa(cerny(n))
        assert set(got) == {cerny(n), cerny_cnfa(n)}
    assert len(basic_critical_from_dfa(A3.restrict("acd"))) == 1
    assert len(basic_critical_from_dfa(catalog.load("a4").automaton)) == 4


def test_basic_critical_from_dfa_rejects():
    with pytest.raises(AutomatonError):
        basic_critical_from_dfa(add_identity(cerny(3)))
    with pytest.raises(AutomatonError):
        basic_critical_from_dfa(Automaton(3, [Symbol.from_map([1, 1, 1])]))


def test_search_two_states():
    res = critical_dfa_search(2)
    assert len(res.forms) == 4 and res.labeled == 6


def test_search_three_states():
    res = critical_dfa_search(3)
    assert len(res.forms) == 15 and res.labeled == 90
    for aut in res.automata():
        assert dfa_shortest_sync(aut).length == 4
        assert any(canonical_form(sub) == canonical_form(aut) for _, sub in catalog.restrictions(A3))


def test_search_range():
    with pytest.raises(AutomatonError):
        critical_dfa_search(5)


def test_search_checkpoint_resume(tmp_path):
    ckpt = tmp_path / "s.json"
    seen = []
    full = critical_dfa_search(3, checkpoint=ckpt, progress=lambda d, t: seen.append((d, t)))
    assert seen[-1][0] == seen[-1][1]
    saved = json.loads(ckpt.read_text())
    dropped = sorted(saved["done"], key=int)[-2:]
    for k in dropped:
        del saved["done"][k]
    ckpt.write_text(json.dumps(saved))
    again = critical_dfa_search(3, checkpoint=ckpt)
    assert again.forms == full.forms
    assert again.nodes < full.nodes


def test_search_checkpoint_mismatch(tmp_path):
    ckpt = tmp_path / "s.json"
    critical_dfa_search(2, checkpoint=ckpt)
    with pytest.raises(AutomatonError):
        critical_dfa_search(3, checkpoint=ckpt)


def test_search_parallel_matches_serial():
    assert critical_dfa_search(3, jobs=2).forms == critical_dfa_search(3).forms


def test_census_two():
    rep = census(2)
    assert rep.counts_labeled == {"dfas": 6, "cnfas": 33}
    assert rep.counts_iso == {"dfas": 4, "cnfas": 20}
    assert rep.all_verified and not rep.notes


def test_census_three_members_extend_critical_dfas():
    rep = census(3)
    assert rep.counts_iso == {"dfas": 15, "cnfas": 50}
    dfas = [r.dfa for r in rep.dfas]
    for m in rep.members:
        assert any(extension_leq(d, m.automaton) for d in dfas)
        assert m.verified_by == ("implicit", "oracle")


def test_census_no_isomorphic_members():
    rep = census(3)
    forms = [canonical_form(m.automaton) for m in rep.members]
    assert len(set(forms)) == len(forms)


def test_census_given_dfas():
    rep = census(4, dfas=[cerny(4)])
    assert rep.counts_iso == {"dfas": 1, "cnfas": 2}
    assert rep.dfas[0].label == "c4"


def test_preimages_counts_follow_edges():
    for sub in catalog.critical_dfas(3):
        pre = preimages_of(sub)
        assert pre.complete
        assert len(pre.members) == 2 ** len(pre.edges)
