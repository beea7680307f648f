import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from splitsync.catalog import cerny, cerny_cnfa
from splitsync.core import Automaton, AutomatonError, Symbol, add_identity, random_cnfa
from splitsync.split import (
    BUDGET_ENV, BudgetExceeded, det_subsymbols, full_split, gamma_contains, split_alphabet_size,
    split_at, subsymbol_count,
)

C = Symbol.from_sets([[1, 2], [1, 2]])


def test_split_at_intro(intro):
    out = split_at(intro, 1, "a")
    assert len(out) == 3
    assert Symbol.from_sets([[1], [2], [1]]) in out
    assert Symbol.from_sets([[3], [2], [1]]) in out
    assert intro.symbols[1] in out


def test_split_at_singleton_is_noop(intro):
    assert split_at(intro, 2, "a") == intro


def test_split_at_cerny_cnfa():
    out = split_at(cerny_cnfa(5), 1, "b")
    assert out.symbol_set == add_identity(cerny(5)).symbol_set


def test_split_at_unknown_symbol(intro):
    with pytest.raises(AutomatonError):
        split_at(intro, 1, "z")


def test_full_split_two_state_c():
    out = full_split(Automaton(2, [C])).automaton
    assert out.symbol_set == {
        Symbol.from_map([1, 1]), Symbol.from_map([2, 2]), Symbol.from_map([2, 1]), Symbol.identity(2)
    }


def test_full_split_of_dfa_is_itself():
    assert full_split(cerny(6)).automaton == cerny(6)


def test_full_split_cerny_cnfa():
    for n in range(2, 7):
        assert full_split(cerny_cnfa(n)).automaton == add_identity(cerny(n))


def test_full_split_provenance(intro):
    res = full_split(intro)
    for sym, prov in zip(res.automaton.symbols, res.provenance):
        assert prov
        assert all(all(x & ~y == 0 for x, y in zip(sym.images, intro.symbols[i].images)) for i in prov)


def test_budget_exceeded():
    aut = Automaton(4, [Symbol(tuple([15] * 4))])
    with pytest.raises(BudgetExceeded) as info:
        full_split(aut, budget=100)
    assert info.value.bound == 256


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "3")
    with pytest.raises(BudgetExceeded):
        full_split(Automaton(2, [C]))


def test_gamma_contains():
    q_all = Automaton(2, [C])
    assert gamma_contains(q_all, Symbol.from_map([2, 1]))


def test_gamma_contains_intro(intro):
    assert not gamma_contains(intro, Symbol.from_map([2, 2, 2]))
    dfa = cerny(3)
    assert all(gamma_contains(dfa, s) for s in dfa.symbols)


def test_det_subsymbols_counts(intro):
    assert list(det_subsymbols(cerny(3).symbols[0])) == [cerny(3).symbols[0]]
    assert len(list(det_subsymbols(C))) == 4
    assert subsymbol_count(intro.symbols[0]) == 2


def test_split_alphabet_size_examples():
    assert split_alphabet_size(cerny(5)) == 2
    assert split_alphabet_size(Automaton(2, [C])) == 4
    assert split_alphabet_size(cerny_cnfa(5)) == 3


def _iterated_split(aut):
    while True:
        for i, s in enumerate(aut.symbols):
            q = next((q for q, img in enumerate(s.images) if img & (img - 1)), None)
            if q is not None:
                aut = split_at(aut, q + 1, i)
                break
        else:
            return aut


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 10**6))
def test_split_alphabet_size_matches_listing(n, k, seed):
    aut = random_cnfa(n, k, 0.4, seed)
    assert split_alphabet_size(aut) == len(full_split(aut).automaton)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 10**6))
def test_iterated_split_at_reaches_full_split(n, k, seed):
    aut = random_cnfa(n, k, 0.3, seed)
    assert _iterated_split(aut) == full_split(aut).automaton


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 10**6))
def test_full_split_idempotent_and_order_free(n, k, seed):
    aut = random_cnfa(n, k, 0.3, seed)
    once = full_split(aut).automaton
    assert full_split(once).automaton == once
    syms = list(aut.symbols)
    random.Random(seed).shuffle(syms)
    assert full_split(Automaton(n, syms)).automaton == once


def test_gamma_matches_split_exhaustively_two_states():
    dets = [Symbol.from_map(t) for t in itertools.product([1, 2], repeat=2)]
    sets = [Symbol(imgs) for imgs in itertools.product(range(1, 4), repeat=2)]
    for a in sets:
        aut = Automaton(2, [a])
        split = full_split(aut).automaton.symbol_set
        for b in dets:
            assert gamma_contains(aut, b) == (b in split)
