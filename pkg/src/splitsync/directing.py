"""Shortest D3-directing words.

A word ``w`` is D3-directing when some state lies in ``q·w`` for every state
``q``. Three engines compute the shortest length:

* ``d3_via_split`` builds Split(A) and synchronizes the DFA,
* ``d3_implicit`` runs the same subset BFS without building Split(A),
* ``d3_oracle`` tracks every state's reachable set separately (small n only).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from ._backend import BUDGET_EXCEEDED, kernels
from .core import Automaton, AutomatonError, apply, apply_word
from .split import BudgetExceeded, default_budget, full_split

ORACLE_MAX_STATES = 4


@dataclass(frozen=True)
class DirectingReport:
    directing: bool
    length: int | None
    witness: tuple[int, ...] | None
    sync_state: int | None
    engine: str

    def __post_init__(self) -> None:
        if not self.directing and (self.length is not None or self.witness is not None):
            raise ValueError("a non-directing report carries no length or witness")
        if self.witness is not None and len(self.witness) != self.length:
            raise ValueError("witness length disagrees with reported length")

    def witness_names(self, aut: Automaton) -> list[str] | None:
        if self.witness is None:
            return None
        return [aut.names[i] for i in self.witness]


def _report(engine: str, length: int, word, state: int) -> DirectingReport:
    if length < 0:
        return DirectingReport(False, None, None, None, engine)
    return DirectingReport(True, length, tuple(word), state + 1, engine)


def dfa_shortest_sync(dfa: Automaton) -> DirectingReport:
    """Shortest synchronizing word of a DFA by BFS over subsets from ``Q``."""
    if not dfa.is_dfa:
        raise AutomatonError("dfa_shortest_sync needs a deterministic automaton")
    kern = kernels.SyncKernel([s.targets() for s in dfa.symbols], dfa.n)
    length, word, state = kern.search(range(len(dfa.symbols)))
    return _report("dfa", length, word, state)


def d3_via_split(aut: Automaton, budget: int | None = None) -> DirectingReport:
    result = full_split(aut, budget)
    rep = dfa_shortest_sync(result.automaton)
    if not rep.directing:
        return DirectingReport(False, None, None, None, "split")
    # each split letter lies inside some original symbol; use that one instead
    word = tuple(result.origin(i) for i in rep.witness)
    return DirectingReport(True, rep.length, word, rep.sync_state, "split")


def d3_implicit(aut: Automaton, budget: int | None = None) -> DirectingReport:
    budget = default_budget() if budget is None else budget
    images = [s.images for s in aut.symbols]
    length, word, state = kernels.nfa_search(images, aut.n, budget)
    if length == BUDGET_EXCEEDED:
        raise BudgetExceeded("choice images per node", budget + 1, budget)
    return _report("implicit", length, word, state)


def d3_oracle(aut: Automaton) -> DirectingReport:
    """Brute force straight from the definition: BFS over the tuple of
    reachable sets ``(1·w, ..., n·w)``, accepting when they share a state."""
    n = aut.n
    if n > ORACLE_MAX_STATES:
        raise AutomatonError(f"d3_oracle supports n <= {ORACLE_MAX_STATES}")
    start = tuple(1 << q for q in range(n))

    def common(cfg):
        m = (1 << n) - 1
        for s in cfg:
            m &= s
        return m

    if common(start):
        return DirectingReport(True, 0, (), (common(start) & -common(start)).bit_length(), "oracle")
    parent = {start: None}
    queue = deque([start])
    while queue:
        cfg = queue.popleft()
        for i, sym in enumerate(aut.symbols):
            nxt = tuple(apply(sym, s) for s in cfg)
            if nxt in parent:
                continue
            parent[nxt] = (cfg, i)
            meet = common(nxt)
            if meet:
                word = []
                cur = nxt
                while parent[cur] is not None:
                    cur, letter = parent[cur]
                    word.append(letter)
                word.reverse()
                return DirectingReport(True, len(word), tuple(word), (meet & -meet).bit_length(), "oracle")
            queue.append(nxt)
    return DirectingReport(False, None, None, None, "oracle")


ENGINES = {
    "implicit": d3_implicit,
    "split": d3_via_split,
    "oracle": lambda aut, budget=None: d3_oracle(aut),
}


def d3(aut: Automaton, engine: str = "implicit", budget: int | None = None) -> DirectingReport:
    try:
        fn = ENGINES[engine]
    except KeyError:
        raise AutomatonError(f"unknown engine {engine!r}") from None
    return fn(aut, budget)


@dataclass(frozen=True)
class Verification:
    accepted: bool
    sync_states: int
    end_sets: tuple[int, ...]


def verify_d3(aut: Automaton, word: Sequence[int]) -> Verification:
    """Evaluate ``q·w`` for every state and intersect."""
    ends = tuple(apply_word(aut, word, 1 << q) for q in range(aut.n))
    meet = (1 << aut.n) - 1
    for s in ends:
        meet &= s
    return Verification(bool(meet), meet, ends)
