"""Critical automata: inverting Split and counting basic critical CNFAs.

For a DFA ``D`` the symbol graph ``G(D)`` joins two letters that differ in
exactly one state. Merging the endpoints of any edge subset gives a CNFA whose
Split is ``D`` again; without 3- and 4-cycles in ``G(D)`` these are all the
pre-basic preimages. Basic critical CNFAs on ``n`` states are then obtained
from the basic critical DFAs ``D`` by inverting Split on ``D`` plus identity.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ._backend import kernels
from .core import (
    Automaton,
    AutomatonError,
    Symbol,
    add_identity,
    canonical_form,
    classify_basic,
    drop_identity,
    from_canonical,
    orbit_size,
    symbol_union,
)
from .directing import d3_implicit, d3_oracle, dfa_shortest_sync, ORACLE_MAX_STATES
from .split import full_split

log = logging.getLogger(__name__)


# -- symbol graph ----------------------------------------------------------------


@dataclass(frozen=True)
class SymbolGraph:
    """Undirected graph on a DFA's letters; edges are index pairs ``i < j``."""

    dfa: Automaton
    edges: tuple[tuple[int, int], ...]

    @property
    def names(self) -> tuple[str, ...]:
        return self.dfa.names

    def edge_names(self) -> list[tuple[str, str]]:
        return [(self.names[i], self.names[j]) for i, j in self.edges]

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.dfa.symbols]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def differing_states(a: Symbol, b: Symbol) -> list[int]:
    return [q for q, (x, y) in enumerate(zip(a.images, b.images)) if x != y]


def symbol_graph(dfa: Automaton) -> SymbolGraph:
    if not dfa.is_dfa:
        raise AutomatonError("symbol_graph needs a DFA")
    syms = dfa.symbols
    edges = tuple(
        (i, j)
        for i, j in itertools.combinations(range(len(syms)), 2)
        if len(differing_states(syms[i], syms[j])) == 1
    )
    return SymbolGraph(dfa, edges)


def has_short_cycle(graph: SymbolGraph) -> bool:
    """Does the graph contain a triangle or a 4-cycle?"""
    adj = graph.adjacency()
    for i, j in graph.edges:
        if adj[i] & adj[j]:
            return True
    # a 4-cycle u-v-w-x-u means u and w share two neighbours
    for u, w in itertools.combinations(range(len(adj)), 2):
        if len(adj[u] & adj[w]) >= 2:
            return True
    return False


def _edge_indices(graph: SymbolGraph, chosen: Iterable) -> list[tuple[int, int]]:
    names = graph.names
    out = []
    for e in chosen:
        i, j = e
        if isinstance(i, str):
            i, j = names.index(i), names.index(j)
        pair = (min(i, j), max(i, j))
        if pair not in graph.edges:
            raise AutomatonError(f"{names[pair[0]]}-{names[pair[1]]} is not an edge of the symbol graph")
        out.append(pair)
    return sorted(set(out))


def merge_cnfa(dfa: Automaton, chosen: Iterable, graph: SymbolGraph | None = None) -> Automaton:
    """``N(D, E')``: join the letters of every chosen edge into their union.

    Edges are given as index or name pairs. Letters on no chosen edge are kept
    as they are; a merged letter is named ``x|y``.
    """
    graph = graph or symbol_graph(dfa)
    pairs = _edge_indices(graph, chosen)
    covered = {i for p in pairs for i in p}
    syms, names = [], []
    for i, (s, nm) in enumerate(zip(dfa.symbols, dfa.names)):
        if i not in covered:
            syms.append(s)
            names.append(nm)
        for a, b in pairs:
            if a == i:
                syms.append(symbol_union(dfa.symbols[a], dfa.symbols[b]))
                names.append(f"{dfa.names[a]}|{dfa.names[b]}")
    return Automaton(dfa.n, syms, names)


@dataclass(frozen=True)
class InverseSplit:
    """Pre-basic CNFAs splitting to ``dfa``; ``complete`` when provably all."""

    dfa: Automaton
    graph: SymbolGraph
    members: tuple[Automaton, ...]
    complete: bool
    method: str


def inverse_split_enumerate(dfa: Automaton) -> InverseSplit:
    graph = symbol_graph(dfa)
    members = []
    for k in range(len(graph.edges) + 1):
        for chosen in itertools.combinations(graph.edges, k):
            members.append(merge_cnfa(dfa, chosen, graph))
    return InverseSplit(dfa, graph, tuple(members), not has_short_cycle(graph), "edges")


def _all_symbols(n: int) -> list[Symbol]:
    sets = range(1, 1 << n)
    return [Symbol(images) for images in itertools.product(sets, repeat=n)]


def inverse_split_bruteforce(dfa: Automaton) -> InverseSplit:
    """All pre-basic CNFAs with Split equal to ``dfa``, by enumeration (n = 2)."""
    if not dfa.is_dfa:
        raise AutomatonError("inverse split needs a DFA")
    if dfa.n != 2:
        raise AutomatonError("brute-force inverse split is only supported on 2 states")
    pool = [s for s in _all_symbols(2) if any(_contains(s, d) for d in dfa.symbols)]
    target = dfa.symbol_set
    found = []
    for k in range(1, len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            cand = Automaton(2, combo)
            if not classify_basic(cand)["is_pre_basic"]:
                continue
            if full_split(cand).automaton.symbol_set == target:
                found.append(cand)
    graph = symbol_graph(dfa)
    # prefer the edge-merge presentation (and its names) where it applies
    named = {m: m for m in inverse_split_enumerate(dfa).members}
    members = tuple(named.get(m, _fresh_names(m)) for m in found)
    return InverseSplit(dfa, graph, members, True, "bruteforce")


def _contains(a: Symbol, d: Symbol) -> bool:
    # a contributes to Split(N) = D only if every sub-letter of a is in D, so
    # a must at least contain one letter of D
    return all(x & y for x, y in zip(a.images, d.images))


def _fresh_names(aut: Automaton) -> Automaton:
    names = ["c" if i == 0 else f"c{i}" for i in range(len(aut.symbols))]
    return Automaton(aut.n, aut.symbols, names)


# -- critical DFAs to critical CNFAs ----------------------------------------------


def critical_length(n: int) -> int:
    return (n - 1) ** 2


@dataclass(frozen=True)
class DfaPreimages:
    """Basic critical CNFAs obtained from one basic critical DFA."""

    dfa: Automaton
    edges: tuple[tuple[str, str], ...]
    members: tuple[Automaton, ...]
    complete: bool
    method: str


def preimages_of(dfa: Automaton, check: bool = True) -> DfaPreimages:
    if check:
        if not dfa.is_dfa or not classify_basic(dfa)["is_basic"]:
            raise AutomatonError("expected a basic DFA")
        rep = dfa_shortest_sync(dfa)
        if rep.length != critical_length(dfa.n):
            raise AutomatonError(
                f"DFA is not critical: shortest synchronizing length {rep.length}, "
                f"expected {critical_length(dfa.n)}"
            )
    plus = add_identity(dfa)
    inv = inverse_split_enumerate(plus)
    if not inv.complete and plus.n == 2:
        inv = inverse_split_bruteforce(plus)
    members = tuple(drop_identity(m) for m in inv.members)
    return DfaPreimages(dfa, tuple(inv.graph.edge_names()), members, inv.complete, inv.method)


def basic_critical_from_dfa(dfa: Automaton) -> list[Automaton]:
    """Basic CNFAs ``N`` with Split(N + id) = D + id for a basic critical DFA ``D``."""
    return list(preimages_of(dfa).members)


# -- exhaustive search for basic critical DFAs ------------------------------------

SEARCH_MAX_STATES = 4


def symbol_pool(n: int) -> list[tuple[int, ...]]:
    """All non-identity maps on ``n`` states as 0-based target tuples, ordered."""
    ident = tuple(range(n))
    return [t for t in itertools.product(range(n), repeat=n) if t != ident]


def _relabel_map(t: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(t)
    for q, x in enumerate(t):
        out[perm[q]] = perm[x]
    return tuple(out)


def _orbit_min(index: dict, t: Sequence[int], perms) -> int:
    return min(index[_relabel_map(t, p)] for p in perms)


@dataclass
class _SearchState:
    n: int
    target: int
    pool: list
    index: dict
    kernel: object
    max_symbols: int | None


_WORKER: dict = {}


def _make_state(n: int, target: int, max_symbols: int | None) -> _SearchState:
    key = (n, target, max_symbols)
    st = _WORKER.get(key)
    if st is None:
        pool = symbol_pool(n)
        index = {t: i for i, t in enumerate(pool)}
        kern = kernels.SyncKernel(pool, n)
        st = _SearchState(n, target, pool, index, kern, max_symbols)
        _WORKER.clear()
        _WORKER[key] = st
    return st


def _dfs(st: _SearchState, chosen: list[int], cands: list[int], found: list, stats: dict) -> None:
    stats["nodes"] += 1
    kern = st.kernel
    d = kern.length(chosen)
    if d == st.target:
        found.append(tuple(chosen))
    elif d > st.target:
        found.append(tuple(chosen))
        log.warning("super-critical symbol set %s (length %d)", chosen, d)
    if st.max_symbols is not None and len(chosen) >= st.max_symbols:
        return
    # letters that on their own already shorten the word below target never fit
    cands = kern.filter(chosen, cands, st.target)
    if not cands:
        return
    if kern.length(chosen + cands) < 0:
        return
    for pos, c in enumerate(cands):
        _dfs(st, chosen + [c], cands[pos + 1 :], found, stats)


def _branch(args) -> tuple[int, list[tuple[int, ...]], int]:
    """Explore all symbol sets whose least member is the orbit minimum ``r``."""
    n, target, max_symbols, r = args
    st = _make_state(n, target, max_symbols)
    perms = list(itertools.permutations(range(n)))
    stab = [p for p in perms if _relabel_map(st.pool[r], p) == st.pool[r]]
    found: list[tuple[int, ...]] = []
    stats = {"nodes": 1}
    d = st.kernel.length([r])
    if d == target or (d > target):
        found.append((r,))
    if max_symbols is not None and max_symbols <= 1:
        return r, found, stats["nodes"]
    later = [j for j in range(r + 1, len(st.pool))]
    later = st.kernel.filter([r], later, target)
    if later and st.kernel.length([r] + later) >= 0:
        for pos, j in enumerate(later):
            # second letter reduced modulo the stabiliser of the first
            if _orbit_min(st.index, st.pool[j], stab) != j:
                continue
            _dfs(st, [r, j], later[pos + 1 :], found, stats)
    return r, found, stats["nodes"]


@dataclass
class SearchResult:
    n: int
    target: int
    forms: list            # canonical forms, sorted
    labeled: int           # number of labelled symbol sets, all relabellings
    nodes: int

    def automata(self) -> list[Automaton]:
        return [from_canonical(f) for f in self.forms]


def critical_dfa_search(
    n: int,
    target: int | None = None,
    jobs: int = 1,
    checkpoint: str | os.PathLike | None = None,
    progress: Callable[[int, int], None] | None = None,
    max_symbols: int | None = None,
    allow_large: bool = False,
) -> SearchResult:
    """All basic DFAs on ``n`` states whose shortest synchronizing word has
    length exactly ``target`` (default ``(n-1)^2``), up to isomorphism.

    Depth-first over letter sets in pool order. A set is only extended while
    its length stays at least ``target`` (adding letters never lengthens the
    word), and a branch is dropped once even all remaining admissible letters
    together do not synchronize. The first two levels are reduced by symmetry.

    ``checkpoint`` names a JSON file recording finished first-level branches;
    a rerun with the same file resumes after the last finished branch.
    """
    if not 2 <= n <= SEARCH_MAX_STATES and not (allow_large and n <= 6):
        raise AutomatonError(f"critical_dfa_search supports 2 <= n <= {SEARCH_MAX_STATES}")
    target = critical_length(n) if target is None else target
    st = _make_state(n, target, max_symbols)
    perms = list(itertools.permutations(range(n)))
    roots = [r for r, t in enumerate(st.pool) if _orbit_min(st.index, t, perms) == r]

    done: dict[str, list] = {}
    meta = {"n": n, "target": target, "max_symbols": max_symbols}
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            saved = json.load(fh)
        if saved.get("meta") != meta:
            raise AutomatonError(f"checkpoint {checkpoint} belongs to a different search")
        done = saved["done"]

    def save() -> None:
        if checkpoint:
            tmp = f"{checkpoint}.tmp"
            with open(tmp, "w") as fh:
                json.dump({"meta": meta, "done": done}, fh)
            os.replace(tmp, checkpoint)

    todo = [r for r in roots if str(r) not in done]
    nodes = 0
    args = [(n, target, max_symbols, r) for r in todo]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_branch, args)
            for r, found, cnt in results:
                done[str(r)] = [list(f) for f in found]
                nodes += cnt
                save()
                if progress:
                    progress(len(done), len(roots))
    else:
        for a in args:
            r, found, cnt = _branch(a)
            done[str(r)] = [list(f) for f in found]
            nodes += cnt
            save()
            if progress:
                progress(len(done), len(roots))

    forms = set()
    for found in done.values():
        for combo in found:
            aut = Automaton(n, [Symbol.from_map([x + 1 for x in st.pool[i]]) for i in combo])
            forms.add(canonical_form(aut))
    forms = sorted(forms)
    labeled = sum(orbit_size(from_canonical(f)) for f in forms)
    return SearchResult(n, target, forms, labeled, nodes)


# -- census -----------------------------------------------------------------------


@dataclass
class CensusDfa:
    label: str
    dfa: Automaton
    edges: tuple[tuple[str, str], ...]
    cnfa_count: int
    complete: bool
    method: str
    orbit: int


@dataclass
class CensusMember:
    automaton: Automaton
    source: int            # index into CensusReport.dfas
    d3: int
    verified_by: tuple[str, ...]


@dataclass
class CensusReport:
    n: int
    dfas: list[CensusDfa]
    members: list[CensusMember]
    counts_labeled: dict[str, int]
    counts_iso: dict[str, int]
    dfa_source: str
    notes: list[str] = field(default_factory=list)

    @property
    def all_verified(self) -> bool:
        target = critical_length(self.n)
        return all(m.d3 == target for m in self.members)


def critical_dfas_for(n: int, tier: str | None = None, jobs: int = 1, checkpoint=None,
                      progress=None) -> tuple[list[Automaton], str]:
    """Basic critical DFAs on ``n`` states, one per isomorphism class."""
    from . import catalog

    if n <= 3 or (n == 4 and tier == "extended"):
        res = critical_dfa_search(n, jobs=jobs, checkpoint=checkpoint, progress=progress)
        return res.automata(), "search"
    if n == 4:
        return catalog.critical_dfas(4), "golden"
    if n in (5, 6):
        special = "roman" if n == 5 else "kari"
        return [catalog.cerny(n), catalog.load(special).automaton], "catalog"
    raise AutomatonError("census supports 2 <= n <= 6")


def census(n: int, tier: str | None = None, jobs: int = 1, checkpoint=None, progress=None,
           dfas: Sequence[Automaton] | None = None) -> CensusReport:
    from . import catalog

    if dfas is None:
        dfas, source = critical_dfas_for(n, tier, jobs, checkpoint, progress)
    else:
        source = "given"
    target = critical_length(n)
    rows: list[CensusDfa] = []
    members: list[CensusMember] = []
    notes: list[str] = []
    seen: dict = {}
    labeled_dfas = labeled_cnfas = 0
    for k, dfa in enumerate(dfas):
        dfa = catalog.label_dfa(dfa)
        pre = preimages_of(dfa)
        orbit = orbit_size(dfa)
        rows.append(CensusDfa(catalog.describe(dfa), dfa, pre.edges, len(pre.members), pre.complete,
                              pre.method, orbit))
        if not pre.complete:
            notes.append(f"preimages of {catalog.describe(dfa)} may be incomplete")
        labeled_dfas += orbit
        labeled_cnfas += orbit * len(pre.members)
        for m in pre.members:
            form = canonical_form(m)
            if form in seen:
                prev = members[seen[form]]
                if prev.source != k:
                    raise AssertionError("two critical DFAs share a preimage")
                continue
            seen[form] = len(members)
            rep = d3_implicit(m)
            by = ["implicit"]
            if n <= ORACLE_MAX_STATES:
                if d3_oracle(m).length != rep.length:
                    raise AssertionError(f"engines disagree on {m}")
                by.append("oracle")
            members.append(CensusMember(m, k, rep.length if rep.directing else -1, tuple(by)))
            if rep.length != target:
                notes.append(f"member {m} has d3 {rep.length}, expected {target}")
    labeled_check = sum(orbit_size(m.automaton) for m in members)
    if labeled_check != labeled_cnfas:
        notes.append(f"labelled count mismatch: {labeled_cnfas} by source, {labeled_check} by orbit")
    counts_iso = {"dfas": len(rows), "cnfas": len(members)}
    counts_labeled = {"dfas": labeled_dfas, "cnfas": labeled_cnfas}
    return CensusReport(n, rows, members, counts_labeled, counts_iso, source, notes)


