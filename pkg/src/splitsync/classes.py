"""CNFA classes with improved directing-length bounds.

Each detector returns a :class:`Verdict`; a positive verdict carries a
certificate that the matching ``check_*`` function (or the definition itself)
re-validates. ``best_bound`` collects the bounds of all classes an automaton
belongs to.

Orders are given as tuples of 1-based states, smallest first.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Any, Sequence

from .core import Automaton, AutomatonError, Symbol, members, popcount
from .split import BUDGET_ENV, DEFAULT_BUDGET, BudgetExceeded

ORDER_SEARCH_MAX_STATES = 10


@dataclass(frozen=True)
class Verdict:
    status: str                 # "member", "non-member" or "undecided"
    certificate: Any = None
    reason: str = ""

    @property
    def member(self) -> bool:
        return self.status == "member"

    def __bool__(self) -> bool:
        return self.member


MEMBER = "member"
NON_MEMBER = "non-member"
UNDECIDED = "undecided"


def _member(cert: Any) -> Verdict:
    return Verdict(MEMBER, cert)


def _no(reason: str = "") -> Verdict:
    return Verdict(NON_MEMBER, None, reason)


# -- graph helpers on bitmask adjacency -------------------------------------------


def _closure(succ: Sequence[int]) -> list[int]:
    """Reflexive-transitive reachability sets, one bitmask per state."""
    n = len(succ)
    reach = [(1 << q) | succ[q] for q in range(n)]
    changed = True
    while changed:
        changed = False
        for q in range(n):
            m = reach[q]
            acc = m
            rest = m
            while rest:
                low = rest & -rest
                rest ^= low
                acc |= reach[low.bit_length() - 1]
            if acc != m:
                reach[q] = acc
                changed = True
    return reach


def _strongly_connected(succ: Sequence[int]) -> bool:
    full = (1 << len(succ)) - 1
    return all(r == full for r in _closure(succ))


def terminal_components(succ: Sequence[int]) -> list[int]:
    """Terminal strongly connected components, as state bitmasks."""
    reach = _closure(succ)
    comps = set()
    for q, r in enumerate(reach):
        # q is terminal iff every state it reaches reaches q back
        if all(reach[p] >> q & 1 for p in _bits(r)):
            comps.add(r)
    return sorted(comps)


def _indegrees(succ: Sequence[int]) -> list[int]:
    n = len(succ)
    return [sum(1 for p in range(n) if succ[p] >> q & 1) for q in range(n)]


def underlying_successors(aut: Automaton) -> list[int]:
    succ = [0] * aut.n
    for s in aut.symbols:
        for q, img in enumerate(s.images):
            succ[q] |= img
    return succ


def is_strongly_connected_underlying(aut: Automaton) -> bool:
    return _strongly_connected(underlying_successors(aut))


# -- cyclic ------------------------------------------------------------------------


def _hamiltonian_cycle(succ: Sequence[int]) -> tuple[int, ...] | None:
    """A Hamiltonian cycle through 0 by subset DP, as a 0-based state sequence."""
    n = len(succ)
    if n == 1:
        return (0,) if succ[0] & 1 else None
    full = (1 << n) - 1
    # ends[mask]: bitmask of v such that a path 0 -> ... -> v visits exactly mask
    ends = [0] * (1 << n)
    ends[1] = 1
    for mask in range(1, 1 << n, 2):
        e = ends[mask]
        while e:
            low = e & -e
            e ^= low
            v = low.bit_length() - 1
            nxt = succ[v] & ~mask
            while nxt:
                w = nxt & -nxt
                nxt ^= w
                ends[mask | w] |= w
    closing = [v for v in range(1, n) if ends[full] >> v & 1 and succ[v] & 1]
    if not closing:
        return None
    path = [closing[0]]
    mask = full
    while len(path) < n:
        v = path[-1]
        prev_mask = mask & ~(1 << v)
        cands = ends[prev_mask]
        u = next(u for u in range(n) if cands >> u & 1 and succ[u] >> v & 1)
        path.append(u)
        mask = prev_mask
    path.reverse()
    return tuple(path)


def is_cyclic(aut: Automaton) -> Verdict:
    """Some letter's graph has a Hamiltonian cycle; certificate ``(name, order)``."""
    for s, nm in zip(aut.symbols, aut.names):
        cyc = _hamiltonian_cycle(s.images)
        if cyc is not None:
            return _member((nm, tuple(q + 1 for q in cyc)))
    return _no("no letter has a Hamiltonian cycle")


def check_cyclic(aut: Automaton, name: str, order: Sequence[int]) -> bool:
    s = aut.symbols[aut.names.index(name)]
    n = aut.n
    if sorted(order) != list(range(1, n + 1)):
        return False
    return all(s.images[order[i] - 1] >> (order[(i + 1) % n] - 1) & 1 for i in range(n))


# -- one-cluster -------------------------------------------------------------------


def is_one_cluster(aut: Automaton, cross_check: bool = False) -> Verdict:
    """Some letter's graph has a single terminal strongly connected component.

    Certificate ``(name, p)`` with ``p`` a state reachable from every state.
    """
    for s, nm in zip(aut.symbols, aut.names):
        reach = _closure(s.images)
        common = (1 << aut.n) - 1
        for r in reach:
            common &= r
        verdict = common != 0
        if cross_check and verdict != _one_cluster_pairwise(s):
            raise AssertionError(f"one-cluster formulations disagree on letter {nm}")
        if verdict:
            return _member((nm, members(common)[0]))
    counts = [len(terminal_components(s.images)) for s in aut.symbols]
    return _no(f"terminal component counts per letter: {counts}")


def _one_cluster_pairwise(s: Symbol) -> bool:
    reach = _closure(s.images)
    return all(reach[q] & reach[r] for q in range(s.n) for r in range(q + 1, s.n))


def one_cluster_pairwise(aut: Automaton) -> bool:
    """Pairwise formulation: some letter under which any two states reach a common state."""
    return any(_one_cluster_pairwise(s) for s in aut.symbols)


def check_one_cluster(aut: Automaton, name: str, p: int) -> bool:
    s = aut.symbols[aut.names.index(name)]
    return all(r >> (p - 1) & 1 for r in _closure(s.images))


# -- monotonic and orientable --------------------------------------------------------


def _pos_table(order: Sequence[int]) -> list[int]:
    pos = [0] * len(order)
    for i, q in enumerate(order):
        pos[q - 1] = i
    return pos


def _max_pos(img: int, pos: Sequence[int]) -> int:
    return max(pos[q - 1] for q in members(img))


def _min_pos(img: int, pos: Sequence[int]) -> int:
    return min(pos[q - 1] for q in members(img))


def check_monotonic_order(aut: Automaton, order: Sequence[int]) -> bool:
    """``max(q·a) <= min(q'·a)`` for every letter and every ``q < q'`` in ``order``."""
    if sorted(order) != list(range(1, aut.n + 1)):
        return False
    pos = _pos_table(order)
    for s in aut.symbols:
        lo = [_min_pos(s.images[q - 1], pos) for q in order]
        hi = [_max_pos(s.images[q - 1], pos) for q in order]
        for i in range(aut.n - 1):
            for j in range(i + 1, aut.n):
                if hi[i] > lo[j]:
                    return False
    return True


def _orient_violations(s: Symbol, order: Sequence[int], pos: Sequence[int]) -> int:
    n = len(order)
    bad = 0
    for i in range(n):
        a = s.images[order[i] - 1]
        b = s.images[order[(i + 1) % n] - 1]
        if _max_pos(a, pos) > _min_pos(b, pos):
            bad += 1
    return bad


def check_orientable_order(aut: Automaton, order: Sequence[int]) -> bool:
    """At most one violated ``max(q_i·a) <= min(q_{i+1}·a)`` per letter, cyclically."""
    if sorted(order) != list(range(1, aut.n + 1)):
        return False
    pos = _pos_table(order)
    return all(_orient_violations(s, order, pos) <= 1 for s in aut.symbols)


def _partial_bad(x: int, y: int, pos: list[int]) -> bool:
    """Is ``max(x) <= min(y)`` already violated when placed states carry
    positions and unplaced ones (-1) will come after all placed ones?"""
    placed_y = [pos[q] for q in _bits(y) if pos[q] >= 0]
    if not placed_y:
        return False
    lo_y = min(placed_y)
    for q in _bits(x):
        p = pos[q]
        if p < 0 or p > lo_y:
            return True
    return False


def _bits(m: int) -> list[int]:
    out = []
    q = 0
    while m:
        if m & 1:
            out.append(q)
        m >>= 1
        q += 1
    return out


def _search_order(aut: Automaton, cyclic: bool) -> tuple[int, ...] | None:
    n = aut.n
    if n > ORDER_SEARCH_MAX_STATES:
        raise AutomatonError(f"order search supports n <= {ORDER_SEARCH_MAX_STATES}")
    images = [s.images for s in aut.symbols]
    pos = [-1] * n
    order: list[int] = []

    def consistent() -> bool:
        k = len(order)
        if cyclic:
            # only consecutive pairs of the cyclic order are constrained
            pairs = [(order[i], order[i + 1]) for i in range(k - 1)]
            if k == n:
                pairs.append((order[-1], order[0]))
            for img in images:
                bad = sum(1 for q, r in pairs if _partial_bad(img[q], img[r], pos))
                if bad > 1:
                    return False
            return True
        for img in images:
            for i in range(k):
                q = order[i]
                for j in range(i + 1, k):
                    if _partial_bad(img[q], img[order[j]], pos):
                        return False
        return True

    def extend() -> bool:
        if len(order) == n:
            return True
        for q in range(n):
            if pos[q] >= 0:
                continue
            pos[q] = len(order)
            order.append(q)
            if consistent() and extend():
                return True
            order.pop()
            pos[q] = -1
        return False

    if extend():
        return tuple(q + 1 for q in order)
    return None


def is_monotonic(aut: Automaton) -> Verdict:
    """Search for a linear order making every letter monotone (strict pairs)."""
    if aut.n > ORDER_SEARCH_MAX_STATES:
        return Verdict(UNDECIDED, None, f"order search limited to n <= {ORDER_SEARCH_MAX_STATES}")
    order = _search_order(aut, cyclic=False)
    if order is None:
        return _no("no linear order works")
    assert check_monotonic_order(aut, order)
    return _member(order)


def is_orientable(aut: Automaton) -> Verdict:
    if aut.n > ORDER_SEARCH_MAX_STATES:
        return Verdict(UNDECIDED, None, f"order search limited to n <= {ORDER_SEARCH_MAX_STATES}")
    order = _search_order(aut, cyclic=True)
    if order is None:
        return _no("no order leaves at most one violation per letter")
    assert check_orientable_order(aut, order)
    return _member(order)


# -- strongly Eulerian -------------------------------------------------------------


def symbol_degrees(s: Symbol) -> tuple[list[int], list[int]]:
    outdeg = [popcount(img) for img in s.images]
    return outdeg, _indegrees(s.images)


def is_strongly_eulerian(aut: Automaton) -> Verdict:
    """Every letter's graph is strongly connected with one common in/out degree.

    Certificate: ``{name: k}`` with ``k`` the degree of that letter's graph.
    """
    degrees = {}
    for s, nm in zip(aut.symbols, aut.names):
        if not _strongly_connected(s.images):
            return _no(f"graph of {nm} is not strongly connected")
        outdeg, indeg = symbol_degrees(s)
        if len(set(outdeg) | set(indeg)) != 1:
            return _no(f"graph of {nm} has degrees out={outdeg} in={indeg}")
        degrees[nm] = outdeg[0]
    return _member(degrees)


def split_multigraph_degrees(aut: Automaton) -> tuple[list[int], list[int]]:
    """Out- and indegrees of the underlying multigraph of Split(A), counting one
    edge per deterministic sub-letter of every letter (no deduplication)."""
    n = aut.n
    outdeg = [0] * n
    indeg = [0] * n
    for s in aut.symbols:
        sizes = [popcount(img) for img in s.images]
        total = 1
        for k in sizes:
            total *= k
        for q, img in enumerate(s.images):
            outdeg[q] += total
            per_target = total // sizes[q]
            for p in _bits(img):
                indeg[p] += per_target
    return outdeg, indeg


# -- aperiodicity and the monoid property ------------------------------------------


def monoid_cap() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def _compose(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    """Relation ``x`` followed by ``y``."""
    out = []
    for img in x:
        acc = 0
        q = 0
        while img:
            if img & 1:
                acc |= y[q]
            img >>= 1
            q += 1
        out.append(acc)
    return tuple(out)


def transition_monoid(aut: Automaton, cap: int | None = None) -> set[tuple[int, ...]] | None:
    """All relations ``q -> q·w`` for nonempty words, or ``None`` past ``cap``."""
    cap = monoid_cap() if cap is None else cap
    gens = [s.images for s in aut.symbols]
    seen = set(gens)
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        return None
                    nxt.append(y)
        frontier = nxt
    return seen


def _orbit_settles(m: tuple[int, ...], q: int, singleton: bool) -> bool:
    """Does ``q·m^k`` reach a fixed point (a singleton one if asked)?"""
    cur = 1 << q
    seen = set()
    while cur not in seen:
        seen.add(cur)
        nxt = 0
        for p in _bits(cur):
            nxt |= m[p]
        if nxt == cur:
            return not singleton or popcount(cur) == 1
        cur = nxt
    return False


@dataclass(frozen=True)
class SettlingVerdict(Verdict):
    strongly_connected: bool = False
    monoid_size: int | None = None


def satisfies_settling(aut: Automaton, cap: int | None = None) -> SettlingVerdict:
    """Every word ``w`` and state ``q`` have ``q·w^k = q·w^(k+1)`` of size one.

    Also reports strong connectivity of the underlying digraph; both together
    give the aperiodic bound.
    """
    sc = is_strongly_connected_underlying(aut)
    mon = transition_monoid(aut, cap)
    if mon is None:
        return SettlingVerdict(UNDECIDED, None, "transition monoid exceeds cap", sc, None)
    for m in mon:
        for q in range(aut.n):
            if not _orbit_settles(m, q, singleton=True):
                return SettlingVerdict(NON_MEMBER, None, f"state {q + 1} under {m} never settles on one state",
                                    sc, len(mon))
    return SettlingVerdict(MEMBER, len(mon), "", sc, len(mon))


def dfa_is_aperiodic(dfa: Automaton, cap: int | None = None) -> bool:
    if not dfa.is_dfa:
        raise AutomatonError("dfa_is_aperiodic needs a DFA")
    cap = monoid_cap() if cap is None else cap
    mon = transition_monoid(dfa, cap)
    if mon is None:
        raise BudgetExceeded("transition monoid", cap + 1, cap)
    return all(_orbit_settles(m, q, singleton=False) for m in mon for q in range(dfa.n))


# -- bounds ------------------------------------------------------------------------


def class_bounds(n: int) -> dict[str, int]:
    return {
        "monotonic": n - 1,
        "strongly_eulerian": (n - 2) * (n - 1) + 1,
        "cyclic": (n - 1) ** 2,
        "orientable": (n - 1) ** 2,
        "one_cluster": 2 * n * n - 7 * n + 7,
        "aperiodic": n * (n + 1) // 6,
        "general": (n**3 - n) // 6,
        "imreh": n * (n - 1) * (n - 2) // 2 + 1,
    }


@dataclass
class ClassReport:
    verdicts: dict[str, Verdict]
    bounds: list[tuple[str, int]] = field(default_factory=list)

    @property
    def tightest(self) -> tuple[str, int]:
        return min(self.bounds, key=lambda cb: cb[1])


def classify(aut: Automaton) -> ClassReport:
    n = aut.n
    verdicts: dict[str, Verdict] = {
        "cyclic": is_cyclic(aut),
        "one_cluster": is_one_cluster(aut),
        "monotonic": is_monotonic(aut),
        "orientable": is_orientable(aut),
        "strongly_eulerian": is_strongly_eulerian(aut),
        "aperiodic": satisfies_settling(aut),
    }
    table = class_bounds(n)
    bounds = []
    for name in ("monotonic", "strongly_eulerian", "cyclic", "orientable", "one_cluster"):
        if verdicts[name].member:
            bounds.append((name, table[name]))
    ap = verdicts["aperiodic"]
    if ap.member and ap.strongly_connected:
        bounds.append(("aperiodic", table["aperiodic"]))
    bounds.append(("general", table["general"]))
    bounds.append(("imreh", table["imreh"]))
    return ClassReport(verdicts, bounds)


def best_bound(aut: Automaton) -> ClassReport:
    return classify(aut)
