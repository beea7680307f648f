"""The Split transformation from CNFAs to DFAs.

``split_at`` is the single-step version that replaces one nondeterministic
choice by fresh deterministic symbols. ``full_split`` produces its fixpoint
directly: the DFA whose alphabet is every deterministic symbol contained in
some symbol of the input. The two agree (splitting order does not matter), and
the direct route never builds the intermediate automata.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .core import Automaton, AutomatonError, Symbol, members, popcount, symbol_leq

DEFAULT_BUDGET = 10**6
BUDGET_ENV = "SPLITSYNC_BUDGET"


class BudgetExceeded(RuntimeError):
    """A configured resource cap was hit; ``bound`` is the offending size."""

    def __init__(self, what: str, bound: int, budget: int):
        super().__init__(f"{what} {bound} exceeds budget {budget}")
        self.what = what
        self.bound = bound
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise AutomatonError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    return DEFAULT_BUDGET


def _resolve(aut: Automaton, a: Symbol | int | str) -> int:
    if isinstance(a, Symbol):
        if a not in aut:
            raise AutomatonError("symbol is not in the automaton")
        return aut.index_of(a)
    if isinstance(a, str):
        if a not in aut.names:
            raise AutomatonError(f"no symbol named {a!r}")
        return aut.names.index(a)
    if not 0 <= a < len(aut.symbols):
        raise AutomatonError(f"symbol index {a} out of range")
    return a


def split_at(aut: Automaton, q_split: int, a: Symbol | int | str) -> Automaton:
    """Replace ``a`` by one symbol per choice in ``q_split·a`` (1-based state).

    The new symbols take ``a``'s place in the symbol order and are named
    ``<name>_<target>``; one that equals an existing symbol merges into it.
    """
    idx = _resolve(aut, a)
    if not 1 <= q_split <= aut.n:
        raise AutomatonError(f"state {q_split} out of range 1..{aut.n}")
    sym = aut.symbols[idx]
    name = aut.names[idx]
    img = sym.images[q_split - 1]
    if popcount(img) == 1:
        return aut
    new_syms, new_names = [], []
    for t in members(img):
        images = list(sym.images)
        images[q_split - 1] = 1 << (t - 1)
        new_syms.append(Symbol(tuple(images)))
        new_names.append(f"{name}_{t}")
    rest = [(s, nm) for i, (s, nm) in enumerate(zip(aut.symbols, aut.names)) if i != idx]
    # existing symbols keep their names when a new one coincides with them
    existing = {s: nm for s, nm in rest}
    syms = [s for s, _ in rest[:idx]] + new_syms + [s for s, _ in rest[idx:]]
    names = [nm for _, nm in rest[:idx]] + [existing.get(s, nm) for s, nm in zip(new_syms, new_names)] + [
        nm for _, nm in rest[idx:]
    ]
    kept_syms, kept_names, seen = [], [], set()
    for s, nm in zip(syms, names):
        if s in seen:
            continue
        seen.add(s)
        kept_syms.append(s)
        kept_names.append(nm)
    return Automaton(aut.n, kept_syms, kept_names)


def det_subsymbols(a: Symbol) -> Iterator[Symbol]:
    """Every deterministic symbol inside ``a``, each once.

    Order is lexicographic in the chosen targets, state 1 varying slowest.
    """
    choices = [[1 << (t - 1) for t in members(img)] for img in a.images]
    for combo in itertools.product(*choices):
        yield Symbol(combo)


def subsymbol_count(a: Symbol) -> int:
    out = 1
    for img in a.images:
        out *= popcount(img)
    return out


@dataclass(frozen=True)
class SplitResult:
    """``automaton`` is Split(A); ``provenance[i]`` holds the indices of the
    original symbols that contain ``automaton.symbols[i]``."""

    automaton: Automaton
    provenance: tuple[frozenset[int], ...]

    def origin(self, i: int) -> int:
        """Lowest-index original symbol containing produced symbol ``i``."""
        return min(self.provenance[i])


def _split_name(name: str, sym: Symbol, parent: Symbol) -> str:
    if sym == parent:
        return name
    return name + "_" + "".join(str(t + 1) for t in sym.targets())


def full_split(aut: Automaton, budget: int | None = None) -> SplitResult:
    """Split(A): all deterministic sub-symbols of A's symbols, deduplicated.

    Raises :class:`BudgetExceeded` when the undeduplicated count
    ``sum_a prod_q |q·a|`` is above ``budget``.
    """
    budget = default_budget() if budget is None else budget
    bound = sum(subsymbol_count(s) for s in aut.symbols)
    if bound > budget:
        raise BudgetExceeded("split alphabet", bound, budget)
    order: dict[Symbol, int] = {}
    syms: list[Symbol] = []
    names: list[str] = []
    prov: list[set[int]] = []
    for i, (a, name) in enumerate(zip(aut.symbols, aut.names)):
        for b in det_subsymbols(a):
            j = order.get(b)
            if j is None:
                order[b] = len(syms)
                syms.append(b)
                names.append(_split_name(name, b, a))
                prov.append({i})
            else:
                prov[j].add(i)
                if b == a:
                    names[j] = name
    # a name may repeat when two parents share a name prefix; disambiguate
    seen: dict[str, int] = {}
    for j, nm in enumerate(names):
        if nm in seen:
            seen[nm] += 1
            names[j] = f"{nm}#{seen[nm]}"
        else:
            seen[nm] = 0
    dfa = Automaton(aut.n, syms, names)
    return SplitResult(dfa, tuple(frozenset(p) for p in prov))


def gamma_contains(aut: Automaton, b: Symbol) -> bool:
    """Is the deterministic symbol ``b`` a letter of Split(A)?"""
    if not b.is_deterministic:
        raise AutomatonError("gamma_contains needs a deterministic symbol")
    if b.n != aut.n:
        raise AutomatonError("symbol and automaton differ in state count")
    return any(symbol_leq(b, a) for a in aut.symbols)


def split_alphabet_size(aut: Automaton) -> int:
    """Exact number of letters of Split(A), without listing them.

    Counts the union of the product sets ``{b : b ⊆ a}`` by branching on one
    state at a time over the symbols that still allow the current choices.
    """
    n = aut.n
    images = [s.images for s in aut.symbols]

    @lru_cache(maxsize=None)
    def count(alive: tuple[int, ...], q: int) -> int:
        if q == n:
            return 1
        union = 0
        for i in alive:
            union |= images[i][q]
        total = 0
        while union:
            low = union & -union
            union ^= low
            total += count(tuple(i for i in alive if images[i][q] & low), q + 1)
        return total

    if not images:
        return 0
    result = count(tuple(range(len(images))), 0)
    if result >= 2**63:
        raise OverflowError(f"split alphabet size {result} does not fit in 63 bits")
    return result
