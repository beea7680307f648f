"""Automata data model: state sets, symbols as relations, automata.

States are numbered ``1..n`` in every user-facing surface. Internally a state
set is an ``int`` bitmask where bit ``q - 1`` stands for state ``q``; a symbol
stores one such mask per state.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_STATES = 16


class AutomatonError(ValueError):
    """Raised for malformed symbols, automata or words."""


def stateset(*states: int) -> int:
    """Build a state-set bitmask from 1-based state numbers."""
    m = 0
    for q in states:
        if q < 1:
            raise AutomatonError(f"state {q} out of range")
        m |= 1 << (q - 1)
    return m


def members(mask: int) -> tuple[int, ...]:
    """The 1-based states in ``mask``, ascending."""
    out = []
    q = 1
    while mask:
        if mask & 1:
            out.append(q)
        mask >>= 1
        q += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_STATES:
        raise AutomatonError(f"state count {n} outside 1..{MAX_STATES}")


@dataclass(frozen=True, order=True)
class Symbol:
    """A total map from states to nonempty state sets.

    ``images[q - 1]`` is the bitmask of ``q·a``. Two symbols are equal iff they
    act identically; names are carried by :class:`Automaton`, not here.
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        _check_n(n)
        full = (1 << n) - 1
        for q, img in enumerate(self.images, 1):
            if img == 0:
                raise AutomatonError(f"empty image at state {q}")
            if img & ~full:
                raise AutomatonError(f"image of state {q} leaves 1..{n}")

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> "Symbol":
        return cls(tuple(stateset(*s) for s in sets))

    @classmethod
    def from_map(cls, targets: Sequence[int]) -> "Symbol":
        """Deterministic symbol from 1-based targets, ``targets[q-1] = q·a``."""
        return cls(tuple(stateset(t) for t in targets))

    @classmethod
    def identity(cls, n: int) -> "Symbol":
        return cls(tuple(1 << q for q in range(n)))

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def is_deterministic(self) -> bool:
        return all(img & (img - 1) == 0 for img in self.images)

    @property
    def is_identity(self) -> bool:
        return all(img == 1 << q for q, img in enumerate(self.images))

    def targets(self) -> tuple[int, ...]:
        """0-based targets of a deterministic symbol."""
        if not self.is_deterministic:
            raise AutomatonError("symbol is not deterministic")
        return tuple(img.bit_length() - 1 for img in self.images)

    def sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(members(img) for img in self.images)

    def __repr__(self) -> str:
        body = "; ".join(",".join(map(str, s)) for s in self.sets())
        return f"Symbol({body})"


def apply(sym: Symbol, s: int) -> int:
    """Image ``S·a`` of the state set ``s`` (union of the states' images)."""
    out = 0
    images = sym.images
    q = 0
    while s:
        if s & 1:
            out |= images[q]
        s >>= 1
        q += 1
    return out


def symbol_leq(b: Symbol, a: Symbol) -> bool:
    """``b ⊆ a`` as edge sets: every image of ``b`` inside the one of ``a``."""
    if b.n != a.n:
        raise AutomatonError("symbols on different state counts")
    return all(x & ~y == 0 for x, y in zip(b.images, a.images))


def symbol_union(a: Symbol, b: Symbol) -> Symbol:
    if a.n != b.n:
        raise AutomatonError("symbols on different state counts")
    return Symbol(tuple(x | y for x, y in zip(a.images, b.images)))


class Automaton:
    """A CNFA ``(Q, Σ)`` with ``Q = {1..n}``; a DFA when all symbols are.

    The alphabet is a set: duplicates are dropped on construction (first
    occurrence wins, keeping its name). Order is kept for display and word
    indexing only; equality and hashing ignore both order and names.
    """

    __slots__ = ("n", "symbols", "names", "_key")

    def __init__(self, n: int, symbols: Iterable[Symbol], names: Iterable[str] | None = None):
        _check_n(n)
        symbols = list(symbols)
        names = list(names) if names is not None else None
        if names is not None and len(names) != len(symbols):
            raise AutomatonError("names and symbols differ in length")
        seen: set[Symbol] = set()
        keep_syms, keep_names = [], []
        for i, sym in enumerate(symbols):
            if sym.n != n:
                raise AutomatonError(f"symbol {i} has {sym.n} states, expected {n}")
            if sym in seen:
                continue
            seen.add(sym)
            keep_syms.append(sym)
            keep_names.append(names[i] if names is not None else None)
        self.n = n
        self.symbols: tuple[Symbol, ...] = tuple(keep_syms)
        if names is None:
            keep_names = default_names(len(keep_syms))
        self.names: tuple[str, ...] = tuple(keep_names)
        self._key = frozenset(self.symbols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automaton):
            return NotImplemented
        return self.n == other.n and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.n, self._key))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, sym: Symbol) -> bool:
        return sym in self._key

    def __repr__(self) -> str:
        kind = "DFA" if self.is_dfa else "CNFA"
        body = ", ".join(f"{nm}={s!r}" for nm, s in zip(self.names, self.symbols))
        return f"{kind}(n={self.n}, {body})"

    @property
    def symbol_set(self) -> frozenset[Symbol]:
        return self._key

    @property
    def is_dfa(self) -> bool:
        return all(s.is_deterministic for s in self.symbols)

    def name_of(self, sym: Symbol) -> str:
        return self.names[self.symbols.index(sym)]

    def index_of(self, sym: Symbol) -> int:
        return self.symbols.index(sym)

    def restrict(self, names: Iterable[str]) -> "Automaton":
        """Sub-automaton on the named symbols, in this automaton's order."""
        wanted = set(names)
        missing = wanted - set(self.names)
        if missing:
            raise AutomatonError(f"unknown symbol names {sorted(missing)}")
        pairs = [(s, nm) for s, nm in zip(self.symbols, self.names) if nm in wanted]
        return Automaton(self.n, [p[0] for p in pairs], [p[1] for p in pairs])

    def with_symbols(self, symbols: Iterable[Symbol]) -> "Automaton":
        """Same names where a symbol survives, fresh ones otherwise."""
        symbols = list(symbols)
        by_sym = dict(zip(self.symbols, self.names))
        used = set()
        names = []
        fresh = (nm for nm in _name_stream() if nm not in by_sym.values())
        for s in symbols:
            nm = by_sym.get(s)
            if nm is None or nm in used:
                nm = next(fresh)
            used.add(nm)
            names.append(nm)
        return Automaton(self.n, symbols, names)


def _name_stream():
    letters = "abcdefghijklmnopqrstuvwxyz"
    yield from letters
    for i in itertools.count(1):
        for ch in letters:
            yield f"{ch}{i}"


def default_names(k: int) -> list[str]:
    return list(itertools.islice(_name_stream(), k))


def apply_word(aut: Automaton, word: Sequence[int], s: int) -> int:
    """Fold :func:`apply` over ``word`` (symbol indices into ``aut``)."""
    k = len(aut.symbols)
    for i in word:
        if not 0 <= i < k:
            raise AutomatonError(f"word letter {i} out of range for {k} symbols")
        s = apply(aut.symbols[i], s)
    return s


def word_from_names(aut: Automaton, letters: Iterable[str]) -> tuple[int, ...]:
    index = {nm: i for i, nm in enumerate(aut.names)}
    try:
        return tuple(index[x] for x in letters)
    except KeyError as exc:
        raise AutomatonError(f"unknown symbol name {exc.args[0]!r}") from None


def classify_basic(aut: Automaton) -> dict[str, bool]:
    syms = aut.symbols
    antichain = not any(
        i != j and symbol_leq(syms[i], syms[j]) for i in range(len(syms)) for j in range(len(syms))
    )
    ident = any(s.is_identity for s in syms)
    return {"is_pre_basic": antichain, "is_basic": antichain and not ident, "identity_present": ident}


def add_identity(aut: Automaton) -> Automaton:
    ident = Symbol.identity(aut.n)
    if ident in aut:
        return aut
    name = "id" if "id" not in aut.names else next(
        nm for nm in _name_stream() if nm not in aut.names
    )
    return Automaton(aut.n, aut.symbols + (ident,), aut.names + (name,))


def drop_identity(aut: Automaton) -> Automaton:
    pairs = [(s, nm) for s, nm in zip(aut.symbols, aut.names) if not s.is_identity]
    return Automaton(aut.n, [p[0] for p in pairs], [p[1] for p in pairs])


def extension_leq(b: Automaton, a: Automaton) -> bool:
    """True iff ``b ⊆ a``: each symbol of ``b`` lies inside some symbol of ``a``."""
    if b.n != a.n:
        raise AutomatonError("automata on different state counts")
    return all(any(symbol_leq(x, y) for y in a.symbols) for x in b.symbols)


# -- isomorphism ---------------------------------------------------------------

CANONICAL_MAX_STATES = 8


def _perm_mask_table(perm: Sequence[int]) -> list[int]:
    n = len(perm)
    table = [0] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        table[m] = table[m ^ low] | (1 << perm[low.bit_length() - 1])
    return table


def relabel(aut: Automaton, perm: Sequence[int]) -> Automaton:
    """Rename state ``q`` to ``perm[q-1] + 1`` (``perm`` is 0-based)."""
    table = _perm_mask_table(perm)
    syms = []
    for s in aut.symbols:
        imgs = [0] * aut.n
        for q, img in enumerate(s.images):
            imgs[perm[q]] = table[img]
        syms.append(Symbol(tuple(imgs)))
    return Automaton(aut.n, syms, aut.names)


def _relabelled_keys(aut: Automaton):
    n = aut.n
    raw = [s.images for s in aut.symbols]
    for perm in itertools.permutations(range(n)):
        table = _perm_mask_table(perm)
        syms = []
        for images in raw:
            imgs = [0] * n
            for q, img in enumerate(images):
                imgs[perm[q]] = table[img]
            syms.append(tuple(imgs))
        syms.sort()
        yield tuple(syms)


def canonical_form(aut: Automaton) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Minimal sorted symbol encoding over all state relabellings.

    Two automata are isomorphic (as symbol sets) iff their forms are equal.
    """
    if aut.n > CANONICAL_MAX_STATES:
        raise AutomatonError(f"canonical form needs n <= {CANONICAL_MAX_STATES}")
    return (aut.n, min(_relabelled_keys(aut)))


def orbit_size(aut: Automaton) -> int:
    """Number of distinct labelled automata isomorphic to ``aut``."""
    if aut.n > CANONICAL_MAX_STATES:
        raise AutomatonError(f"orbit size needs n <= {CANONICAL_MAX_STATES}")
    return len(set(_relabelled_keys(aut)))


def from_canonical(form: tuple[int, tuple[tuple[int, ...], ...]]) -> Automaton:
    n, syms = form
    return Automaton(n, [Symbol(s) for s in syms])


def random_cnfa(n: int, symbol_count: int, density: float, seed: int) -> Automaton:
    """Seeded random CNFA.

    Each image starts from one uniformly chosen state and gains every other
    state independently with probability ``density``; ``density == 0`` gives a
    DFA. Duplicate symbols collapse, so the result may be smaller than asked.
    """
    _check_n(n)
    rng = random.Random(seed)
    syms = []
    for _ in range(symbol_count):
        imgs = []
        for _q in range(n):
            img = 1 << rng.randrange(n)
            for p in range(n):
                if rng.random() < density:
                    img |= 1 << p
            imgs.append(img)
        syms.append(Symbol(tuple(imgs)))
    return Automaton(n, syms)
