"""Named critical automata.

``cerny`` and ``cerny_cnfa`` are generated. The rest live as automaton files
in a data directory with a ``MANIFEST`` of ``name expected_length`` lines; the
expected length is re-checked every time an entry is loaded.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from pathlib import Path

from .core import Automaton, AutomatonError, Symbol, canonical_form
from .directing import d3_implicit, dfa_shortest_sync
from .io import read_automaton

DATA_ENV = "SPLITSYNC_DATA"
MANIFEST = "MANIFEST"

BUILTIN = "built-in generator"
DERIVED = "derived-by-search"
EXTERNAL = "external data file"

_PROVENANCE = {"a3": DERIVED, "a4": DERIVED, "c4": DERIVED, "t42": DERIVED,
               "roman": EXTERNAL, "kari": EXTERNAL}

# maximal critical DFAs per state count, in lookup order
FAMILIES = {2: ("two",), 3: ("a3",), 4: ("a4", "c4", "t42"), 5: ("cerny", "roman"), 6: ("cerny", "kari")}


class CatalogError(AutomatonError):
    pass


class CatalogDataMissing(CatalogError, LookupError):
    """A data-file entry whose file (or manifest) is absent."""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    automaton: Automaton
    expected: int
    provenance: str


def cerny(n: int) -> Automaton:
    """qa = q+1 for q < n, na = 1; 1b = 2, qb = q otherwise."""
    if n < 2:
        raise CatalogError("cerny needs n >= 2")
    a = Symbol.from_map([q % n + 1 for q in range(1, n + 1)])
    b = Symbol.from_map([2] + list(range(2, n + 1)))
    return Automaton(n, [a, b], ["a", "b"])


def cerny_cnfa(n: int) -> Automaton:
    """Same as ``cerny`` except 1b = {1, 2}."""
    base = cerny(n)
    b = Symbol.from_sets([[1, 2]] + [[q] for q in range(2, n + 1)])
    return Automaton(n, [base.symbols[0], b], ["a", "b"])


def two_state() -> Automaton:
    """The maximal basic critical DFA on two states: both constants and the swap."""
    return Automaton(2, [Symbol.from_map([1, 1]), Symbol.from_map([2, 2]), Symbol.from_map([2, 1])],
                     ["a", "b", "s"])


def data_dir() -> Path:
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "data" / "catalog"


def manifest(directory: Path | None = None) -> dict[str, int]:
    path = (directory or data_dir()) / MANIFEST
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CatalogDataMissing(f"catalog manifest not found at {path}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or not parts[1].isdigit():
            raise CatalogError(f"{path}:{lineno}: expected 'name expected_length'")
        out[parts[0]] = int(parts[1])
    return out


def names() -> list[str]:
    return ["cerny", "cerny_cnfa", "two", *_PROVENANCE]


def _length(aut: Automaton) -> int:
    rep = dfa_shortest_sync(aut) if aut.is_dfa else d3_implicit(aut)
    return rep.length if rep.directing else -1


def load(name: str, n: int | None = None) -> CatalogEntry:
    """Look up ``name``; ``n`` is required for ``cerny`` and ``cerny_cnfa``."""
    if name in ("cerny", "cerny_cnfa"):
        if n is None:
            raise CatalogError(f"{name} needs a state count")
        aut = cerny(n) if name == "cerny" else cerny_cnfa(n)
        return _checked(name, aut, (n - 1) ** 2, BUILTIN)
    if name == "two":
        return _checked(name, two_state(), 1, BUILTIN)
    if name not in _PROVENANCE:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(names())}")
    directory = data_dir()
    expected = manifest(directory).get(name)
    path = directory / f"{name}.txt"
    if expected is None or not path.exists():
        raise CatalogDataMissing(f"no data file for {name!r} in {directory}")
    aut = read_automaton(path)
    if n is not None and aut.n != n:
        raise CatalogError(f"{name} has {aut.n} states, not {n}")
    return _checked(name, aut, expected, _PROVENANCE[name])


def _checked(name: str, aut: Automaton, expected: int, provenance: str) -> CatalogEntry:
    got = _length(aut)
    if got != expected:
        raise CatalogError(f"{name}: synchronizing length {got}, manifest says {expected}")
    return CatalogEntry(name, aut, expected, provenance)


def _family(name: str, n: int) -> Automaton:
    if name == "cerny":
        return cerny(n)
    if name == "two":
        return two_state()
    return load(name).automaton


def restrictions(aut: Automaton):
    """Every nonempty symbol subset, largest first, as (names, restriction)."""
    for k in range(len(aut), 0, -1):
        for combo in combinations(aut.names, k):
            yield combo, aut.restrict(combo)


def _critical_index(n: int) -> dict:
    return _index_for(n, str(data_dir()))


@lru_cache(maxsize=None)
def _index_for(n: int, directory: str) -> dict:
    target = (n - 1) ** 2
    index: dict = {}
    for fam in FAMILIES.get(n, ()):
        try:
            whole = _family(fam, n)
        except CatalogDataMissing:
            continue
        for combo, sub in restrictions(whole):
            form = canonical_form(sub)
            if form in index:
                continue
            if _length(sub) != target:
                continue
            label = fam if len(combo) == len(whole) else f"{fam}[{','.join(combo)}]"
            if fam == "cerny":
                label = f"cerny{n}" if len(combo) == len(whole) else f"cerny{n}[{','.join(combo)}]"
            index[form] = (label, sub)
    return index


def critical_dfas(n: int) -> list[Automaton]:
    """Basic critical DFAs on ``n`` states that are restrictions of the catalog families."""
    return [sub for _, sub in _critical_index(n).values()]


def label_dfa(dfa: Automaton) -> Automaton:
    """The catalog-named isomorphic copy of ``dfa``, or ``dfa`` itself if unknown."""
    hit = _critical_index(dfa.n).get(canonical_form(dfa)) if dfa.n in FAMILIES else None
    return hit[1] if hit else dfa


def describe(dfa: Automaton) -> str:
    hit = _critical_index(dfa.n).get(canonical_form(dfa)) if dfa.n in FAMILIES else None
    if hit:
        return hit[0]
    return "[" + ",".join(dfa.names) + "]"
