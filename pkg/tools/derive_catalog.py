"""Regenerate the catalog data files under src/splitsync/data/catalog.

a3, a4, c4 and t42 come from the exhaustive critical-DFA search on 3 and 4
states: the maximal critical DFAs there (those not a restriction of another).
Letters of a3 and a4 are named by trying every naming until the per-restriction
preimage counts match the known tables. roman and kari were found by
a search restricted to at most 3 (n = 5) and 2 (n = 6) letters; their canonical
forms are pinned below and re-verified here.

    python tools/derive_catalog.py [--out DIR]
"""

from __future__ import annotations

import argparse
from itertools import permutations
from pathlib import Path

from splitsync.catalog import MANIFEST, cerny, restrictions
from splitsync.core import Automaton, canonical_form, from_canonical
from splitsync.critical import critical_dfa_search, preimages_of
from splitsync.directing import dfa_shortest_sync
from splitsync.io import write_automaton

A3_TABLE = {
    "abcde": 8, "abcd": 4, "abce": 4, "abde": 4, "acde": 2, "bcde": 8, "abc": 4, "abd": 2,
    "abe": 2, "acd": 1, "ade": 2, "bce": 4, "cde": 2, "ab": 2, "ad": 1,
}
A4_TABLE = {
    "abcde": 4, "abcd": 4, "abce": 2, "abde": 1, "bcde": 4, "abc": 2, "abd": 1, "abe": 1,
    "bde": 1, "ab": 1,
}
ROMAN = (5, ((1, 2, 4, 16, 8), (1, 2, 8, 4, 4), (4, 8, 1, 2, 16)))
KARI = (6, ((1, 2, 4, 16, 8, 8), (2, 8, 32, 1, 4, 16)))


def maximal(dfas: list[Automaton]) -> list[Automaton]:
    """Those not isomorphic to a proper restriction of another."""
    below = set()
    for d in dfas:
        below.update(canonical_form(sub) for combo, sub in restrictions(d) if len(combo) < len(d))
    return [d for d in dfas if canonical_form(d) not in below]


def restriction_table(aut: Automaton, target: int) -> dict[str, int]:
    table = {}
    for combo, sub in restrictions(aut):
        rep = dfa_shortest_sync(sub)
        if rep.directing and rep.length == target:
            table["".join(sorted(combo))] = len(preimages_of(sub).members)
    return table


def name_by_table(aut: Automaton, table: dict[str, int], target: int) -> Automaton:
    letters = "abcdefgh"[: len(aut)]
    for perm in permutations(letters):
        named = Automaton(aut.n, aut.symbols, perm)
        if restriction_table(named, target) == table:
            order = sorted(range(len(perm)), key=lambda i: perm[i])
            return Automaton(aut.n, [aut.symbols[i] for i in order], [perm[i] for i in order])
    raise SystemExit("no naming reproduces the restriction table")


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1]
                                         / "src" / "splitsync" / "data" / "catalog"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries: dict[str, tuple[Automaton, str]] = {}

    top3 = maximal(critical_dfa_search(3).automata())
    assert len(top3) == 1 and len(top3[0]) == 5
    entries["a3"] = (name_by_table(top3[0], A3_TABLE, 4), "maximal basic critical DFA on 3 states")

    top4 = maximal(critical_dfa_search(4).automata())
    assert len(top4) == 3, top4
    c4_form = canonical_form(cerny(4))
    for d in top4:
        if canonical_form(d) == c4_form:
            entries["c4"] = (cerny(4), "Cerny automaton on 4 states")
        elif len(d) == 5:
            entries["a4"] = (name_by_table(d, A4_TABLE, 9), "maximal 5-letter critical DFA on 4 states")
        else:
            entries["t42"] = (d, "remaining maximal critical DFA on 4 states")
    entries["roman"] = (from_canonical(ROMAN), "critical 3-letter DFA on 5 states")
    entries["kari"] = (from_canonical(KARI), "critical 2-letter DFA on 6 states")

    lines = []
    for name, (aut, comment) in entries.items():
        length = dfa_shortest_sync(aut).length
        assert length == (aut.n - 1) ** 2, name
        write_automaton(aut, out / f"{name}.txt", comment)
        lines.append(f"{name} {length}")
        print(name, aut.n, len(aut), length)
    (out / MANIFEST).write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
