"""Automaton text format, JSON result documents and census persistence.

Automaton files look like::

    # the worked example
    cnfa 3
    sym a : 1,3 ; 2 ; 1
    sym b : 2 ; 1 ; 2,3

The header is ``cnfa <n>`` or ``dfa <n>``; each ``sym`` line lists the image of
states ``1..n`` in order, every image a comma-separated ascending list of
1-based states. Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from pathlib import Path
from typing import Any

from .core import MAX_STATES, Automaton, Symbol, canonical_form, members, stateset

SCHEMA = 1
_NAME = re.compile(r"[^\s:;,#]+")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def parse(text: str) -> Automaton:
    header = None
    n = 0
    syms: list[Symbol] = []
    names: list[str] = []
    bodies: dict[Symbol, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip())
        if header is None:
            parts = stripped.split()
            if len(parts) != 2 or parts[0] not in ("cnfa", "dfa"):
                raise ParseError("bad header, expected 'cnfa <n>' or 'dfa <n>'", lineno, indent + 1)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad state count {parts[1]!r}", lineno, indent + len(parts[0]) + 2) from None
            if not 1 <= n <= MAX_STATES:
                raise ParseError(f"state count {n} outside 1..{MAX_STATES}", lineno, indent + len(parts[0]) + 2)
            header = parts[0]
            continue
        sym, name = _parse_sym(raw, lineno, n, header == "dfa")
        if sym in bodies:
            raise ParseError(f"symbol {name!r} duplicates symbol {bodies[sym]!r}", lineno, indent + 1)
        if name in names:
            raise ParseError(f"symbol name {name!r} used twice", lineno, indent + 1)
        bodies[sym] = name
        syms.append(sym)
        names.append(name)
    if header is None:
        raise ParseError("missing header", 1, 1)
    return Automaton(n, syms, names)


def _parse_sym(raw: str, lineno: int, n: int, dfa: bool) -> tuple[Symbol, str]:
    m = re.match(r"(\s*)sym(\s+)", raw)
    if not m:
        col = len(raw) - len(raw.lstrip()) + 1
        raise ParseError("expected 'sym <name> : <images>'", lineno, col)
    pos = m.end()
    nm = _NAME.match(raw, pos)
    if not nm:
        raise ParseError("missing symbol name", lineno, pos + 1)
    name = nm.group()
    pos = nm.end()
    colon = re.compile(r"\s*:").match(raw, pos)
    if not colon:
        raise ParseError("expected ':' after symbol name", lineno, pos + 1)
    pos = colon.end()
    fields = raw[pos:].split(";")
    if len(fields) != n:
        raise ParseError(f"expected {n} images, found {len(fields)}", lineno, pos + 1)
    images = []
    col = pos
    for q, fld in enumerate(fields, 1):
        start = col + 1 + (len(fld) - len(fld.lstrip()))
        body = fld.strip()
        if not body:
            raise ParseError(f"empty image for state {q}", lineno, start)
        states = []
        for tok in body.split(","):
            tok = tok.strip()
            if not tok.isdigit():
                raise ParseError(f"bad state {tok!r} in image of state {q}", lineno, start)
            t = int(tok)
            if not 1 <= t <= n:
                raise ParseError(f"state {t} out of range 1..{n}", lineno, start)
            if states and t <= states[-1]:
                raise ParseError(f"image of state {q} is not strictly ascending", lineno, start)
            states.append(t)
        if dfa and len(states) != 1:
            raise ParseError(f"dfa image of state {q} must be a single state", lineno, start)
        images.append(stateset(*states))
        col += len(fld) + 1
    return Symbol(tuple(images)), name


def serialize(aut: Automaton, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{'dfa' if aut.is_dfa else 'cnfa'} {aut.n}")
    for s, nm in zip(aut.symbols, aut.names):
        body = " ; ".join(",".join(map(str, members(img))) for img in s.images)
        lines.append(f"sym {nm} : {body}")
    return "\n".join(lines) + "\n"


def read_automaton(path: str | os.PathLike) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_automaton(aut: Automaton, path: str | os.PathLike, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(aut, comment))


# -- result documents ------------------------------------------------------------


def _states(mask: int) -> list[int]:
    return list(members(mask))


def automaton_doc(aut: Automaton) -> dict[str, Any]:
    return {
        "n": aut.n,
        "symbols": {nm: [_states(img) for img in s.images] for s, nm in zip(aut.symbols, aut.names)},
    }


def automaton_from_doc(doc: dict[str, Any]) -> Automaton:
    names = list(doc["symbols"])
    syms = [Symbol.from_sets(doc["symbols"][nm]) for nm in names]
    return Automaton(doc["n"], syms, names)


def directing_doc(aut: Automaton, report, engine_check: dict | None = None) -> dict[str, Any]:
    doc = {
        "schema": SCHEMA,
        "kind": "d3",
        "engine": report.engine,
        "directing": report.directing,
        "length": report.length,
        "witness": report.witness_names(aut),
        "sync_state": report.sync_state,
    }
    return doc


def directing_from_doc(aut: Automaton, doc: dict[str, Any]):
    from .core import word_from_names
    from .directing import DirectingReport

    witness = doc["witness"]
    return DirectingReport(
        doc["directing"],
        doc["length"],
        None if witness is None else word_from_names(aut, witness),
        doc["sync_state"],
        doc["engine"],
    )


def verify_doc(aut: Automaton, word_names: list[str], result) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "verify",
        "word": list(word_names),
        "accepted": result.accepted,
        "sync_states": _states(result.sync_states),
        "end_sets": [_states(s) for s in result.end_sets],
    }


def _jsonable(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def classes_doc(aut: Automaton, report) -> dict[str, Any]:
    classes = {}
    for name, v in report.verdicts.items():
        entry = {"status": v.status, "certificate": _jsonable(v.certificate)}
        if v.reason:
            entry["reason"] = v.reason
        if name == "aperiodic":
            entry["strongly_connected"] = v.strongly_connected
            entry["monoid_size"] = v.monoid_size
        classes[name] = entry
    name, bound = report.tightest
    return {
        "schema": SCHEMA,
        "kind": "classify",
        "n": aut.n,
        "classes": classes,
        "bounds": [[c, b] for c, b in report.bounds],
        "tightest": [name, bound],
    }


def split_doc(aut: Automaton, result) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "split",
        "automaton": automaton_doc(result.automaton),
        "provenance": {
            nm: sorted(aut.names[i] for i in prov)
            for nm, prov in zip(result.automaton.names, result.provenance)
        },
    }


def graph_doc(graph, short_cycle: bool) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "graph",
        "nodes": list(graph.names),
        "edges": [list(e) for e in graph.edge_names()],
        "short_cycle": short_cycle,
    }


def inverse_doc(inv) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "inverse-split",
        "edges": [list(e) for e in inv.graph.edge_names()],
        "complete": inv.complete,
        "method": inv.method,
        "members": [automaton_doc(m) for m in inv.members],
    }


def census_doc(report) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "census",
        "n": report.n,
        "dfa_source": report.dfa_source,
        "counts_labeled": dict(report.counts_labeled),
        "counts_iso": dict(report.counts_iso),
        "dfas": [
            {
                "label": row.label,
                "automaton": automaton_doc(row.dfa),
                "edges": [list(e) for e in row.edges],
                "cnfa_count": row.cnfa_count,
                "complete": row.complete,
                "method": row.method,
                "orbit": row.orbit,
            }
            for row in report.dfas
        ],
        "members": [
            {
                "automaton": automaton_doc(m.automaton),
                "source": m.source,
                "d3": m.d3,
                "verified_by": list(m.verified_by),
            }
            for m in report.members
        ],
        "notes": list(report.notes),
    }


def census_from_doc(doc: dict[str, Any]):
    from .critical import CensusDfa, CensusMember, CensusReport

    rows = [
        CensusDfa(
            r["label"], automaton_from_doc(r["automaton"]), tuple(tuple(e) for e in r["edges"]),
            r["cnfa_count"], r["complete"], r["method"], r["orbit"],
        )
        for r in doc["dfas"]
    ]
    mems = [
        CensusMember(automaton_from_doc(m["automaton"]), m["source"], m["d3"], tuple(m["verified_by"]))
        for m in doc["members"]
    ]
    return CensusReport(doc["n"], rows, mems, dict(doc["counts_labeled"]), dict(doc["counts_iso"]),
                        doc["dfa_source"], list(doc["notes"]))


def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- census persistence -----------------------------------------------------------


class CensusIntegrityError(RuntimeError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


INDEX_FILE = "index.json"


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def persist_census(report, directory: str | os.PathLike) -> Path:
    """One automaton file per DFA and per member, plus ``index.json``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    index = census_doc(report)
    width = max(3, len(str(len(report.members))))
    for k, (row, entry) in enumerate(zip(report.dfas, index["dfas"])):
        fname = f"dfa_{k:0{width}d}.dfa"
        text = serialize(row.dfa, comment=row.label)
        (out / fname).write_text(text, encoding="utf-8")
        entry["file"] = fname
        entry["sha256"] = _digest(text)
        del entry["automaton"]
    for k, (m, entry) in enumerate(zip(report.members, index["members"])):
        fname = f"member_{k:0{width}d}.{'dfa' if m.automaton.is_dfa else 'cnfa'}"
        text = serialize(m.automaton)
        (out / fname).write_text(text, encoding="utf-8")
        entry["file"] = fname
        entry["sha256"] = _digest(text)
        entry["canonical"] = _jsonable(canonical_form(m.automaton))
        del entry["automaton"]
    (out / INDEX_FILE).write_text(dumps(index), encoding="utf-8")
    return out


def load_census(directory: str | os.PathLike):
    base = Path(directory)
    index_path = base / INDEX_FILE
    try:
        index = json.loads(index_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CensusIntegrityError(str(index_path), "missing census index") from None
    if index.get("schema") != SCHEMA or index.get("kind") != "census":
        raise CensusIntegrityError(str(index_path), "not a census index")

    def load_entry(entry: dict) -> dict:
        path = base / entry["file"]
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise CensusIntegrityError(str(path), "missing member file") from None
        if _digest(text) != entry["sha256"]:
            raise CensusIntegrityError(str(path), "content hash does not match the index")
        restored = dict(entry)
        restored["automaton"] = automaton_doc(parse(text))
        for key in ("file", "sha256", "canonical"):
            restored.pop(key, None)
        return restored

    doc = dict(index)
    doc["dfas"] = [load_entry(e) for e in index["dfas"]]
    doc["members"] = [load_entry(e) for e in index["members"]]
    return census_from_doc(doc)
