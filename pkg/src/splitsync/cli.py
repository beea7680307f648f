"""``splitsync`` command line.

Exit codes: 0 success, 1 not directing (d3, verify), 2 bad input,
3 resource budget exceeded, 4 missing catalog data.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import catalog, io
from .classes import classify
from .core import Automaton, AutomatonError, word_from_names
from .critical import census, has_short_cycle, inverse_split_enumerate, symbol_graph
from .directing import ENGINES, d3, verify_d3
from .split import BudgetExceeded, full_split, split_at

EXIT_OK, EXIT_NOT_DIRECTING, EXIT_INPUT, EXIT_BUDGET, EXIT_CATALOG = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _fmt_states(mask_states: Sequence[int]) -> str:
    return "{" + ",".join(map(str, mask_states)) + "}"


def _table(rows: Sequence[Sequence[object]], out: TextIO) -> None:
    cells = [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    for r in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _load(path: str) -> Automaton:
    return io.read_automaton(path)


def cmd_d3(args, out: TextIO) -> int:
    aut = _load(args.file)
    rep = d3(aut, args.engine)
    if args.json:
        out.write(io.dumps(io.directing_doc(aut, rep)))
    else:
        rows = [("engine", rep.engine), ("directing", "yes" if rep.directing else "no")]
        if rep.directing:
            rows.append(("length", rep.length))
            rows.append(("sync state", rep.sync_state))
            if args.witness:
                rows.append(("witness", "".join(rep.witness_names(aut)) or "(empty)"))
        _table(rows, out)
    return EXIT_OK if rep.directing else EXIT_NOT_DIRECTING


def cmd_verify(args, out: TextIO) -> int:
    aut = _load(args.file)
    letters = [w for w in args.word.split(",") if w] if args.word else []
    try:
        word = word_from_names(aut, letters)
    except AutomatonError as exc:
        raise _UsageError(str(exc)) from None
    res = verify_d3(aut, word)
    if args.json:
        out.write(io.dumps(io.verify_doc(aut, letters, res)))
    else:
        rows = [("state", "end set")]
        rows += [(q, _fmt_states(io._states(s))) for q, s in enumerate(res.end_sets, 1)]
        _table(rows, out)
        verdict = "accepted" if res.accepted else "rejected"
        out.write(f"{verdict}; common states {_fmt_states(io._states(res.sync_states))}\n")
    return EXIT_OK if res.accepted else EXIT_NOT_DIRECTING


def cmd_split(args, out: TextIO) -> int:
    aut = _load(args.file)
    if args.at:
        state, name = args.at
        try:
            q = int(state)
        except ValueError:
            raise _UsageError(f"state must be an integer, got {state!r}") from None
        result = split_at(aut, q, name)
        doc = {"schema": io.SCHEMA, "kind": "split", "automaton": io.automaton_doc(result)}
    else:
        res = full_split(aut)
        result = res.automaton
        doc = io.split_doc(aut, res)
    if args.output:
        io.write_automaton(result, args.output)
    if args.json:
        out.write(io.dumps(doc))
    elif not args.output:
        out.write(io.serialize(result))
    else:
        out.write(f"wrote {len(result)} symbols to {args.output}\n")
    return EXIT_OK


def cmd_classify(args, out: TextIO) -> int:
    aut = _load(args.file)
    rep = classify(aut)
    if args.json:
        out.write(io.dumps(io.classes_doc(aut, rep)))
        return EXIT_OK
    rows = [("class", "verdict", "certificate")]
    for name, v in rep.verdicts.items():
        rows.append((name, v.status, "" if v.certificate is None else v.certificate))
    _table(rows, out)
    out.write("\n")
    _table([("bound", "value")] + [(c, b) for c, b in rep.bounds], out)
    name, bound = rep.tightest
    out.write(f"tightest: {name} <= {bound}\n")
    return EXIT_OK


def _dfa(path: str) -> Automaton:
    aut = _load(path)
    if not aut.is_dfa:
        raise _UsageError("a deterministic automaton is required")
    return aut


def cmd_graph(args, out: TextIO) -> int:
    aut = _dfa(args.file)
    graph = symbol_graph(aut)
    short = has_short_cycle(graph)
    if args.json:
        out.write(io.dumps(io.graph_doc(graph, short)))
        return EXIT_OK
    out.write(f"nodes: {' '.join(graph.names)}\n")
    edges = graph.edge_names()
    out.write("edges: " + (" ".join("{%s,%s}" % e for e in edges) if edges else "(none)") + "\n")
    out.write(f"3- or 4-cycle: {'yes' if short else 'no'}\n")
    return EXIT_OK


def cmd_inverse(args, out: TextIO) -> int:
    aut = _dfa(args.file)
    inv = inverse_split_enumerate(aut)
    if args.json:
        out.write(io.dumps(io.inverse_doc(inv)))
        return EXIT_OK
    out.write(f"{len(inv.members)} automata, {'complete' if inv.complete else 'possibly incomplete'}\n")
    for k, m in enumerate(inv.members):
        out.write(f"\n# member {k}\n")
        out.write(io.serialize(m))
    return EXIT_OK


def cmd_census(args, out: TextIO) -> int:
    checkpoint = None
    if args.out and args.tier == "extended":
        Path(args.out).mkdir(parents=True, exist_ok=True)
        checkpoint = str(Path(args.out) / "search.ckpt.json")
    progress = None
    if args.progress:
        def progress(done: int, total: int) -> None:
            print(f"search: {done}/{total} root branches", file=sys.stderr, flush=True)
    rep = census(args.states, tier=args.tier, jobs=args.jobs, checkpoint=checkpoint, progress=progress)
    if args.out:
        io.persist_census(rep, args.out)
    if args.json:
        out.write(io.dumps(io.census_doc(rep)))
        return EXIT_OK
    rows = [("dfa", "edges", "cnfas", "labelled copies", "complete")]
    for r in rep.dfas:
        rows.append((r.label, len(r.edges), r.cnfa_count, r.orbit, "yes" if r.complete else "no"))
    _table(rows, out)
    out.write("\n")
    _table([
        ("", "dfas", "cnfas"),
        ("up to isomorphism", rep.counts_iso["dfas"], rep.counts_iso["cnfas"]),
        ("labelled", rep.counts_labeled["dfas"], rep.counts_labeled["cnfas"]),
    ], out)
    out.write(f"all verified: {'yes' if rep.all_verified else 'no'}\n")
    for note in rep.notes:
        out.write(f"note: {note}\n")
    return EXIT_OK


def cmd_catalog(args, out: TextIO) -> int:
    entry = catalog.load(args.name, args.n)
    if args.json:
        out.write(io.dumps({
            "schema": io.SCHEMA, "kind": "catalog", "name": entry.name, "expected": entry.expected,
            "provenance": entry.provenance, "automaton": io.automaton_doc(entry.automaton),
        }))
        return EXIT_OK
    out.write(io.serialize(entry.automaton, comment=f"{entry.name}: length {entry.expected} ({entry.provenance})"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print only the JSON result document")
    p = _Parser(prog="splitsync", description="Directing words of nondeterministic automata via Split.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("d3", parents=[common], help="shortest D3-directing word")
    s.add_argument("file")
    s.add_argument("--engine", choices=sorted(ENGINES), default="implicit")
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=cmd_d3)

    s = sub.add_parser("split", parents=[common], help="Split transformation")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.add_argument("--at", nargs=2, metavar=("STATE", "SYMBOL"), help="split one symbol at one state")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("classify", parents=[common], help="class membership and bounds")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("graph", parents=[common], help="symbol graph of a DFA")
    s.add_argument("file")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("inverse-split", parents=[common], help="CNFAs splitting to a DFA")
    s.add_argument("file")
    s.set_defaults(func=cmd_inverse)

    s = sub.add_parser("census", parents=[common], help="basic critical CNFAs on n states")
    s.add_argument("--states", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.add_argument("--tier", choices=["extended"])
    s.add_argument("--progress", action="store_true")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("catalog", parents=[common], help="named critical automata")
    s.add_argument("name")
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("verify", parents=[common], help="check a candidate directing word")
    s.add_argument("file")
    s.add_argument("--word", required=True, help="comma-separated symbol names")
    s.set_defaults(func=cmd_verify)
    return p


def run_cli(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        print(f"splitsync: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except io.ParseError as exc:
        print(f"splitsync: {getattr(args, 'file', '')}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except catalog.CatalogDataMissing as exc:
        print(f"splitsync: missing catalog data: {exc}", file=sys.stderr)
        return EXIT_CATALOG
    except BudgetExceeded as exc:
        print(f"splitsync: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (AutomatonError, OSError, UnicodeDecodeError) as exc:
        print(f"splitsync: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
