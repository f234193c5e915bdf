"""Command-line interface.

Exit codes: 0 decomposition (or success), 1 usage error, 2 invalid input,
3 exception certificate (no decomposition), 4 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import traceback

from .catalog import ExceptionCertificate, catalog, match_catalog, verify_certificate
from .errors import (
    BudgetExceeded,
    GenerationFailed,
    InternalInvariantFailure,
    InvalidPartition,
    NotTwoArcStrong,
    ParseError,
    PreconditionViolated,
)
from .generate import GeneratorConfig, enumerate_semicomplete, generate
from .io import (
    decomposition_from_json,
    emit_dot,
    emit_edge_list,
    infer_split,
    outcome_to_json,
    parse_edge_list,
)
from .search import Outcome, brute_force_sad, verify_decomposition
from .semicomplete import SplitInstance, nice_decomposition
from .solver import solve_split

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_EXCEPTION, EXIT_INTERNAL = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_split(path: str) -> SplitInstance:
    doc = parse_edge_list(_read(path))
    return doc if isinstance(doc, SplitInstance) else infer_split(doc)


def _load_graph(path: str):
    doc = parse_edge_list(_read(path))
    return doc.graph if isinstance(doc, SplitInstance) else doc


def _emit_outcome(g, out: Outcome, fmt: str) -> str:
    if fmt == "json":
        return outcome_to_json(g, out)
    if fmt == "dot":
        return emit_dot(g, out.decomposition)
    if out.decomposition is None:
        return f"# no strong arc decomposition: {out.exception.label}\n" + emit_edge_list(g)
    a1, a2 = out.decomposition.classes()
    return "# class 1\n" + emit_edge_list(g, a1) + "# class 2\n" + emit_edge_list(g, a2)


def cmd_decompose(args) -> int:
    s = _load_split(args.file)
    out = solve_split(s)
    if args.trace:
        print(f"route: {out.route}" + (" (fallback)" if out.fallback else ""), file=sys.stderr)
        if out.note:
            print(f"note: {out.note}", file=sys.stderr)
        for line in out.trace:
            print(line, file=sys.stderr)
    sys.stdout.write(_emit_outcome(s.graph, out, args.format))
    return EXIT_OK if out.decomposable else EXIT_EXCEPTION


def _certificate_from_json(g, payload: dict) -> ExceptionCertificate:
    ids = sorted(g.vertices)
    try:
        back = {i: v for i, v in enumerate(ids, start=1)}
        return ExceptionCertificate(
            payload["catalog_id"],
            mapping=tuple(sorted((back[int(a)], int(b)) for a, b in payload.get("mapping", []))),
            witness=tuple(back[int(v)] for v in payload.get("witness", [])),
            dashed_flags=tuple(
                tuple(bool(x) for x in f) if isinstance(f, list) else bool(f) for f in payload.get("dashed_flags", [])
            ),
            reversed=bool(payload.get("reversed", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(0, f"malformed exception certificate: {exc}") from None


def cmd_verify(args) -> int:
    s = _load_split(args.graph)
    text = _read(args.certificate)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, f"invalid JSON: {exc.msg}") from None
    if isinstance(payload, dict) and payload.get("kind") == "exception":
        cert = _certificate_from_json(s.graph, payload)
        if verify_certificate(s, cert):
            print(f"valid exception certificate {cert.label}")
            return EXIT_EXCEPTION
        print("exception certificate rejected")
        return EXIT_INPUT
    dec = decomposition_from_json(s.graph, text)
    if verify_decomposition(s.graph, dec):
        print("valid strong arc decomposition")
        return EXIT_OK
    print("decomposition rejected")
    return EXIT_INPUT


def cmd_oracle(args) -> int:
    g = _load_graph(args.file)
    dec = brute_force_sad(g, args.budget)
    if dec is None:
        print("no strong arc decomposition")
        return EXIT_EXCEPTION
    sys.stdout.write(outcome_to_json(g, Outcome(decomposition=dec, route="exhaustive-search")))
    return EXIT_OK


def cmd_nice(args) -> int:
    g = _load_graph(args.file)
    nd = nice_decomposition(g)
    names = {v: i for i, v in enumerate(sorted(g.vertices), start=1)}
    for i, block in enumerate(nd.blocks, start=1):
        print(f"U{i}: " + " ".join(str(names[v]) for v in sorted(block, key=names.get)))
    for j, a in enumerate(nd.backward_arcs, start=1):
        t, h = g.arcs[a]
        print(f"backward {j}: {names[t]} -> {names[h]}")
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(
        v1_size=args.v1,
        v2_size=args.v2,
        crossing_density=args.density,
        seed=args.seed,
        maximal_partition=not args.no_maximal,
        max_arcs=args.max_arcs,
    )
    sys.stdout.write(emit_edge_list(generate(cfg)))
    return EXIT_OK


def _flag_tag(flags) -> str:
    parts = flags if flags and isinstance(flags[0], tuple) else (flags,)
    return "-".join("".join("1" if f else "0" for f in part) or "x" for part in parts)


def cmd_catalog(args) -> int:
    entries = catalog()
    if args.emit_dir:
        os.makedirs(args.emit_dir, exist_ok=True)
    for cid, flags, g in entries:
        tag = cid + ("" if not flags else "_" + _flag_tag(flags))
        print(f"{tag:24s} vertices={len(g)} arcs={g.num_arcs()}")
        if args.emit_dir:
            base = os.path.join(args.emit_dir, tag)
            with open(base + ".edges", "w", encoding="utf-8") as fh:
                fh.write(emit_edge_list(g))
            with open(base + ".dot", "w", encoding="utf-8") as fh:
                fh.write(emit_dot(g, name=tag.replace("*", "s")))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.n < 2 or args.n > 6:
        raise _UsageError("--n must lie in 2..6")
    rep = enumerate_semicomplete(args.n)
    print(f"semicomplete digraphs on {args.n} labelled vertices: {rep.total}")
    print(f"2-arc-strong: {rep.two_arc_strong}")
    print(f"without strong arc decomposition: {len(rep.non_decomposable)}")
    for g in rep.classes:
        cert = match_catalog(g)
        name = cert.label if cert else "unrecognised"
        print(f"  class {name}: " + " ".join(f"{t + 1}>{h + 1}" for t, h in sorted(g.arcs.values())))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sadkit", description="Strong arc decompositions of split digraphs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    d = sub.add_parser("decompose", help="decompose a 2-arc-strong split digraph")
    d.add_argument("file")
    d.add_argument("--trace", action="store_true", help="print the construction steps to stderr")
    d.add_argument("--format", choices=("json", "dot", "edges"), default="json")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a JSON certificate against a graph")
    v.add_argument("graph")
    v.add_argument("certificate")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exhaustive decomposition search")
    o.add_argument("file")
    o.add_argument("--budget", type=int, default=None, help="maximum arc count (default 22 or $SADKIT_ORACLE_BUDGET)")
    o.set_defaults(func=cmd_oracle)

    n = sub.add_parser("nice-decomp", help="nice decomposition of a strong semicomplete digraph")
    n.add_argument("file")
    n.set_defaults(func=cmd_nice)

    g = sub.add_parser("gen", help="random 2-arc-strong split digraph")
    g.add_argument("--v1", type=int, default=2)
    g.add_argument("--v2", type=int, default=5)
    g.add_argument("--density", type=float, default=0.4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-arcs", type=int, default=None)
    g.add_argument("--no-maximal", action="store_true", help="allow a V1 vertex adjacent to all of V2")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("catalog", help="list the catalogued exceptions")
    c.add_argument("--emit-dir", default=None, help="write .edges and .dot files here")
    c.set_defaults(func=cmd_catalog)

    e = sub.add_parser("enumerate", help="decide every semicomplete digraph on n vertices")
    e.add_argument("--n", type=int, required=True)
    e.set_defaults(func=cmd_enumerate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required")
        return args.func(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sadkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, InvalidPartition, NotTwoArcStrong, PreconditionViolated, BudgetExceeded,
            GenerationFailed, OSError) as exc:
        print(f"sadkit: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInvariantFailure as exc:
        print(f"sadkit: internal invariant failure: {exc}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
