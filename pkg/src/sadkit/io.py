"""Edge-list documents, DOT output and JSON certificates.

Edge-list format::

    # comment
    4               vertex count; vertices are 1..n
    v1 2 4          optional: vertices of the independent part
    1 2             arc tail head
    3 1 2           arc with multiplicity 2

In files and certificates, vertex k is the k-th smallest internal vertex id.
Graphs parsed from files use 1..n, so there the two agree.  An arc
is named ``(tail, head, copy)``, where copy counts parallel arcs by
increasing id, starting at 0.
"""
from __future__ import annotations

import json
from typing import Optional, Union

from .catalog import ExceptionCertificate
from .digraph import MultiDigraph
from .errors import ParseError
from .search import Decomposition, Outcome
from .semicomplete import SplitInstance, certify_split

__all__ = [
    "parse_edge_list",
    "emit_edge_list",
    "emit_dot",
    "arc_names",
    "outcome_to_json",
    "decomposition_from_json",
    "infer_split",
]


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {tok!r}") from None


def parse_edge_list(text: str) -> Union[MultiDigraph, SplitInstance]:
    n = None
    v1 = None
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if n is None:
            if len(toks) != 1:
                raise ParseError(lineno, "first line must hold the vertex count")
            n = _int(toks[0], lineno, "vertex count")
            if n < 1:
                raise ParseError(lineno, "vertex count must be positive")
            continue
        if toks[0] == "v1":
            if v1 is not None:
                raise ParseError(lineno, "partition declared twice")
            if arcs:
                raise ParseError(lineno, "partition line must precede the arcs")
            v1 = [_int(t, lineno, "vertex") for t in toks[1:]]
            for v in v1:
                if not 1 <= v <= n:
                    raise ParseError(lineno, f"vertex {v} out of range 1..{n}")
            if len(set(v1)) != len(v1):
                raise ParseError(lineno, "repeated vertex in partition line")
            continue
        if len(toks) not in (2, 3):
            raise ParseError(lineno, "arc lines are 'tail head [multiplicity]'")
        t = _int(toks[0], lineno, "tail")
        h = _int(toks[1], lineno, "head")
        mult = _int(toks[2], lineno, "multiplicity") if len(toks) == 3 else 1
        for v in (t, h):
            if not 1 <= v <= n:
                raise ParseError(lineno, f"vertex {v} out of range 1..{n}")
        if t == h:
            raise ParseError(lineno, "loops are not allowed")
        if mult < 1:
            raise ParseError(lineno, "multiplicity must be positive")
        arcs.extend([(t, h)] * mult)
    if n is None:
        raise ParseError(0, "empty document")
    g = MultiDigraph(range(1, n + 1), arcs)
    if v1 is None:
        return g
    return certify_split(g, v1, set(g.vertices) - set(v1))


def _names(d: MultiDigraph) -> dict:
    return {v: i for i, v in enumerate(sorted(d.vertices), start=1)}


def emit_edge_list(d: Union[MultiDigraph, SplitInstance], arcs=None) -> str:
    """Canonical document: sorted arcs, parallel copies folded into a multiplicity.

    ``arcs`` restricts the arc lines to a subset of arc ids.
    """
    s = d if isinstance(d, SplitInstance) else None
    g = s.graph if s is not None else d
    nm = _names(g)
    lines = [str(len(g))]
    if s is not None and s.v1:
        lines.append("v1 " + " ".join(str(nm[v]) for v in sorted(s.v1, key=nm.get)))
    counts = {}
    for a, (t, h) in g.arcs.items():
        if arcs is None or a in arcs:
            key = (nm[t], nm[h])
            counts[key] = counts.get(key, 0) + 1
    for (t, h), m in sorted(counts.items()):
        lines.append(f"{t} {h}" if m == 1 else f"{t} {h} {m}")
    return "\n".join(lines) + "\n"


def emit_dot(d: MultiDigraph, highlight: Optional[Decomposition] = None, name: str = "D") -> str:
    """DOT text; with ``highlight`` the two classes get different colours and styles."""
    nm = _names(d)
    lines = [f"digraph {name} {{"]
    for v in sorted(d.vertices):
        lab = d.labels[v] if d.labels and v in d.labels else str(nm[v])
        lines.append(f'  {nm[v]} [label="{lab}"];')
    for a in sorted(d.arcs, key=lambda x: (nm[d.tail(x)], nm[d.head(x)], x)):
        t, h = d.arcs[a]
        attr = ""
        if highlight is not None:
            if a in highlight.a1:
                attr = ' [color="blue", style="solid"]'
            else:
                attr = ' [color="red", style="dashed"]'
        lines.append(f"  {nm[t]} -> {nm[h]}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def arc_names(d: MultiDigraph) -> dict:
    """arc id -> (tail, head, copy) using file vertex numbering."""
    nm = _names(d)
    seen = {}
    out = {}
    for a in sorted(d.arcs):
        t, h = d.arcs[a]
        key = (nm[t], nm[h])
        out[a] = key + (seen.get(key, 0),)
        seen[key] = seen.get(key, 0) + 1
    return out


def _cert_payload(d: MultiDigraph, cert: ExceptionCertificate) -> dict:
    nm = _names(d)
    return {
        "kind": "exception",
        "catalog_id": cert.catalog_id,
        "reversed": cert.reversed,
        "dashed_flags": list(cert.dashed_flags),
        "mapping": [[nm[v], w] for v, w in cert.mapping],
        "witness": [nm[v] for v in cert.witness],
    }


def outcome_to_json(d: MultiDigraph, out: Outcome, extra: Optional[dict] = None) -> str:
    if out.decomposition is not None:
        names = arc_names(d)
        payload = {
            "kind": "decomposition",
            "classes": [sorted(list(names[a]) for a in cls) for cls in out.decomposition.classes()],
        }
    else:
        payload = _cert_payload(d, out.exception)
    payload["route"] = out.route
    payload["fallback"] = out.fallback
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def decomposition_from_json(d: MultiDigraph, text: str) -> Decomposition:
    """Read a decomposition certificate back onto the arc ids of ``d``."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(payload, dict) or payload.get("kind") != "decomposition":
        raise ParseError(0, "not a decomposition certificate")
    classes = payload.get("classes")
    if not isinstance(classes, list) or len(classes) != 2:
        raise ParseError(0, "a decomposition certificate holds exactly two classes")
    by_name = {v: k for k, v in arc_names(d).items()}
    out = []
    for cls in classes:
        ids = set()
        for item in cls:
            try:
                key = tuple(int(x) for x in item)
            except (TypeError, ValueError):
                raise ParseError(0, f"bad arc name {item!r}") from None
            if key not in by_name:
                raise ParseError(0, f"arc {list(key)} does not exist in the graph")
            ids.add(by_name[key])
        out.append(ids)
    return Decomposition(out[0], out[1])


def infer_split(g: MultiDigraph) -> SplitInstance:
    """A split partition of g read off its degree sequence.

    Uses the degree criterion on the underlying simple graph: with degrees
    sorted decreasingly, the largest prefix m with d_m >= m - 1 is the
    clique side.  Raises InvalidPartition when g is not split.
    """
    adj = {v: set() for v in g.vertices}
    for t, h in g.arcs.values():
        adj[t].add(h)
        adj[h].add(t)
    order = sorted(g.vertices, key=lambda v: (-len(adj[v]), v))
    deg = [len(adj[v]) for v in order]
    m = max(i for i in range(1, len(order) + 1) if deg[i - 1] >= i - 1)
    v2 = order[:m]
    return certify_split(g, set(order[m:]), v2)
