"""Top-level decision procedure for 2-arc-strong split digraphs.

``solve_split`` picks a construction by the size and connectivity of the
semicomplete part.  Every decomposition it returns has been checked by
:func:`verify_decomposition`.  If a construction hits an internal
inconsistency, the exact search answers instead and the outcome is flagged.
"""
from __future__ import annotations

import logging
from itertools import combinations, product
from typing import Optional

from .catalog import local_certificate, match_catalog, match_exception
from .digraph import MultiDigraph, is_k_arc_strong
from .errors import InternalInvariantFailure, NotTwoArcStrong, PreconditionViolated
from .procedures import ProcedureLedger, run_pipeline
from .search import (
    Decomposition,
    Outcome,
    brute_force_sad,
    extend_to_outside_vertices,
    find_decomposition,
    sad_semicomplete_multi,
    verify_decomposition,
)
from .semicomplete import SplitInstance, maximal_split_partition
from .split import PendingDecomposition, lift, pending_extend

__all__ = ["solve_split", "solve_small_v2", "SPLITTING_SEARCH_CAP"]

log = logging.getLogger(__name__)

# upper bound on splitting-arc sets tried for |V2| = 4 before the exact search
SPLITTING_SEARCH_CAP = 4000


def _split_off_vertex(g: MultiDigraph, x: int):
    """Remove x (two in- and two out-neighbours u, v) and add u->v, v->u.

    Returns the smaller graph and ``{new id: (in-arc, out-arc)}``.
    """
    ins = {g.tail(a): a for a in g.in_arcs(x)}
    outs = {g.head(a): a for a in g.out_arcs(x)}
    if len(ins) != 2 or set(ins) != set(outs) or g.in_degree(x) != 2 or g.out_degree(x) != 2:
        raise InternalInvariantFailure(f"vertex {x} is not attached by two 2-cycles")
    u, v = sorted(ins)
    nid = g.next_arc_id()
    extra = {nid: (u, v), nid + 1: (v, u)}
    lift_map = {nid: (ins[u], outs[v]), nid + 1: (ins[v], outs[u])}
    kept = {a: e for a, e in g.arcs.items() if x not in e}
    kept.update(extra)
    return MultiDigraph(g.vertices - {x}, kept), lift_map


def _separate_pair(h: MultiDigraph, dec: Decomposition, pair) -> Decomposition:
    """Put the two splitting arcs of one vertex into different classes.

    Some other arc p runs parallel to one of them.  Moving that splitting
    arc across, or swapping it with p, keeps both classes strong because the
    class that loses an arc keeps another arc with the same ends.
    """
    a, b = pair
    cls = [set(dec.a1), set(dec.a2)]
    k = 0 if a in cls[0] else 1
    if (b in cls[k]) != (a in cls[k]):
        return dec
    for s in (a, b):
        ends = h.arcs[s]
        parallel = [p for p in h.arcs_between(*ends) if p not in pair]
        if not parallel:
            continue
        p = min(parallel)
        cls[k].discard(s)
        cls[1 - k].add(s)
        if p in cls[1 - k]:
            cls[1 - k].discard(p)
            cls[k].add(p)
        out = Decomposition(*cls)
        if not verify_decomposition(h, out):
            raise InternalInvariantFailure("redistributing splitting arcs broke a class")
        return out
    return None


def _solve_three(g: MultiDigraph, v1) -> Decomposition:
    """Induction on V1 when the semicomplete part has at most three vertices."""
    if not v1:
        dec = find_decomposition(g)
        if dec is None:
            raise InternalInvariantFailure("small semicomplete part has no decomposition")
        return dec
    x = min(v1)
    h, lift_map = _split_off_vertex(g, x)
    if not is_k_arc_strong(h, 2):
        raise InternalInvariantFailure("splitting off a V1 vertex lost 2-arc-strength")
    dec = _solve_three(h, v1 - {x})
    dec = _separate_pair(h, dec, tuple(lift_map))
    if dec is None:
        raise InternalInvariantFailure("no parallel arc to separate the splitting arcs")
    d1, d2 = lift(dec, lift_map)
    out = Decomposition(d1, d2)
    if not verify_decomposition(g, out):
        raise InternalInvariantFailure("lifted decomposition is not strong")
    return out


def _pair_options(g: MultiDigraph, x: int, v2: frozenset) -> list:
    """Splitting choices at x: nothing, one pair, or two disjoint pairs."""
    singles = [
        (i, o)
        for i in g.in_arcs(x)
        for o in g.out_arcs(x)
        if g.tail(i) != g.head(o)
    ]
    doubles = []
    for p, q in combinations(singles, 2):
        if p[0] == q[0] or p[1] == q[1]:
            continue
        # the redistribution step needs a parallel arc inside V2 for one of them
        if any(g.has_arc(g.tail(i), g.head(o)) for i, o in (p, q)):
            doubles.append((p, q))
    return [()] + [(s,) for s in singles] + doubles


def _try_splitting_set(s: SplitInstance, choice) -> Optional[Decomposition]:
    g = s.graph
    base = g.induced(s.v2)
    nid = g.next_arc_id()
    extra, lift_map, doubles = {}, {}, []
    for pairs in choice:
        ids = []
        for i, o in pairs:
            extra[nid] = (g.tail(i), g.head(o))
            lift_map[nid] = (i, o)
            ids.append(nid)
            nid += 1
        if len(ids) == 2:
            doubles.append(tuple(ids))
    h = base.with_arc_map(extra)
    if not is_k_arc_strong(h, 2) or match_catalog(h) is not None:
        return None
    dec = find_decomposition(h)
    if dec is None:
        return None
    for pair in doubles:
        dec = _separate_pair(h, dec, pair)
        if dec is None:
            return None
    d1, d2 = lift(dec, lift_map)
    try:
        out = pending_extend(s, PendingDecomposition(d1, d2))
    except (PreconditionViolated, InternalInvariantFailure):
        return None
    return out if verify_decomposition(g, out) else None


def _solve_four(s: SplitInstance) -> tuple:
    """Search over per-vertex splitting-arc sets; returns (decomposition, tries)."""
    v1 = sorted(s.v1)
    options = [_pair_options(s.graph, x, s.v2) for x in v1]
    tries = 0
    for choice in product(*options):
        tries += 1
        if tries > SPLITTING_SEARCH_CAP:
            break
        dec = _try_splitting_set(s, choice)
        if dec is not None:
            return dec, tries
    return None, tries


def _fallback(s: SplitInstance, why: str, route: str) -> Outcome:
    log.warning("exact-search fallback on %s: %s", route, why)
    dec = brute_force_sad(s.graph)
    if dec is None:
        raise InternalInvariantFailure(f"{route} failed ({why}) and no decomposition exists outside the catalog")
    return Outcome(decomposition=dec, route=route, fallback=True, note=why, trace=[f"fallback: {why}"])


def solve_small_v2(s: SplitInstance) -> Outcome:
    """Decide instances whose semicomplete part has at most four vertices."""
    if len(s.v2) > 4:
        raise PreconditionViolated("solve_small_v2 handles |V2| <= 4")
    if maximal_split_partition(s) is not s:
        raise PreconditionViolated("solve_small_v2 needs a maximal split partition")
    # the catalog names the exact family here, so it goes before local witnesses
    cert = match_catalog(s.graph) or local_certificate(s)
    if cert is not None:
        return Outcome(exception=cert, route="exception", trace=[f"certificate {cert.label}"])
    if len(s.v2) <= 3:
        route = "small-induction"
        try:
            dec = _solve_three(s.graph, frozenset(s.v1))
        except InternalInvariantFailure as exc:
            return _fallback(s, str(exc), route)
        return Outcome(decomposition=dec, route=route, trace=[f"split off {len(s.v1)} vertices"])
    route = "splitting-search"
    dec, tries = _solve_four(s)
    if dec is None:
        return _fallback(s, f"no splitting-arc set worked after {tries} tries", route)
    return Outcome(decomposition=dec, route=route, trace=[f"splitting-arc set found after {tries} tries"])


def solve_split(s: SplitInstance) -> Outcome:
    """Strong arc decomposition of a 2-arc-strong split digraph, or a certificate."""
    if len(s.graph) < 2 or not is_k_arc_strong(s.graph, 2):
        raise NotTwoArcStrong("input must be 2-arc-strong")
    ms = maximal_split_partition(s)
    note = "" if ms is s else f"promoted {sorted(s.v1 - ms.v1)} into V2"
    if len(ms.v2) <= 4:
        out = solve_small_v2(ms)
        out.note = "; ".join(x for x in (note, out.note) if x)
        return out
    cert = match_exception(ms)
    if cert is not None:
        return Outcome(exception=cert, route="exception", note=note, trace=[f"certificate {cert.label}"])
    d_v2 = ms.d_v2()
    if is_k_arc_strong(d_v2, 2):
        route = "semicomplete-extend"
        try:
            inner = sad_semicomplete_multi(d_v2)
            if inner.decomposition is None:
                raise InternalInvariantFailure("semicomplete part on five or more vertices matched the catalog")
            dec = extend_to_outside_vertices(ms.graph, ms.v2, inner.decomposition)
        except (InternalInvariantFailure, PreconditionViolated) as exc:
            return _fallback(ms, str(exc), route)
        return Outcome(decomposition=dec, route=route, note=note, trace=["decompose D[V2] and extend"])
    route = "critical-pair"
    ledger = ProcedureLedger()
    try:
        dec = run_pipeline(ms, ledger)
    except (InternalInvariantFailure, PreconditionViolated) as exc:
        out = _fallback(ms, str(exc), route)
        out.trace = ledger.trace_lines() + out.trace
        out.note = "; ".join(x for x in (note, out.note) if x)
        return out
    if not verify_decomposition(ms.graph, dec):
        return _fallback(ms, "pipeline result failed verification", route)
    lines = [f"boundary sizes {ledger.boundary_sizes}"] + ledger.trace_lines()
    return Outcome(decomposition=dec, route=route, note=note, trace=lines)
