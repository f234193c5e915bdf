"""Repairs when the terminal strong component of D[V2] has three vertices.

Every call performs a single step and returns the new critical pair state;
the driver re-classifies afterwards, so the relabelling between steps falls
out of recomputing the labels from scratch.
"""
from __future__ import annotations

from .digraph import MultiDigraph
from .errors import InternalInvariantFailure
from .split import CriticalPairState, Work, critical_pair, make_path, rebuild_feasible

__all__ = ["beta3_triangle"]


def _arc(w: Work, u: int, v: int) -> int:
    ids = [a for a in w.g.arcs_between(u, v) if a not in w.synthetic]
    if not ids:
        raise InternalInvariantFailure(f"expected arc {u}->{v} is missing")
    return min(ids)


def _has(w: Work, u: int, v: int) -> bool:
    return w.s.graph.has_arc(u, v)


def _nv1(w: Work, v: int) -> set:
    return {h for h in w.s.graph.out_neighbors(v) if h in w.v1}


def _seeded(w: Work, st: CriticalPairState, c, walks) -> CriticalPairState:
    paths = tuple(make_path(w.g, arcs, st.X, st.Y) for arcs in walks)
    return critical_pair(w, st.X, st.Y, c, seed=paths)


def _change_initial(w: Work, st: CriticalPairState, c, i: int, new_start: int) -> tuple:
    """Replace the first arc q_i q_i+ of path i by new_start -> q_i+."""
    q = st.paths()[i]
    first = q.vertices[1]
    e = _arc(w, new_start, first)
    if first in c:
        c = rebuild_feasible(w, c, first, e)
    walks = [list(st.q1.arcs), list(st.q2.arcs)]
    walks[i] = [e] + list(q.arcs[1:])
    return c, walks


def _cycle_labels(w: Work, cp: frozenset, first: int) -> tuple:
    """(a, b, c) with a = first and a->b->c->a a 3-cycle of D[Cp]."""
    others = sorted(cp - {first})
    for b in others:
        (c,) = set(others) - {b}
        if _has(w, first, b) and _has(w, b, c) and _has(w, c, first):
            return first, b, c
    raise InternalInvariantFailure("terminal component has no 3-cycle through the start vertex")


def _d0(w: Work, st: CriticalPairState, cp: frozenset):
    """Shortcut a path that passes an out-neighbour of the component."""
    paths = st.paths()
    for v in sorted(cp):
        for i in (0, 1):
            q = paths[i]
            other = paths[1 - i]
            for u in q.vertices[2:]:
                if u not in w.v1 or not _has(w, v, u):
                    continue
                vu = _arc(w, v, u)
                if vu == other.arcs[0]:
                    continue
                in_u = q.arcs[q.position(u) - 1]
                c = st.c
                if in_u in c.arcs():
                    c = rebuild_feasible(w, c, u, vu)
                walks = [list(st.q1.arcs), list(st.q2.arcs)]
                walks[i] = [vu] + list(q.suffix_from(u))
                return _seeded(w, st, c, walks), f"v={v} u={u}"
    return None


def _gadget(w, st, ledger, x1, x2, t, c, name, mirrored):
    """Two x2->x1 copies and one x1->x2 copy; t's path restarts at x2."""
    from .procedures import _gadget as add

    add(w, ledger, [(x2, x1), (x2, x1), (x1, x2)], {x1, x2, t}, name, mirrored)
    idx = 0 if t in st.q1.vertices else 1
    q = st.paths()[idx]
    x2t = _arc(w, x2, t)
    tt = q.arcs[q.position(t)]
    c = rebuild_feasible(w, c, t, x2t) if t in c else c.with_pair(t, x2t, tt)
    walks = [list(st.q1.arcs), list(st.q2.arcs)]
    walks[idx] = [x2t] + list(q.suffix_from(t))
    ledger.record(name, mirrored, f"x1={x1} x2={x2} t={t}")
    return _seeded(w, st, c, walks)


def _fixed_shape(g: MultiDigraph, v: int, vplus: int, out_other: int, ins: set) -> bool:
    return g.out_neighbors(v) == {vplus, out_other} and g.in_neighbors(v) == ins


def beta3_triangle(w: Work, st: CriticalPairState, cut: int, ledger, mirrored: bool) -> CriticalPairState:
    from .procedures import _choose_optional

    cp = st.X
    if len(cp) != 3:
        raise InternalInvariantFailure("three-vertex repair called on another component size")
    hit = _d0(w, st, cp)
    if hit is not None:
        new, note = hit
        ledger.record("D0", mirrored, note)
        return new
    g = w.s.graph
    q1, q2 = st.q1, st.q2
    on = {v for q in (q1, q2) for v in q.vertices if v in w.v1}
    c = st.c

    if q1.start == q2.start:
        a, b, cc = _cycle_labels(w, cp, q1.start)
        if not ((_nv1(w, b) | _nv1(w, cc)) & on):  # D1
            i = next((k for k in (0, 1) if st.paths()[k].vertices[1] not in st.paths()[1 - k].vertices), None)
            if i is None:
                raise InternalInvariantFailure("both first V1 vertices lie on both paths")
            qi = st.paths()[i]
            ai = qi.vertices[1]
            if ai not in c:
                c = c.with_pair(ai, qi.arcs[0], qi.arcs[1])
            if _has(w, b, a):
                us = sorted(_nv1(w, cc))
                if not us:
                    raise InternalInvariantFailure("component vertex without a V1 out-neighbour")
                c = rebuild_feasible(w, c, us[0], _arc(w, cc, us[0]))
                ledger.record("D1", mirrored, f"a={a} u={us[0]}")
                return _seeded(w, st, c, [q1.arcs, q2.arcs])
            nb = sorted(_nv1(w, b))
            escape = [u for u in nb if g.out_neighbors(u) - {b, cc}]
            if not escape:
                u1 = next((u for u in nb if _has(w, u, cc)), None)
                u2s = [u for u in sorted(_nv1(w, cc)) if u != u1 and g.out_neighbors(u) - {b, cc}]
                if u1 is None or not u2s:
                    raise InternalInvariantFailure("no escape pair from {b, c}")
                u2 = u2s[0]
                c = rebuild_feasible(w, c, u1, _arc(w, b, u1), out_arc=_arc(w, u1, cc))
                u2p = min(g.out_neighbors(u2) - {b, cc})
                c = rebuild_feasible(w, c, u2, _arc(w, cc, u2), out_arc=_arc(w, u2, u2p))
                ledger.record("D1", mirrored, f"a={a} u1={u1} u2={u2}")
                return _seeded(w, st, c, [q1.arcs, q2.arcs])
            u = escape[0]
            up = min(g.out_neighbors(u) - {b, cc})
            c = rebuild_feasible(w, c, u, _arc(w, b, u), out_arc=_arc(w, u, up))
            ledger.record("D1", mirrored, f"a={a} u={u}")
            return _seeded(w, st, c, [q1.arcs, q2.arcs])
        # D2: move one start to b or c
        for x in (b, cc):
            for i, q in enumerate((q1, q2)):
                if q.vertices[1] in _nv1(w, x):
                    c2, walks = _change_initial(w, st, c, i, x)
                    ledger.record("D2", mirrored, f"start {a}->{x}")
                    return _seeded(w, st, c2, walks)
        raise InternalInvariantFailure("shared start without a movable first arc")

    # distinct starts: label so that Q1 starts at a, Q2 at b and a->b->c->a
    starts = {q1.start, q2.start}
    (cc,) = cp - starts
    b = next((v for v in starts if _has(w, v, cc)), None)
    if b is None:
        raise InternalInvariantFailure("no start vertex dominates the third vertex")
    (a,) = starts - {b}
    ia = 0 if q1.start == a else 1
    ib = 1 - ia
    qa, qb = st.paths()[ia], st.paths()[ib]
    a1, b1 = qa.vertices[1], qb.vertices[1]
    nc = _nv1(w, cc)
    free_c = sorted(nc - on)
    if free_c:  # D3
        u = free_c[0]
        c = rebuild_feasible(w, c, u, _arc(w, cc, u))
        ledger.record("D3", mirrored, f"c={cc} u={u}")
        return _seeded(w, st, c, [q1.arcs, q2.arcs])
    if a1 == b1:  # D4
        for x in (a, b):
            if _nv1(w, x) - {a1}:
                i = ia if x == a else ib
                c2, walks = _change_initial(w, st, c, i, cc)
                ledger.record("D4", mirrored, f"start {x}->{cc}")
                return _seeded(w, st, c2, walks)
        from .procedures import _gadget as add

        add(w, ledger, [(a, b), (b, cc), (cc, a)], {a, b, cc, a1}, "D4", mirrored)
        ledger.record("D4", mirrored, f"triangle a={a} b={b} c={cc} a1={a1}")
        return _seeded(w, st, c, [q1.arcs, q2.arcs])
    # D5
    if nc == {a1}:
        c2, walks = _change_initial(w, st, c, ia, cc)
        ledger.record("D5", mirrored, f"start {a}->{cc}")
        return _seeded(w, st, c2, walks)
    if b1 not in nc:
        raise InternalInvariantFailure("third vertex misses both first V1 vertices")
    if _has(w, b, a) or _nv1(w, b) - {a1, b1}:
        c2, walks = _change_initial(w, st, c, ib, cc)
        ledger.record("D5", mirrored, f"start {b}->{cc}")
        return _seeded(w, st, c2, walks)
    nb, na = _nv1(w, b), _nv1(w, a)
    if nc == {b1}:
        if nb == {b1}:
            return _gadget(w, st, ledger, b, cc, b1, c, "D5", mirrored)
        # nb == {a1, b1}
        if _has(w, a, cc) or na - {a1, b1}:
            c2, walks = _change_initial(w, st, c, ib, cc)
            ba1 = _arc(w, b, a1)
            if a1 in c2:
                c2 = rebuild_feasible(w, c2, a1, ba1)
            walks[ia] = [ba1] + list(qa.arcs[1:])
            ledger.record("D5", mirrored, f"starts {b}->{cc}, {a}->{b}")
            return _seeded(w, st, c2, walks)
        a1p, b1p = qa.vertices[2], qb.vertices[2]
        options = []
        if not _fixed_shape(g, a1, a1p, a, {a, b}):
            options.append(a1)
        if not _fixed_shape(g, b1, b1p, b, {b, cc}):
            options.append(b1)
        if not options:
            raise InternalInvariantFailure("triangle obstruction reached inside the repair loop")
        pick = _choose_optional(ledger, mirrored, options)
        if pick == b1:
            if a1 not in c:
                c = c.with_pair(a1, qa.arcs[0], qa.arcs[1])
            return _gadget(w, st, ledger, b, cc, b1, c, "D5", mirrored)
        if b1 in c:
            c = rebuild_feasible(w, c, b1, _arc(w, cc, b1))
        else:
            c = c.with_pair(b1, _arc(w, cc, b1), qb.arcs[1])
        walks = [list(st.q1.arcs), list(st.q2.arcs)]
        walks[ib] = [_arc(w, cc, b1)] + list(qb.arcs[1:])
        st2 = _seeded(w, st, c, walks)
        return _gadget(w, st2, ledger, a, b, a1, st2.c, "D5", mirrored)
    # nc == {a1, b1}
    if _has(w, a, cc) or na - {a1, b1} or na == {a1}:
        c2, walks = _change_initial(w, st, c, ia, cc)
        ledger.record("D5", mirrored, f"start {a}->{cc}")
        return _seeded(w, st, c2, walks)
    a1p = qa.vertices[2]
    options = [b1]
    if not _fixed_shape(g, a1, a1p, cc, {a, cc}):
        options.append(a1)
    pick = _choose_optional(ledger, mirrored, sorted(options))
    if pick == b1:
        if a1 not in c:
            c = c.with_pair(a1, qa.arcs[0], qa.arcs[1])
        return _gadget(w, st, ledger, b, cc, b1, c, "D5", mirrored)
    c2, walks = _change_initial(w, st, c, ia, cc)
    st2 = _seeded(w, st, c2, walks)
    jb = 0 if st2.q1.start == b else 1
    qb2 = st2.paths()[jb]
    c3 = st2.c
    if b1 in c3:
        c3 = rebuild_feasible(w, c3, b1, qb2.arcs[0])
    else:
        c3 = c3.with_pair(b1, qb2.arcs[0], qb2.arcs[1])
    st3 = critical_pair(w, st2.X, st2.Y, c3, seed=st2.paths())
    return _gadget(w, st3, ledger, cc, a, a1, st3.c, "D5", mirrored)
