"""Repair loop that turns a critical path pair into a 2-arc-strong split image.

Each step looks at the cut arcs of the split image Gbar, names the local
situation (a :class:`CutArcCase`) and applies one repair procedure that
changes the feasible set, the path pair and possibly adds synthetic arcs
inside V2.  Mirror-image situations are handled by running the same
procedure on the reversed instance; those steps carry a ``*`` suffix.

When the loop ends, a decomposition of Gbar is lifted to the host.  If no
synthetic arc was added, the lifted classes form a pending decomposition;
otherwise the lifted arcs away from the gadget vertices are kept and the rest
is re-assigned by a pinned exact search.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .catalog import find_deg2_witness, find_triangle_witness
from .digraph import MultiDigraph, PathInDigraph, acyclic_ordering, cut_arcs, is_k_arc_strong, is_strong
from .errors import InternalInvariantFailure
from .search import Decomposition, find_decomposition, verify_decomposition
from .semicomplete import SplitInstance, nice_decomposition
from .split import (
    CriticalPairState,
    FeasibleSet,
    PendingDecomposition,
    Work,
    build_gbar,
    critical_pair,
    lift,
    make_path,
    pending_extend,
    rebuild_feasible,
)

__all__ = [
    "CutArcCase",
    "ProcedureLedger",
    "classify_cut_arc",
    "targets_xy",
    "run_pipeline",
    "reallocate_additional_arcs",
    "detect_local_counterexamples",
]


@dataclass(frozen=True)
class CutArcCase:
    """Which repair family applies, in which orientation.

    ``kind`` is one of ``alpha`` (strong V2 part), ``beta1`` (single-vertex
    terminal component), ``beta3`` (cut arc inside the terminal component).
    ``mirrored`` means the situation occurs in the reversed instance.
    """

    kind: str
    mirrored: bool
    detail: tuple = ()


@dataclass
class ProcedureLedger:
    entries: list = field(default_factory=list)
    boundary_sizes: list = field(default_factory=list)
    synthetic: list = field(default_factory=list)
    optional_choice: dict = field(default_factory=dict)

    def record(self, name: str, mirrored: bool, note: str = ""):
        self.entries.append((name + ("*" if mirrored else ""), note))

    def trace_lines(self) -> list:
        out = []
        for i, (name, note) in enumerate(self.entries, start=1):
            out.append(f"{i:3d} {name}" + (f"  {note}" if note else ""))
        return out


def detect_local_counterexamples(s: SplitInstance):
    """Both local obstruction detectors: ``(deg2 hit, triangle hit)``."""
    return find_deg2_witness(s.graph), find_triangle_witness(s)


# -- orientation context ----------------------------------------------------


@dataclass(frozen=True)
class _Context:
    strong: bool
    nd: object  # nice decomposition of D[V2] or of D[Cp]
    components: tuple
    X: frozenset
    Y: frozenset


def _context(w: Work) -> _Context:
    d2 = w.original_d_v2()
    if is_strong(d2):
        nd = nice_decomposition(d2)
        return _Context(True, nd, (), nd.last, nd.first)
    order = acyclic_ordering(d2)
    comps = order.components
    cp, c1 = comps[-1], comps[0]
    nd = nice_decomposition(d2.induced(cp)) if len(cp) >= 4 else None
    X = nd.last if nd is not None else cp
    if len(c1) >= 4:
        Y = nice_decomposition(d2.induced(c1)).first
    else:
        Y = c1
    return _Context(False, nd, comps, X, Y)


def targets_xy(w: Work):
    """The source and sink vertex sets for the path pair."""
    ctx = _context(w)
    return ctx.X, ctx.Y


def _alpha_shape(w: Work, nd, gbar: MultiDigraph) -> Optional[tuple]:
    """(x1, x2) if the last two blocks are singletons and x2 has one out-arc."""
    if nd is None or len(nd) < 2 or len(nd.last) != 1 or len(nd.blocks[-2]) != 1:
        return None
    (x1,) = nd.last
    (x2,) = nd.blocks[-2]
    if not nd.backward_arcs or nd.ends and dict(nd.ends)[nd.backward_arcs[0]] != (x1, x2):
        return None
    if gbar.out_degree(x2) != 1:
        return None
    return x1, x2


def _beta1_shape(ctx: _Context, gbar: MultiDigraph) -> Optional[tuple]:
    comps = ctx.components
    if len(comps) < 2 or len(comps[-1]) != 1 or len(comps[-2]) != 1:
        return None
    (b,) = comps[-1]
    (a,) = comps[-2]
    if gbar.out_degree(a) != 1:
        return None
    return a, b


def _classify_one(w: Work, gbar: MultiDigraph) -> Optional[tuple]:
    ctx = _context(w)
    if ctx.strong:
        shape = _alpha_shape(w, ctx.nd, gbar)
        return ("alpha", shape) if shape else None
    shape = _beta1_shape(ctx, gbar)
    if shape:
        return ("beta1", shape)
    cp = ctx.components[-1]
    inside = sorted(a for a in cut_arcs(gbar) if gbar.tail(a) in cp and gbar.head(a) in cp)
    if inside:
        if len(cp) >= 4:
            shape = _alpha_shape(w, ctx.nd, gbar)
            return ("alpha", shape) if shape else ("beta3-unshaped", (inside[0],))
        return ("beta3", (len(cp), inside[0]))
    return None


def classify_cut_arc(w: Work, gbar: MultiDigraph, gbar_rev: MultiDigraph) -> CutArcCase:
    """Name the repair family for a split image that is not 2-arc-strong."""
    here = _classify_one(w, gbar)
    there = _classify_one(w.reversed(), gbar_rev)
    order = ["alpha", "beta1", "beta3"]
    best = None
    for kind in order:
        if here and here[0] == kind:
            best = CutArcCase(kind, False, here[1])
            break
        if there and there[0] == kind:
            best = CutArcCase(kind, True, there[1])
            break
    if best is None:
        raise InternalInvariantFailure("cut arc of the split image fits no known case")
    return best


# -- small helpers ------------------------------------------------------------


def _arc(w: Work, u: int, v: int) -> int:
    """A real arc u->v of the host (smallest id)."""
    ids = [a for a in w.g.arcs_between(u, v) if a not in w.synthetic]
    if not ids:
        raise InternalInvariantFailure(f"expected arc {u}->{v} is missing")
    return min(ids)


def _out_v1(w: Work, v: int) -> list:
    return sorted(h for h in w.s.graph.out_neighbors(v) if h in w.v1)


def _in_arc_on(q: PathInDigraph, v: int) -> int:
    return q.arcs[q.position(v) - 1]


def _out_arc_on(q: PathInDigraph, v: int) -> int:
    return q.arcs[q.position(v)]


def _v1_on(w: Work, q: PathInDigraph) -> set:
    return {v for v in q.vertices if v in w.v1}


def _touched(w: Work, st: CriticalPairState) -> set:
    """V1 vertices met by either path (crossing arcs of any kind)."""
    return _v1_on(w, st.q1) | _v1_on(w, st.q2)


def _new_state(w: Work, st: CriticalPairState, c: FeasibleSet, walks) -> CriticalPairState:
    paths = tuple(make_path(w.g, arcs, st.X, st.Y) for arcs in walks)
    return critical_pair(w, st.X, st.Y, c, seed=paths)


def _keep_in(c: FeasibleSet, w: Work, u: int, e_arc: int, q: Optional[PathInDigraph] = None) -> FeasibleSet:
    """Rebuild at u only if u already carries a feasible pair."""
    if u in c:
        return rebuild_feasible(w, c, u, e_arc)
    return c


# -- alpha family (x1 alone in the last block, x2 alone before it) -----------


def _reroute_through(w: Work, st: CriticalPairState, x1: int, x2: int) -> CriticalPairState:
    """Make some path use the arc x1->x2 without changing the boundary."""
    e12 = _arc(w, x1, x2)
    for q in st.paths():
        if e12 in q.arcs:
            return st.with_order(st.q2 if q == st.q1 else st.q1)
    # shortest x2 -> (Q1 u Q2) path inside V2 avoiding x1; its first hit is
    # where it joins one of the paths
    on_path = {}
    for j, q in enumerate(st.paths()):
        for v in q.vertices[1:]:
            on_path.setdefault(v, j)
    d2 = w.d_v2()
    parent = {x2: None}
    queue = [x2]
    hit = None
    for v in queue:
        if v in on_path:
            hit = v
            break
        for a in sorted(d2.out_arcs(v)):
            h = d2.head(a)
            if h not in parent and h != x1:
                parent[h] = a
                queue.append(h)
    if hit is None:
        raise InternalInvariantFailure("x2 cannot reach either path inside V2")
    tail_arcs = []
    v = hit
    while parent[v] is not None:
        tail_arcs.append(parent[v])
        v = d2.tail(parent[v])
    prefix = [e12] + tail_arcs[::-1]
    candidates = []
    for j, q in enumerate(st.paths()):
        if hit in q.vertices:
            candidates.append((j, prefix + list(q.suffix_from(hit))))
    if hit in st.Y:
        candidates += [(j, prefix) for j in (0, 1)]
    for j, new in candidates:
        other = st.paths()[1 - j]
        try:
            p = make_path(w.g, new, st.X, st.Y)
            cand = critical_pair(w, st.X, st.Y, st.c, seed=(other, p))
        except InternalInvariantFailure:
            continue
        if cand.boundary == st.boundary and e12 in cand.q2.arcs + cand.q1.arcs:
            return cand.with_order(cand.q2 if e12 in cand.q1.arcs else cand.q1)
    raise InternalInvariantFailure("could not route a path through x1->x2")


def _gadget(w: Work, ledger: ProcedureLedger, pairs, vertices, name: str, mirrored: bool) -> list:
    ids = w.add_synthetic(pairs, vertices)
    ledger.synthetic.append((name + ("*" if mirrored else ""), tuple(pairs), tuple(sorted(vertices))))
    return ids


def _alpha(w: Work, st: CriticalPairState, x1: int, x2: int, ledger: ProcedureLedger, mirrored: bool):
    c = st.c
    us = _out_v1(w, x2)
    on_paths = _touched(w, st)
    for u in us:  # A1 needs nothing from the path shapes
        if u not in on_paths:
            c2 = rebuild_feasible(w, c, u, _arc(w, x2, u))
            ledger.record("A1", mirrored, f"u={u}")
            return critical_pair(w, st.X, st.Y, c2, seed=st.paths())
    e12 = _arc(w, x1, x2)
    try:
        st = _reroute_through(w, st, x1, x2)
    except InternalInvariantFailure:
        # with a terminal component no x2 -> Y walk inside V2 may exist;
        # splice x1 x2 u onto the path that already passes u instead
        for u in us:
            for j, q in enumerate(st.paths()):
                other = st.paths()[1 - j]
                if u in q.vertices and x2 not in other.vertices:
                    c2 = _keep_in(c, w, u, _arc(w, x2, u))
                    walks = [None, None]
                    walks[j] = [e12, _arc(w, x2, u)] + list(q.suffix_from(u))
                    walks[1 - j] = list(other.arcs)
                    ledger.record("A2", mirrored, f"u={u} spliced")
                    return _new_state(w, st, c2, walks)
        raise
    q1, q2 = st.q1, st.q2  # q2 uses x1->x2
    if q1.vertices[0] != x1 or q1.vertices[1] not in w.v1 or x2 in q1.vertices:
        raise InternalInvariantFailure("path pair does not have the expected alpha shape")
    t = q1.vertices[1]
    tt = q1.arcs[1]
    tplus = q1.vertices[2]
    on_paths = _touched(w, st)

    for u in us:  # A2
        if u in q2.vertices:
            c2 = _keep_in(c, w, u, _arc(w, x2, u))
            walk = [e12, _arc(w, x2, u)] + list(q2.suffix_from(u))
            ledger.record("A2", mirrored, f"u={u}")
            return _new_state(w, st, c2, [q1.arcs, walk])
    for u in us:  # A3
        if u in q1.vertices and u != t:
            c2 = _keep_in(c, w, u, _arc(w, x2, u))
            w2 = [e12, _arc(w, x2, u)] + list(q1.suffix_from(u))
            if tplus in q2.vertices:
                w1 = [q1.arcs[0], tt] + list(q2.suffix_from(tplus))
            else:
                w1 = [q1.arcs[0], tt, _arc(w, tplus, x2)] + list(q2.suffix_from(x2))
            ledger.record("A3", mirrored, f"u={u}")
            return _new_state(w, st, c2, [w1, w2])
    if t in us:
        bd_v = st.v_boundary
        ss = [s for s in _out_v1(w, x1) if s != t]
        x2t = _arc(w, x2, t)
        if t in c:
            c_t = rebuild_feasible(w, c, t, x2t)
        else:
            c_t = c.with_pair(t, x2t, tt)
        for s in ss:  # A4
            if s not in bd_v:
                c2 = rebuild_feasible(w, c_t, s, _arc(w, x1, s))
                sp_arc = c2.pair(s)[1]
                splus = w.g.head(sp_arc)
                w1 = [e12, x2t, tt] + list(q1.suffix_from(tplus))
                if splus in q2.vertices:
                    w2 = [_arc(w, x1, s), sp_arc] + list(q2.suffix_from(splus))
                elif splus in st.Y:
                    w2 = [_arc(w, x1, s), sp_arc]
                else:
                    w2 = [_arc(w, x1, s), sp_arc, _arc(w, splus, x2)] + list(q2.suffix_from(x2))
                ledger.record("A4", mirrored, f"t={t} s={s}")
                return _new_state(w, st, c2, [w1, w2])
        for s in ss:  # A5
            if s in bd_v:
                c2 = c_t
                if s in c2:
                    c2 = rebuild_feasible(w, c2, s, _arc(w, x1, s))
                if s in q1.vertices:
                    w1 = [_arc(w, x1, s)] + list(q1.suffix_from(s))
                    w2 = list(q2.arcs)
                else:
                    w1 = [e12, x2t] + list(q1.suffix_from(t))
                    w2 = [_arc(w, x1, s)] + list(q2.suffix_from(s))
                ledger.record("A5", mirrored, f"t={t} s={s}")
                return _new_state(w, st, c2, [w1, w2])
    # A6 / A7 / A8
    if _out_v1(w, x1) != [t] or us != [t] or t in q2.vertices:
        raise InternalInvariantFailure("alpha repair reached its last case without the expected shape")
    g = w.s.graph
    outs, ins = g.out_neighbors(t), g.in_neighbors(t)
    if outs == {x1, tplus} and ins == {x1, x2}:
        raise InternalInvariantFailure("degree-two obstruction reached inside the repair loop")
    name = "A6" if outs - {x1, tplus} else "A7"
    return _alpha_gadget(w, st, x1, x2, t, ledger, name, mirrored)


def _alpha_gadget(w, st, x1, x2, t, ledger, name, mirrored, mark=None):
    """Add x2->x1 twice and x1->x2 once; route the t-path through the new x1->x2."""
    q1, q2 = st.q1, st.q2
    if t not in q1.vertices:
        q1, q2 = q2, q1
    ids = _gadget(w, ledger, [(x2, x1), (x2, x1), (x1, x2)], {x1, x2, t} | set(mark or ()), name, mirrored)
    x2t = _arc(w, x2, t)
    tt = _out_arc_on(q1, t)
    c = st.c
    c2 = rebuild_feasible(w, c, t, x2t) if t in c else c.with_pair(t, x2t, tt)
    pre = list(q1.prefix_to(x1)) if q1.start != x1 else []
    walk = pre + [ids[2], x2t] + list(q1.suffix_from(t))
    ledger.record(name, mirrored, f"t={t}")
    return _new_state(w, st, c2, [walk, q2.arcs])


# -- beta1: terminal component {b}, the one before it {a} --------------------


def _structure_fixed(g: MultiDigraph, v: int, vplus: int, a: int, b: int) -> bool:
    return g.out_neighbors(v) == {vplus, a} and g.in_neighbors(v) == {a, b}


def _choose_optional(ledger: ProcedureLedger, mirrored: bool, options: list) -> int:
    prior = ledger.optional_choice.get(not mirrored)
    pick = prior if prior in options else min(options)
    ledger.optional_choice[mirrored] = pick
    return pick


def _beta1(w: Work, st: CriticalPairState, a: int, b: int, ledger: ProcedureLedger, mirrored: bool):
    q = list(st.paths())
    for p in q:
        if p.start != b or p.vertices[1] not in w.v1:
            raise InternalInvariantFailure("paths do not leave the terminal vertex through V1")
        if a in p.vertices:
            raise InternalInvariantFailure("a path meets the vertex before the terminal one")
    bs = [p.vertices[1] for p in q]
    bplus = [p.vertices[2] for p in q]
    c = st.c
    us = _out_v1(w, a)
    on_paths = _touched(w, st)
    for u in us:  # B1
        if u not in on_paths:
            ledger.record("B1", mirrored, f"u={u}")
            return critical_pair(w, st.X, st.Y, rebuild_feasible(w, c, u, _arc(w, a, u)), seed=tuple(q))
    for u in us:  # B2
        for i in (0, 1):
            if u in q[i].vertices and bs[i] != u:
                c2 = _keep_in(c, w, u, _arc(w, a, u))
                walk = list(q[i].arcs[:2]) + [_arc(w, bplus[i], a), _arc(w, a, u)] + list(q[i].suffix_from(u))
                walks = [None, None]
                walks[i] = walk
                walks[1 - i] = q[1 - i].arcs
                ledger.record("B2", mirrored, f"u={u}")
                return _new_state(w, st, c2, walks)
    g = w.s.graph
    nb = sorted(h for h in g.out_neighbors(b))
    extra = [v for v in nb if v not in bs]
    hits = [i for i in (0, 1) if bs[i] in us]
    if not hits:
        raise InternalInvariantFailure("vertex a has no usable out-neighbour in V1")
    if extra:  # B3
        b3 = extra[0]
        i = hits[0]
        c2 = rebuild_feasible(w, c, bs[i], _arc(w, a, bs[i]), out_arc=q[i].arcs[1])
        if b3 not in st.v_boundary:
            c2 = rebuild_feasible(w, c2, b3, _arc(w, b, b3))
        walks = [list(q[0].arcs), list(q[1].arcs)]
        bb3 = _arc(w, b, b3)
        tail_i = [_arc(w, a, bs[i])] + list(q[i].suffix_from(bs[i]))
        if b3 not in q[0].vertices and b3 not in q[1].vertices:
            out3 = c2.pair(b3)[1]
            b3p = w.g.head(out3)
            if b3p == a:
                walks[i] = [bb3, out3] + tail_i
            elif b3p in st.Y:
                walks[i] = [bb3, out3]
            else:
                walks[i] = [bb3, out3, _arc(w, b3p, a)] + tail_i
        elif b3 in q[i].vertices:
            walks[i] = [bb3] + list(q[i].suffix_from(b3))
        else:
            j = 1 - i
            walks[i] = [bb3] + list(q[j].suffix_from(b3))
            walks[j] = list(q[j].arcs[:2]) + ([_arc(w, bplus[j], a)] if bplus[j] not in st.Y else []) + tail_i
        ledger.record("B3", mirrored, f"b3={b3} i={i + 1}")
        return _new_state(w, st, c2, walks)
    fixed = [i for i in hits if _structure_fixed(g, bs[i], bplus[i], a, b)]
    if len(hits) == 1:  # B4
        i = hits[0]
        if fixed:
            raise InternalInvariantFailure("degree-two obstruction reached inside the repair loop")
        return _beta_gadget(w, st, a, b, [i], ledger, "B4", mirrored)
    if len(fixed) == 2:  # B5
        return _beta_gadget(w, st, a, b, [0, 1], ledger, "B5", mirrored)
    options = [bs[i] for i in hits if i not in fixed]
    pick = _choose_optional(ledger, mirrored, options)
    return _beta_gadget(w, st, a, b, [bs.index(pick)], ledger, "B6", mirrored)


def _beta_gadget(w, st, a, b, which, ledger, name, mirrored):
    """Add b->a twice and a->b once; paths through b_i detour via a new b->a."""
    q = list(st.paths())
    bs = [p.vertices[1] for p in q]
    ids = _gadget(w, ledger, [(b, a), (b, a), (a, b)], {a, b} | {bs[i] for i in which}, name, mirrored)
    c = st.c
    walks = [list(q[0].arcs), list(q[1].arcs)]
    for k, i in enumerate(which):
        bi = bs[i]
        abi = _arc(w, a, bi)
        c = rebuild_feasible(w, c, bi, abi, out_arc=q[i].arcs[1])
        walks[i] = [ids[k], abi] + list(q[i].suffix_from(bi))
    ledger.record(name, mirrored, "b_i=" + ",".join(str(bs[i]) for i in which))
    return _new_state(w, st, c, walks)


# -- beta3 with a two-vertex terminal component -------------------------------


def _beta3_pair(w: Work, st: CriticalPairState, cut: int, ledger: ProcedureLedger, mirrored: bool):
    a, b = w.g.arcs[cut]
    c = st.c
    on_paths = _touched(w, st)
    us = _out_v1(w, a)
    for u in us:  # C1
        if u not in on_paths:
            ledger.record("C1", mirrored, f"u={u}")
            return critical_pair(w, st.X, st.Y, rebuild_feasible(w, c, u, _arc(w, a, u)), seed=st.paths())
    for u in us:  # C2
        for i, p in enumerate(st.paths()):
            if u in p.vertices:
                c2 = _keep_in(c, w, u, _arc(w, a, u))
                walks = [list(st.q1.arcs), list(st.q2.arcs)]
                walks[i] = [_arc(w, a, u)] + list(p.suffix_from(u))
                ledger.record("C2", mirrored, f"u={u}")
                return _new_state(w, st, c2, walks)
    raise InternalInvariantFailure("two-vertex terminal component without a V1 out-neighbour")


# -- driver -------------------------------------------------------------------


def _step(w: Work, st: CriticalPairState, case: CutArcCase, ledger: ProcedureLedger):
    if case.kind == "alpha":
        x1, x2 = case.detail
        return _alpha(w, st, x1, x2, ledger, case.mirrored)
    if case.kind == "beta1":
        a, b = case.detail
        return _beta1(w, st, a, b, ledger, case.mirrored)
    if case.kind == "beta3":
        size, cut = case.detail
        if size == 2:
            return _beta3_pair(w, st, cut, ledger, case.mirrored)
        if size == 3:
            from .triangle import beta3_triangle

            return beta3_triangle(w, st, cut, ledger, case.mirrored)
        if size == 1:
            raise InternalInvariantFailure("cut arc inside a one-vertex component")
    raise InternalInvariantFailure(f"no procedure for case {case.kind}")


def run_pipeline(s: SplitInstance, ledger: Optional[ProcedureLedger] = None) -> Decomposition:
    """Critical-pair construction plus the repair loop (needs |V2| >= 5)."""
    ledger = ledger if ledger is not None else ProcedureLedger()
    w = Work.start(s)
    X, Y = targets_xy(w)
    st = critical_pair(w, X, Y, FeasibleSet())
    budget = 4 * max(1, len(st.boundary)) + 16
    ledger.boundary_sizes.append(len(st.boundary))
    for _ in range(budget):
        gbar, lift_map = build_gbar(w, st)
        if is_k_arc_strong(gbar, 2):
            return _finish(w, st, gbar, lift_map, ledger)
        wr = w.reversed()
        str_ = st.reversed(wr.g)
        gbar_rev, _ = build_gbar(wr, str_)
        case = classify_cut_arc(w, gbar, gbar_rev)
        covered = st.c.vertices()
        if case.mirrored:
            str_ = _step(wr, str_, case, ledger)
            w = wr.reversed()
            st = str_.reversed(w.g)
        else:
            st = _step(w, st, case, ledger)
        if len(st.boundary) > ledger.boundary_sizes[-1]:
            raise InternalInvariantFailure("boundary grew during a repair step")
        if not covered <= st.c.vertices():
            raise InternalInvariantFailure("a repair step dropped a vertex from the feasible set")
        ledger.boundary_sizes.append(len(st.boundary))
    raise InternalInvariantFailure("repair loop exceeded its step budget")


def _finish(w: Work, st: CriticalPairState, gbar: MultiDigraph, lift_map: dict, ledger: ProcedureLedger):
    dec = find_decomposition(gbar)
    if dec is None:
        raise InternalInvariantFailure("2-arc-strong split image has no decomposition")
    d1, d2 = lift(dec, lift_map)
    if not w.synthetic:
        return pending_extend(w.s, PendingDecomposition(d1, d2))
    return reallocate_additional_arcs(w, d1, d2)


def reallocate_additional_arcs(w: Work, d1: frozenset, d2: frozenset) -> Decomposition:
    """Drop synthetic arcs and re-assign the arcs at gadget vertices.

    Lifted arcs with no end in a gadget vertex set keep their class; every
    other host arc is left to a pinned exact search.
    """
    host = w.s.graph
    gadget = set().union(*w.gadgets) if w.gadgets else set()
    fixed = {}
    for cls, arcs in enumerate((d1, d2)):
        for a in arcs:
            if a in w.synthetic:
                continue
            t, h = host.arcs[a]
            if t not in gadget and h not in gadget:
                fixed[a] = cls
    dec = find_decomposition(host, fixed)
    if dec is None:
        raise InternalInvariantFailure("pinned re-assignment around the gadget vertices failed")
    if not verify_decomposition(host, dec):
        raise InternalInvariantFailure("re-assignment produced an invalid decomposition")
    return dec
