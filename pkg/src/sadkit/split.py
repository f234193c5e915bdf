"""Splitting-off, feasible sets, critical path pairs and pending decompositions.

The working graph of a split instance is the host digraph plus, possibly,
synthetic arcs inside V2 added by the repair procedures.  Splitting arcs live
only in the derived multidigraph on V2 and are mapped back by a lift map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .digraph import MultiDigraph, PathInDigraph, arc_disjoint_xy_paths, is_strong
from .errors import InternalInvariantFailure, NoPathPair, PreconditionViolated
from .search import Decomposition, extend_to_outside_vertices, verify_decomposition
from .semicomplete import SplitInstance

__all__ = [
    "FeasibleSet",
    "Work",
    "CriticalPairState",
    "PendingDecomposition",
    "split_off_path",
    "lift",
    "critical_pair",
    "build_gbar",
    "pending_extend",
    "validate_pending",
    "rebuild_feasible",
    "make_path",
]


class FeasibleSet:
    """Pairs (v x, x u) of crossing arcs, at most one pair per V1 vertex x."""

    __slots__ = ("_pairs",)

    def __init__(self, pairs=None):
        self._pairs = dict(pairs or {})

    def __contains__(self, x):
        return x in self._pairs

    def __len__(self):
        return len(self._pairs)

    def __iter__(self):
        return iter(sorted(self._pairs))

    def __eq__(self, other):
        return isinstance(other, FeasibleSet) and self._pairs == other._pairs

    def __repr__(self):
        return f"FeasibleSet({self._pairs})"

    def items(self):
        return sorted(self._pairs.items())

    def pair(self, x) -> tuple:
        return self._pairs[x]

    def vertices(self) -> frozenset:
        return frozenset(self._pairs)

    def arcs(self) -> frozenset:
        return frozenset(a for p in self._pairs.values() for a in p)

    def with_pair(self, x, in_arc, out_arc) -> "FeasibleSet":
        p = dict(self._pairs)
        p[x] = (in_arc, out_arc)
        return FeasibleSet(p)

    def without(self, x) -> "FeasibleSet":
        p = dict(self._pairs)
        p.pop(x, None)
        return FeasibleSet(p)

    def reversed(self) -> "FeasibleSet":
        """Same arcs seen in the reversed graph: in- and out-arcs swap roles."""
        return FeasibleSet({x: (o, i) for x, (i, o) in self._pairs.items()})

    def validate(self, g: MultiDigraph, v1: frozenset, v2: frozenset):
        for x, (i, o) in self._pairs.items():
            if x not in v1:
                raise InternalInvariantFailure(f"feasible pair at non-V1 vertex {x}")
            if g.head(i) != x or g.tail(o) != x:
                raise InternalInvariantFailure(f"feasible pair at {x} does not meet at {x}")
            if g.tail(i) not in v2 or g.head(o) not in v2 or g.tail(i) == g.head(o):
                raise InternalInvariantFailure(f"feasible pair at {x} has bad ends")


@dataclass
class Work:
    """A split instance together with the synthetic arcs added so far."""

    s: SplitInstance
    g: MultiDigraph
    synthetic: frozenset = frozenset()
    gadgets: list = field(default_factory=list)

    @classmethod
    def start(cls, s: SplitInstance) -> "Work":
        return cls(s, s.graph)

    @property
    def v1(self) -> frozenset:
        return self.s.v1

    @property
    def v2(self) -> frozenset:
        return self.s.v2

    def is_crossing(self, a: int) -> bool:
        t, h = self.g.arcs[a]
        return (t in self.s.v1) != (h in self.s.v1)

    def add_synthetic(self, pairs, gadget: Iterable[int]):
        g, ids = self.g.with_arcs(pairs)
        self.g = g
        self.synthetic = self.synthetic | frozenset(ids)
        self.gadgets.append(frozenset(gadget))
        return ids

    def reversed(self) -> "Work":
        return Work(self.s.reverse(), self.g.reverse(), self.synthetic, list(self.gadgets))

    def d_v2(self) -> MultiDigraph:
        return self.g.induced(self.s.v2)

    def original_d_v2(self) -> MultiDigraph:
        return self.s.graph.induced(self.s.v2)


def make_path(g: MultiDigraph, arcs, X, Y) -> PathInDigraph:
    """Turn a walk into an (X, Y)-path: cut at the first Y vertex, drop loops."""
    X, Y = set(X), set(Y)
    arcs = list(arcs)
    if not arcs:
        raise InternalInvariantFailure("empty walk")
    start = g.tail(arcs[0])
    for a, b in zip(arcs, arcs[1:]):
        if g.head(a) != g.tail(b):
            raise InternalInvariantFailure(f"walk breaks between arcs {a} and {b}")
    # restart from the last visit to X, stop at the first visit to Y
    verts = [start] + [g.head(a) for a in arcs]
    last_x = max(i for i, v in enumerate(verts) if v in X) if any(v in X for v in verts) else None
    if last_x is None or verts[0] not in X:
        raise InternalInvariantFailure("walk does not start in X")
    arcs = arcs[last_x:]
    verts = verts[last_x:]
    for i, v in enumerate(verts[1:], start=1):
        if v in Y:
            arcs = arcs[:i]
            break
    else:
        raise InternalInvariantFailure("walk never reaches Y")
    out_v = [verts[0]]
    out_a = []
    for a in arcs:
        h = g.head(a)
        if h in out_v:
            k = out_v.index(h)
            out_v = out_v[: k + 1]
            out_a = out_a[:k]
        else:
            out_v.append(h)
            out_a.append(a)
    p = PathInDigraph.from_arcs(g, out_a)
    if any(v in X or v in Y for v in p.vertices[1:-1]):
        raise InternalInvariantFailure("path meets X or Y internally")
    return p


@dataclass(frozen=True)
class CriticalPairState:
    c: FeasibleSet
    q1: PathInDigraph
    q2: PathInDigraph
    X: frozenset
    Y: frozenset
    boundary: frozenset
    v_boundary: frozenset

    def paths(self):
        return (self.q1, self.q2)

    def reversed(self, g_rev: MultiDigraph) -> "CriticalPairState":
        q1 = PathInDigraph.from_arcs(g_rev, tuple(reversed(self.q1.arcs)))
        q2 = PathInDigraph.from_arcs(g_rev, tuple(reversed(self.q2.arcs)))
        return CriticalPairState(self.c.reversed(), q1, q2, self.Y, self.X, self.boundary, self.v_boundary)

    def with_order(self, first: PathInDigraph) -> "CriticalPairState":
        """Same state with ``first`` as q1."""
        if first == self.q1:
            return self
        return CriticalPairState(self.c, self.q2, self.q1, self.X, self.Y, self.boundary, self.v_boundary)


def crossing_arcs_of(w: Work, paths) -> set:
    return {a for p in paths for a in p.arcs if w.is_crossing(a)}


def boundary_of(w: Work, c: FeasibleSet, paths) -> frozenset:
    return frozenset(crossing_arcs_of(w, paths) - c.arcs())


def _v1_touched(w: Work, arcs) -> frozenset:
    out = set()
    for a in arcs:
        t, h = w.g.arcs[a]
        out.add(t if t in w.v1 else h)
    return frozenset(out)


def _allowed(w: Work, c: FeasibleSet, permitted: Optional[frozenset]):
    carcs = c.arcs()
    cverts = c.vertices()
    v1 = w.v1
    arcs = w.g.arcs

    def ok(a):
        t, h = arcs[a]
        if t not in v1 and h not in v1:
            return True
        x = t if t in v1 else h
        if x in cverts:
            return a in carcs
        return permitted is None or a in permitted

    return ok


def check_pair(w: Work, c: FeasibleSet, X, Y, q1: PathInDigraph, q2: PathInDigraph) -> frozenset:
    """Validate a path pair against the side conditions; returns its boundary."""
    X, Y = frozenset(X), frozenset(Y)
    for q in (q1, q2):
        if q.start not in X or q.end not in Y:
            raise InternalInvariantFailure("path does not run from X to Y")
        if any(v in X or v in Y for v in q.vertices[1:-1]):
            raise InternalInvariantFailure("path meets X or Y internally")
    if set(q1.arcs) & set(q2.arcs):
        raise InternalInvariantFailure("paths share an arc")
    bd = boundary_of(w, c, (q1, q2))
    if _v1_touched(w, bd) & c.vertices():
        raise InternalInvariantFailure("boundary touches a vertex of the feasible set")
    return bd


def critical_pair(w: Work, X, Y, c: FeasibleSet, seed=None) -> CriticalPairState:
    """A critical (X, Y)-path pair for feasible set ``c``.

    With ``seed`` (a path pair obeying the side condition) the result's
    boundary is contained in the seed's.  Criticality is certified by trying
    to drop each boundary arc in turn.
    """
    X, Y = frozenset(X), frozenset(Y)
    c.validate(w.g, w.v1, w.v2)
    if seed is not None:
        q1, q2 = seed
        bd = check_pair(w, c, X, Y, q1, q2)
    else:
        res = arc_disjoint_xy_paths(w.g, X, Y, _allowed(w, c, None))
        if res is None:
            raise NoPathPair("no two arc-disjoint (X, Y)-paths")
        q1, q2 = res
        bd = check_pair(w, c, X, Y, q1, q2)
    changed = True
    while changed:
        changed = False
        for a in sorted(bd):
            res = arc_disjoint_xy_paths(w.g, X, Y, _allowed(w, c, bd - {a}))
            if res is not None:
                q1, q2 = res
                new_bd = check_pair(w, c, X, Y, q1, q2)
                if not new_bd < bd:
                    raise InternalInvariantFailure("boundary failed to shrink")
                bd = new_bd
                changed = True
                break
    return CriticalPairState(c, q1, q2, X, Y, bd, _v1_touched(w, bd))


def is_critical(w: Work, st: CriticalPairState) -> bool:
    """Exact check that no boundary arc can be dropped."""
    for a in st.boundary:
        if arc_disjoint_xy_paths(w.g, st.X, st.Y, _allowed(w, st.c, st.boundary - {a})) is not None:
            return False
    return True


def split_off_path(w: Work, p: PathInDigraph, start_id: Optional[int] = None):
    """Replace each 2-path through a V1 vertex of p by a splitting arc.

    Returns ``(graph, lift_map)`` where the graph is the working graph with
    p's V1 arc pairs removed and the splitting arcs added.
    """
    if p.start in w.v1 or p.end in w.v1:
        raise PreconditionViolated("path must start and end in V2")
    nid = max(w.g.next_arc_id(), start_id or 0)
    extra = {}
    lift_map = {}
    for i, v in enumerate(p.vertices[1:-1], start=1):
        if v in w.v1:
            a_in, a_out = p.arcs[i - 1], p.arcs[i]
            extra[nid] = (w.g.tail(a_in), w.g.head(a_out))
            lift_map[nid] = (a_in, a_out)
            nid += 1
    drop = {a for pair in lift_map.values() for a in pair}
    g = w.g.without_arcs(drop).with_arc_map(extra)
    return g, lift_map


def _pairs_on_path(w: Work, p: PathInDigraph) -> list:
    out = []
    for i, v in enumerate(p.vertices[1:-1], start=1):
        if v in w.v1:
            out.append((p.arcs[i - 1], p.arcs[i]))
    return out


def build_gbar(w: Work, st: CriticalPairState):
    """D[V2] (with synthetic arcs) plus split images of the boundary and of c."""
    base = w.d_v2()
    nid = w.g.next_arc_id()
    extra = {}
    lift_map = {}
    carcs = st.c.arcs()
    for q in st.paths():
        for a_in, a_out in _pairs_on_path(w, q):
            if a_in in carcs or a_out in carcs:
                if not (a_in in carcs and a_out in carcs):
                    raise InternalInvariantFailure("path mixes feasible and boundary arcs at a vertex")
                continue
            extra[nid] = (w.g.tail(a_in), w.g.head(a_out))
            lift_map[nid] = (a_in, a_out)
            nid += 1
    for x, (a_in, a_out) in st.c.items():
        extra[nid] = (w.g.tail(a_in), w.g.head(a_out))
        lift_map[nid] = (a_in, a_out)
        nid += 1
    return base.with_arc_map(extra), lift_map


def lift(dec: Decomposition, lift_map: dict):
    """Replace splitting arcs by their original pairs in each class."""
    out = []
    for cls in dec.classes():
        arcs = set()
        for a in cls:
            if a in lift_map:
                arcs.update(lift_map[a])
            else:
                arcs.add(a)
        out.append(frozenset(arcs))
    return tuple(out)


@dataclass(frozen=True)
class PendingDecomposition:
    d1: frozenset
    d2: frozenset

    def vertices(self, g: MultiDigraph, v2: frozenset, i: int) -> frozenset:
        arcs = self.d1 if i == 0 else self.d2
        vs = set(v2)
        for a in arcs:
            vs.update(g.arcs[a])
        return frozenset(vs)


def validate_pending(s: SplitInstance, pd: PendingDecomposition) -> list:
    g = s.graph
    problems = []
    if pd.d1 & pd.d2:
        problems.append("classes share arcs")
    if not (pd.d1 | pd.d2) <= set(g.arcs):
        problems.append("classes use arcs outside the host")
        return problems
    vs = [pd.vertices(g, s.v2, i) for i in (0, 1)]
    for i, arcs in enumerate((pd.d1, pd.d2)):
        sub = g.arc_subgraph(arcs, vs[i])
        if not is_strong(sub):
            problems.append(f"class {i + 1} is not strong")
    for i in (0, 1):
        mine = pd.d1 if i == 0 else pd.d2
        for t in vs[i] - vs[1 - i]:
            if not any(a not in mine for a in g.in_arcs(t)) or not any(a not in mine for a in g.out_arcs(t)):
                problems.append(f"private vertex {t} has no spare in- or out-arc")
    return problems


def pending_extend(s: SplitInstance, pd: PendingDecomposition) -> Decomposition:
    """Turn a pending decomposition into a strong arc decomposition of the host."""
    problems = validate_pending(s, pd)
    if problems:
        raise PreconditionViolated("invalid pending decomposition: " + "; ".join(problems))
    g = s.graph
    vs = [pd.vertices(g, s.v2, i) for i in (0, 1)]
    a1, a2 = set(pd.d1), set(pd.d2)
    for t in sorted(vs[0] - vs[1]):
        a2.add(min(a for a in g.in_arcs(t) if a not in pd.d1))
        a2.add(min(a for a in g.out_arcs(t) if a not in pd.d1))
    for t in sorted(vs[1] - vs[0]):
        a1.add(min(a for a in g.in_arcs(t) if a not in pd.d2))
        a1.add(min(a for a in g.out_arcs(t) if a not in pd.d2))
    covered = vs[0] | vs[1]
    inner = g.induced(covered)
    a1 |= set(inner.arcs) - a1 - a2
    dec_inner = Decomposition(a1, a2)
    if not verify_decomposition(inner, dec_inner):
        raise InternalInvariantFailure("pending extension failed on the covered part")
    return extend_to_outside_vertices(g, covered, dec_inner)


def rebuild_feasible(w: Work, b: FeasibleSet, f: int, e_arc: int, out_arc: Optional[int] = None) -> FeasibleSet:
    """B <- {ef, ff+}: make ``e_arc`` (an in-arc of f) the in-arc of f's pair.

    If f is new, its out-arc is ``out_arc`` when given, else the smallest
    out-arc avoiding the tail of ``e_arc``.  If f already has a pair, only the
    in-arc changes, unless the old out-arc points back to the new tail.
    """
    g = w.g
    if f not in w.v1 or g.head(e_arc) != f:
        raise PreconditionViolated("rebuild needs an in-arc of a V1 vertex")
    e = g.tail(e_arc)

    def pick_out():
        if out_arc is not None and g.head(out_arc) != e:
            return out_arc
        options = [a for a in g.out_arcs(f) if g.head(a) != e]
        if not options:
            raise InternalInvariantFailure(f"vertex {f} has no out-neighbour besides {e}")
        return min(options)

    if f not in b:
        return b.with_pair(f, e_arc, pick_out())
    _, old_out = b.pair(f)
    if g.head(old_out) == e:
        old_out = pick_out()
    return b.with_pair(f, e_arc, old_out)
