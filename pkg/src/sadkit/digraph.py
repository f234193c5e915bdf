"""Directed multigraphs with stable arc ids, connectivity and arc-disjoint paths.

Vertices are small non-negative integers; they double as bit positions, so
reachability runs on Python int bitmasks.  Every arc carries an integer id
that survives subgraph and reversal operations, which lets parallel copies be
moved around individually.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import NotStrong, PreconditionViolated

__all__ = [
    "MultiDigraph",
    "PathInDigraph",
    "AcyclicOrdering",
    "is_strong",
    "strong_components",
    "acyclic_ordering",
    "reachable",
    "is_k_arc_strong",
    "arc_connectivity",
    "cut_arcs",
    "reverse",
    "arc_disjoint_xy_paths",
    "max_arc_disjoint_paths",
]


class MultiDigraph:
    """A loopless directed multigraph.

    ``arcs`` maps arc id to ``(tail, head)``.  Instances are treated as
    immutable; every modifying operation returns a new graph.
    """

    __slots__ = ("_vertices", "_arcs", "_out", "_in", "labels")

    def __init__(self, vertices: Iterable[int], arcs=(), labels: Optional[Mapping[int, str]] = None):
        self._vertices = frozenset(vertices)
        if isinstance(arcs, Mapping):
            arc_map = dict(arcs)
        else:
            arc_map = dict(enumerate(tuple(a) for a in arcs))
        out = {v: [] for v in self._vertices}
        inc = {v: [] for v in self._vertices}
        for aid in sorted(arc_map):
            t, h = arc_map[aid]
            if t not in out or h not in out:
                raise ValueError(f"arc {aid} = ({t}, {h}) has an endpoint outside the vertex set")
            if t == h:
                raise ValueError(f"arc {aid} is a loop at {t}")
            out[t].append(aid)
            inc[h].append(aid)
        self._arcs = arc_map
        self._out = out
        self._in = inc
        self.labels = dict(labels) if labels else None

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], vertices: Optional[Iterable[int]] = None, labels=None):
        pairs = [tuple(p) for p in pairs]
        if vertices is None:
            vertices = {v for p in pairs for v in p}
        return cls(vertices, pairs, labels)

    # -- basic queries -------------------------------------------------
    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def arcs(self) -> Mapping[int, tuple]:
        return self._arcs

    def __len__(self):
        return len(self._vertices)

    def num_arcs(self) -> int:
        return len(self._arcs)

    def arc_ids(self) -> list:
        return sorted(self._arcs)

    def tail(self, aid: int) -> int:
        return self._arcs[aid][0]

    def head(self, aid: int) -> int:
        return self._arcs[aid][1]

    def out_arcs(self, v: int) -> list:
        return self._out[v]

    def in_arcs(self, v: int) -> list:
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def out_neighbors(self, v: int) -> set:
        return {self._arcs[a][1] for a in self._out[v]}

    def in_neighbors(self, v: int) -> set:
        return {self._arcs[a][0] for a in self._in[v]}

    def neighbors(self, v: int) -> set:
        return self.out_neighbors(v) | self.in_neighbors(v)

    def arcs_between(self, u: int, v: int) -> list:
        return [a for a in self._out[u] if self._arcs[a][1] == v]

    def multiplicity(self, u: int, v: int) -> int:
        return len(self.arcs_between(u, v))

    def has_arc(self, u: int, v: int) -> bool:
        return any(self._arcs[a][1] == v for a in self._out[u])

    def next_arc_id(self) -> int:
        return max(self._arcs, default=-1) + 1

    def pair_multiset(self) -> dict:
        counts = {}
        for t, h in self._arcs.values():
            counts[(t, h)] = counts.get((t, h), 0) + 1
        return counts

    def label(self, v: int) -> str:
        if self.labels and v in self.labels:
            return self.labels[v]
        return str(v)

    # -- derived graphs ------------------------------------------------
    def arc_subgraph(self, aids: Iterable[int], vertices: Optional[Iterable[int]] = None) -> "MultiDigraph":
        """Subgraph keeping the given arcs; spanning unless ``vertices`` is given."""
        aids = set(aids)
        vs = self._vertices if vertices is None else frozenset(vertices)
        return MultiDigraph(vs, {a: self._arcs[a] for a in aids}, self.labels)

    def induced(self, vertices: Iterable[int]) -> "MultiDigraph":
        vs = frozenset(vertices)
        keep = {a: th for a, th in self._arcs.items() if th[0] in vs and th[1] in vs}
        return MultiDigraph(vs, keep, self.labels)

    def without_arcs(self, aids: Iterable[int]) -> "MultiDigraph":
        drop = set(aids)
        return MultiDigraph(self._vertices, {a: th for a, th in self._arcs.items() if a not in drop}, self.labels)

    def with_arcs(self, pairs: Iterable[Sequence[int]], start_id: Optional[int] = None):
        """Return ``(graph, new_ids)`` with the given arcs appended under fresh ids."""
        nid = self.next_arc_id() if start_id is None else start_id
        arcs = dict(self._arcs)
        new_ids = []
        for t, h in pairs:
            while nid in arcs:
                nid += 1
            arcs[nid] = (t, h)
            new_ids.append(nid)
            nid += 1
        return MultiDigraph(self._vertices, arcs, self.labels), new_ids

    def with_arc_map(self, extra: Mapping[int, tuple]) -> "MultiDigraph":
        arcs = dict(self._arcs)
        for a, th in extra.items():
            if a in arcs:
                raise ValueError(f"arc id {a} already present")
            arcs[a] = tuple(th)
        return MultiDigraph(self._vertices, arcs, self.labels)

    def with_vertices(self, vertices: Iterable[int]) -> "MultiDigraph":
        return MultiDigraph(self._vertices | frozenset(vertices), self._arcs, self.labels)

    def reverse(self) -> "MultiDigraph":
        return MultiDigraph(self._vertices, {a: (h, t) for a, (t, h) in self._arcs.items()}, self.labels)

    def relabel(self, mapping: Mapping[int, int]) -> "MultiDigraph":
        return MultiDigraph(
            (mapping[v] for v in self._vertices),
            {a: (mapping[t], mapping[h]) for a, (t, h) in self._arcs.items()},
        )

    # -- bitmask views -------------------------------------------------
    def out_masks(self, skip: Optional[set] = None) -> dict:
        masks = dict.fromkeys(self._vertices, 0)
        for a, (t, h) in self._arcs.items():
            if skip is None or a not in skip:
                masks[t] |= 1 << h
        return masks

    def in_masks(self, skip: Optional[set] = None) -> dict:
        masks = dict.fromkeys(self._vertices, 0)
        for a, (t, h) in self._arcs.items():
            if skip is None or a not in skip:
                masks[h] |= 1 << t
        return masks

    def vertex_mask(self) -> int:
        m = 0
        for v in self._vertices:
            m |= 1 << v
        return m

    def __eq__(self, other):
        if not isinstance(other, MultiDigraph):
            return NotImplemented
        return self._vertices == other._vertices and self._arcs == other._arcs

    def __hash__(self):
        return hash((self._vertices, frozenset(self._arcs.items())))

    def __repr__(self):
        return f"MultiDigraph(|V|={len(self._vertices)}, |A|={len(self._arcs)})"


@dataclass(frozen=True)
class PathInDigraph:
    """A directed path given by its arc ids, in order."""

    arcs: tuple
    vertices: tuple

    @classmethod
    def from_arcs(cls, d: MultiDigraph, arcs: Sequence[int]) -> "PathInDigraph":
        arcs = tuple(arcs)
        if not arcs:
            raise ValueError("a path needs at least one arc")
        verts = [d.tail(arcs[0])]
        for a in arcs:
            if d.tail(a) != verts[-1]:
                raise ValueError(f"arc {a} does not continue the path at {verts[-1]}")
            verts.append(d.head(a))
        if len(set(verts)) != len(verts):
            raise ValueError("path repeats a vertex")
        return cls(arcs, tuple(verts))

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def __len__(self):
        return len(self.arcs)

    def position(self, v: int) -> int:
        return self.vertices.index(v)

    def contains_vertex(self, v: int) -> bool:
        return v in self.vertices

    def suffix_from(self, v: int) -> tuple:
        """Arc ids of the subpath starting at vertex ``v``."""
        return self.arcs[self.position(v):]

    def prefix_to(self, v: int) -> tuple:
        return self.arcs[: self.position(v)]


@dataclass(frozen=True)
class AcyclicOrdering:
    components: tuple

    def index_of(self, v: int) -> int:
        for i, comp in enumerate(self.components):
            if v in comp:
                return i
        raise KeyError(v)

    @property
    def initial(self) -> frozenset:
        return self.components[0]

    @property
    def terminal(self) -> frozenset:
        return self.components[-1]

    def __len__(self):
        return len(self.components)


def _reach(start_mask: int, masks: Mapping[int, int]) -> int:
    seen = start_mask
    frontier = start_mask
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= masks[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def reachable(d: MultiDigraph, sources: Iterable[int], skip: Optional[set] = None) -> set:
    start = 0
    for s in sources:
        start |= 1 << s
    m = _reach(start, d.out_masks(skip))
    return {v for v in d.vertices if m >> v & 1}


def _strong_masks(vmask: int, out_masks, in_masks) -> bool:
    if vmask == 0:
        return False
    root = vmask & -vmask
    return _reach(root, out_masks) == vmask and _reach(root, in_masks) == vmask


def is_strong(d: MultiDigraph, skip: Optional[set] = None) -> bool:
    """True iff every vertex reaches every other (ignoring arcs in ``skip``)."""
    if len(d) == 0:
        raise PreconditionViolated("is_strong needs at least one vertex")
    return _strong_masks(d.vertex_mask(), d.out_masks(skip), d.in_masks(skip))


def strong_components(d: MultiDigraph) -> list:
    out_m, in_m = d.out_masks(), d.in_masks()
    left = d.vertex_mask()
    comps = []
    while left:
        low = left & -left
        comp = _reach(low, out_m) & _reach(low, in_m)
        comps.append(frozenset(v for v in d.vertices if comp >> v & 1))
        left &= ~comp
    return comps


def acyclic_ordering(d: MultiDigraph) -> AcyclicOrdering:
    """Strong components ordered so every inter-component arc goes forward."""
    comps = strong_components(d)
    where = {v: i for i, c in enumerate(comps) for v in c}
    succ = {i: set() for i in range(len(comps))}
    indeg = [0] * len(comps)
    for t, h in d.arcs.values():
        ct, ch = where[t], where[h]
        if ct != ch and ch not in succ[ct]:
            succ[ct].add(ch)
            indeg[ch] += 1
    ready = sorted((min(comps[i]), i) for i in range(len(comps)) if indeg[i] == 0)
    order = []
    while ready:
        _, i = ready.pop(0)
        order.append(comps[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append((min(comps[j]), j))
        ready.sort()
    return AcyclicOrdering(tuple(order))


def cut_arcs(d: MultiDigraph) -> set:
    """Arcs of a strong digraph whose removal destroys strongness."""
    if not is_strong(d):
        raise NotStrong("cut_arcs requires a strong digraph")
    counts = d.pair_multiset()
    vmask = d.vertex_mask()
    out_m, in_m = d.out_masks(), d.in_masks()
    result = set()
    for a, (t, h) in d.arcs.items():
        if counts[(t, h)] > 1:
            continue
        o = dict(out_m)
        i = dict(in_m)
        o[t] &= ~(1 << h)
        i[h] &= ~(1 << t)
        if not _strong_masks(vmask, o, i):
            result.add(a)
    return result


def max_arc_disjoint_paths(d: MultiDigraph, sources, sinks, allowed: Optional[Callable[[int], bool]] = None,
                           limit: Optional[int] = None):
    """Unit-capacity max flow from ``sources`` to ``sinks``.

    Returns ``(value, used)`` where ``used`` is the set of arc ids carrying
    flow.  Arcs entering a source or leaving a sink are never used, so the
    flow decomposes into paths meeting ``sources | sinks`` only at their ends.
    """
    src = set(sources)
    snk = set(sinks)
    usable = [
        a for a, (t, h) in d.arcs.items()
        if h not in src and t not in snk and (allowed is None or allowed(a))
    ]
    out = {v: [] for v in d.vertices}
    inc = {v: [] for v in d.vertices}
    for a in usable:
        t, h = d.arcs[a]
        out[t].append(a)
        inc[h].append(a)
    used = set()
    value = 0
    while limit is None or value < limit:
        parent = {}
        queue = deque()
        for s in sorted(src):
            parent[s] = None
            queue.append(s)
        hit = None
        while queue and hit is None:
            v = queue.popleft()
            for a in out[v]:
                if a in used:
                    continue
                w = d.arcs[a][1]
                if w not in parent:
                    parent[w] = (a, +1)
                    if w in snk:
                        hit = w
                        break
                    queue.append(w)
            if hit is not None:
                break
            for a in inc[v]:
                if a not in used:
                    continue
                w = d.arcs[a][0]
                if w not in parent:
                    parent[w] = (a, -1)
                    queue.append(w)
        if hit is None:
            break
        v = hit
        while parent[v] is not None:
            a, sign = parent[v]
            if sign > 0:
                used.add(a)
                v = d.arcs[a][0]
            else:
                used.discard(a)
                v = d.arcs[a][1]
        value += 1
    return value, used


def _decompose_flow(d: MultiDigraph, used: set, sources: set, sinks: set) -> list:
    pending = set(used)
    by_tail = {}
    for a in sorted(used):
        by_tail.setdefault(d.tail(a), []).append(a)
    paths = []
    for s in sorted(sources):
        while any(a in pending for a in by_tail.get(s, ())):
            walk = []
            v = s
            while v not in sinks:
                a = next(a for a in by_tail[v] if a in pending)
                pending.discard(a)
                walk.append(a)
                v = d.head(a)
            # cut out loops so the walk becomes a path
            verts = [s]
            arcs = []
            for a in walk:
                h = d.head(a)
                if h in verts:
                    k = verts.index(h)
                    verts = verts[: k + 1]
                    arcs = arcs[:k]
                else:
                    verts.append(h)
                    arcs.append(a)
            paths.append(PathInDigraph.from_arcs(d, arcs))
    return paths


def arc_disjoint_xy_paths(d: MultiDigraph, X, Y, allowed: Optional[Callable[[int], bool]] = None):
    """Two arc-disjoint (X, Y)-paths, or None if there are none.

    Each returned path starts in X, ends in Y and meets X | Y nowhere else.
    Only arcs accepted by ``allowed`` are used.
    """
    X, Y = set(X), set(Y)
    if not X or not Y or X & Y:
        raise PreconditionViolated("X and Y must be disjoint and nonempty")
    value, used = max_arc_disjoint_paths(d, X, Y, allowed, limit=2)
    if value < 2:
        return None
    paths = _decompose_flow(d, used, X, Y)
    assert len(paths) == 2
    return paths[0], paths[1]


def arc_connectivity(d: MultiDigraph, limit: Optional[int] = None) -> int:
    """Largest k such that d is k-arc-strong (capped at ``limit``)."""
    if len(d) <= 1:
        return limit if limit is not None else 0
    vs = sorted(d.vertices)
    s = vs[0]
    best = limit
    rev = None
    for v in vs[1:]:
        f, _ = max_arc_disjoint_paths(d, [s], [v], limit=best)
        best = f if best is None else min(best, f)
        if best == 0:
            return 0
        if rev is None:
            rev = d.reverse()
        g, _ = max_arc_disjoint_paths(rev, [s], [v], limit=best)
        best = min(best, g)
        if best == 0:
            return 0
    return best


def is_k_arc_strong(d: MultiDigraph, k: int) -> bool:
    """True iff deleting any k-1 arcs leaves d strong."""
    if k < 1:
        raise PreconditionViolated("k must be positive")
    if len(d) <= 1:
        return True
    if k == 1:
        return is_strong(d)
    if k == 2:
        if not is_strong(d):
            return False
        return not cut_arcs(d)
    return arc_connectivity(d, limit=k) >= k


def reverse(d: MultiDigraph) -> MultiDigraph:
    return d.reverse()


def brute_force_k_arc_strong(d: MultiDigraph, k: int) -> bool:
    """Definition-level check: remove every (k-1)-subset of arcs."""
    ids = d.arc_ids()
    for r in range(k):
        for drop in combinations(ids, r):
            if not is_strong(d, skip=set(drop)):
                return False
    return True
