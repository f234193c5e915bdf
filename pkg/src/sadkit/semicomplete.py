"""Semicomplete structure: split partitions and nice decompositions."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .digraph import MultiDigraph, acyclic_ordering, cut_arcs, is_strong
from .errors import InternalInvariantFailure, InvalidPartition, PreconditionViolated

__all__ = [
    "SplitInstance",
    "NiceDecomposition",
    "is_semicomplete",
    "certify_split",
    "maximal_split_partition",
    "nice_decomposition",
    "validate_nice",
    "natural_backward_ordering",
]


def is_semicomplete(d: MultiDigraph) -> bool:
    adj = set()
    for t, h in d.arcs.values():
        adj.add((min(t, h), max(t, h)))
    n = len(d)
    return len(adj) == n * (n - 1) // 2


@dataclass(frozen=True)
class SplitInstance:
    graph: MultiDigraph
    v1: frozenset
    v2: frozenset

    def d_v2(self) -> MultiDigraph:
        return self.graph.induced(self.v2)

    def crossing_arcs(self) -> list:
        return [a for a, (t, h) in self.graph.arcs.items() if (t in self.v1) != (h in self.v1)]

    def reverse(self) -> "SplitInstance":
        return SplitInstance(self.graph.reverse(), self.v1, self.v2)


def certify_split(d: MultiDigraph, v1: Iterable[int], v2: Iterable[int]) -> SplitInstance:
    """Validate a (V1, V2) split partition of d."""
    v1, v2 = frozenset(v1), frozenset(v2)
    if v1 & v2:
        raise InvalidPartition("disjoint", f"vertices {sorted(v1 & v2)} in both parts")
    if v1 | v2 != d.vertices:
        raise InvalidPartition("covering", "parts do not cover the vertex set")
    seen_cross = set()
    for a, (t, h) in d.arcs.items():
        if t in v1 and h in v1:
            raise InvalidPartition("independent", f"arc {t}->{h} inside V1")
        if (t in v1) != (h in v1):
            if (t, h) in seen_cross:
                raise InvalidPartition("simple-crossing", f"parallel arcs {t}->{h} between V1 and V2")
            seen_cross.add((t, h))
    if not is_semicomplete(d.induced(v2)):
        raise InvalidPartition("semicomplete", "V2 does not induce a semicomplete digraph")
    return SplitInstance(d, v1, v2)


def maximal_split_partition(s: SplitInstance) -> SplitInstance:
    """Move V1 vertices adjacent to all of V2 into V2 (smallest id first).

    Since V1 is independent, promoting one vertex leaves no other promotable
    vertex, so at most one move happens; the loop is kept for clarity.
    """
    v1, v2 = set(s.v1), set(s.v2)
    g = s.graph
    while True:
        movable = [x for x in sorted(v1) if g.neighbors(x) >= v2]
        if not movable:
            break
        x = movable[0]
        v1.discard(x)
        v2.add(x)
    if v1 == s.v1:
        return s
    return SplitInstance(g, frozenset(v1), frozenset(v2))


@dataclass(frozen=True)
class NiceDecomposition:
    """Blocks U1..Ul and the backward arcs in natural order.

    ``ends`` maps each backward arc id to its (tail, head).
    """

    blocks: tuple
    backward_arcs: tuple
    ends: tuple = ()

    def tail(self, a: int) -> int:
        return dict(self.ends)[a][0]

    def head(self, a: int) -> int:
        return dict(self.ends)[a][1]

    def index(self, v: int) -> int:
        """1-based block index of v."""
        for i, b in enumerate(self.blocks, start=1):
            if v in b:
                return i
        raise KeyError(v)

    @property
    def first(self) -> frozenset:
        return self.blocks[0]

    @property
    def last(self) -> frozenset:
        return self.blocks[-1]

    def __len__(self):
        return len(self.blocks)


def natural_backward_ordering(nd: NiceDecomposition) -> tuple:
    """Backward arcs sorted by decreasing block index of their tails."""
    ind = {v: i for i, b in enumerate(nd.blocks, start=1) for v in b}
    ends = dict(nd.ends)
    return tuple(sorted(nd.backward_arcs, key=lambda a: (-ind[ends[a][0]], -ind[ends[a][1]], a)))


def validate_nice(d: MultiDigraph, nd: NiceDecomposition) -> list:
    """Return a list of violated properties (empty when nd is valid)."""
    problems = []
    covered = [v for b in nd.blocks for v in b]
    if sorted(covered) != sorted(d.vertices):
        problems.append("blocks do not partition the vertex set")
        return problems
    ind = {v: i for i, b in enumerate(nd.blocks, start=1) for v in b}
    for i, b in enumerate(nd.blocks, start=1):
        if not is_strong(d.induced(b)):
            problems.append(f"block {i} is not strong")
    backward = {a for a, (t, h) in d.arcs.items() if ind[t] > ind[h]}
    if backward != cut_arcs(d):
        problems.append("backward arcs differ from cut arcs")
    if set(nd.backward_arcs) != backward or len(nd.backward_arcs) != len(backward):
        problems.append("recorded backward arcs are wrong")
        return problems
    x = [None] + [d.tail(a) for a in nd.backward_arcs]
    y = [None] + [d.head(a) for a in nd.backward_arcs]
    r = len(nd.backward_arcs)
    for j in range(1, r):
        if ind[x[j + 1]] >= ind[x[j]]:
            problems.append("tail indices not strictly decreasing")
        if not (ind[y[j + 1]] < ind[y[j]] <= ind[x[j + 1]] < ind[x[j]]):
            problems.append(f"index chain fails at j={j}")
    for j in range(1, r - 1):
        if not (ind[y[j + 1]] <= ind[x[j + 2]] < ind[y[j]]):
            problems.append(f"interleaving chain fails at j={j}")
    if r:
        if ind[x[1]] != len(nd.blocks):
            problems.append("first backward tail not in last block")
        if ind[y[r]] != 1:
            problems.append("last backward head not in first block")
    return problems


def _order_blocks(d: MultiDigraph, comps, cuts) -> tuple:
    """Order the blocks so that cut arcs point backward and all others forward.

    Cut arcs constrain the order too: two blocks joined only by cut arcs get
    no constraint from the remainder graph alone.
    """
    where = {v: i for i, c in enumerate(comps) for v in c}
    succ = {i: set() for i in range(len(comps))}
    for a, (t, h) in d.arcs.items():
        bt, bh = where[t], where[h]
        if bt == bh:
            continue
        if a in cuts:
            succ[bh].add(bt)
        else:
            succ[bt].add(bh)
    indeg = {i: 0 for i in succ}
    for i in succ:
        for j in succ[i]:
            indeg[j] += 1
    ready = sorted((min(comps[i]), i) for i in succ if indeg[i] == 0)
    out = []
    while ready:
        _, i = ready.pop(0)
        out.append(comps[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append((min(comps[j]), j))
                ready.sort()
    if len(out) != len(comps):
        raise InternalInvariantFailure("block order constraints are cyclic")
    return tuple(out)


def nice_decomposition(d: MultiDigraph) -> NiceDecomposition:
    """The nice decomposition of a strong semicomplete digraph of order >= 4."""
    if len(d) < 4 or not is_semicomplete(d) or not is_strong(d):
        raise PreconditionViolated("nice decomposition needs a strong semicomplete digraph on >= 4 vertices")
    cuts = cut_arcs(d)
    blocks = _order_blocks(d, acyclic_ordering(d.without_arcs(cuts)).components, cuts)
    ends = tuple(sorted((a, d.arcs[a]) for a in cuts))
    nd = NiceDecomposition(blocks, tuple(sorted(cuts)), ends)
    nd = NiceDecomposition(blocks, natural_backward_ordering(nd), ends)
    problems = validate_nice(d, nd)
    if problems:
        raise InternalInvariantFailure("nice decomposition invalid: " + "; ".join(problems))
    return nd


def _ordered_partitions(items):
    """All ordered set partitions of ``items`` (for uniqueness checks)."""
    items = list(items)
    if not items:
        yield ()
        return
    n = len(items)
    from itertools import product

    for labels in product(range(n), repeat=n):
        used = sorted(set(labels))
        if used != list(range(len(used))):
            continue
        yield tuple(frozenset(items[i] for i in range(n) if labels[i] == k) for k in used)


def brute_force_nice_decompositions(d: MultiDigraph) -> list:
    """Every ordered partition satisfying the block/cut-arc definition."""
    cuts = cut_arcs(d)
    found = []
    for blocks in _ordered_partitions(sorted(d.vertices)):
        ind = {v: i for i, b in enumerate(blocks) for v in b}
        backward = {a for a, (t, h) in d.arcs.items() if ind[t] > ind[h]}
        if backward != cuts:
            continue
        if all(is_strong(d.induced(b)) for b in blocks):
            found.append(blocks)
    return found


def semicomplete_pairs(n: int) -> list:
    return list(combinations(range(n), 2))
