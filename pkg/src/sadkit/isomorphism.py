"""Isomorphism testing for small multidigraphs (backtracking with degree refinement)."""
from __future__ import annotations

from typing import Optional

from .digraph import MultiDigraph

__all__ = ["are_isomorphic", "canonical_form"]


def _signature(d: MultiDigraph, counts: dict, v: int) -> tuple:
    outs = sorted(c for (t, h), c in counts.items() if t == v)
    ins = sorted(c for (t, h), c in counts.items() if h == v)
    return (d.out_degree(v), d.in_degree(v), tuple(outs), tuple(ins))


def _refined(d: MultiDigraph, counts: dict) -> dict:
    """Colour classes after a couple of rounds of neighbourhood refinement."""
    colour = {v: _signature(d, counts, v) for v in d.vertices}
    for _ in range(3):
        new = {}
        for v in d.vertices:
            outs = sorted((colour[h], c) for (t, h), c in counts.items() if t == v)
            ins = sorted((colour[t], c) for (t, h), c in counts.items() if h == v)
            new[v] = (colour[v], tuple(outs), tuple(ins))
        colour = new
    return colour


def are_isomorphic(d1: MultiDigraph, d2: MultiDigraph) -> Optional[dict]:
    """Vertex bijection d1 -> d2 preserving arc multiplicities, or None."""
    if len(d1) != len(d2) or d1.num_arcs() != d2.num_arcs():
        return None
    c1, c2 = d1.pair_multiset(), d2.pair_multiset()
    if sorted(c1.values()) != sorted(c2.values()):
        return None
    col1, col2 = _refined(d1, c1), _refined(d2, c2)
    # colours are structural, so the same multiset must appear on both sides
    if sorted(map(repr, col1.values())) != sorted(map(repr, col2.values())):
        return None
    order = sorted(d1.vertices, key=lambda v: (sum(1 for u in d1.vertices if col1[u] == col1[v]), v))
    candidates = {v: [w for w in sorted(d2.vertices) if col2[w] == col1[v]] for v in order}
    mapping: dict = {}
    used: set = set()

    def consistent(v, w):
        for u, x in mapping.items():
            if c1.get((v, u), 0) != c2.get((w, x), 0) or c1.get((u, v), 0) != c2.get((x, w), 0):
                return False
        return True

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if extend(0):
        return dict(mapping)
    return None


def canonical_form(d: MultiDigraph) -> tuple:
    """Lexicographically least relabelled pair multiset (for tiny graphs only)."""
    from itertools import permutations

    vs = sorted(d.vertices)
    counts = d.pair_multiset()
    best = None
    for perm in permutations(range(len(vs))):
        relabel = dict(zip(vs, perm))
        form = tuple(sorted((relabel[t], relabel[h], c) for (t, h), c in counts.items()))
        if best is None or form < best:
            best = form
    return (len(vs), best)
