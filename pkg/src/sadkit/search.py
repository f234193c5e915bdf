"""Exact strong-arc-decomposition search, verification and vertex extension."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from .digraph import MultiDigraph, _reach, _strong_masks, is_k_arc_strong, is_strong
from .errors import BudgetExceeded, InternalInvariantFailure, PreconditionViolated

__all__ = [
    "Decomposition",
    "Outcome",
    "verify_decomposition",
    "find_decomposition",
    "brute_force_sad",
    "naive_sad",
    "sad_semicomplete_multi",
    "extend_to_outside_vertices",
    "default_budget",
]

DEFAULT_BUDGET = 22


def default_budget() -> int:
    env = os.environ.get("SADKIT_ORACLE_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class Decomposition:
    a1: frozenset
    a2: frozenset

    def __post_init__(self):
        object.__setattr__(self, "a1", frozenset(self.a1))
        object.__setattr__(self, "a2", frozenset(self.a2))

    def swapped(self) -> "Decomposition":
        return Decomposition(self.a2, self.a1)

    def classes(self):
        return (self.a1, self.a2)


@dataclass
class Outcome:
    """Either a verified decomposition or an exception certificate.

    ``route`` names the construction that produced the answer and
    ``fallback`` is set when the exhaustive search had to step in.
    """

    decomposition: Optional[Decomposition] = None
    exception: Optional[object] = None
    route: str = ""
    fallback: bool = False
    trace: list = field(default_factory=list)
    note: str = ""

    def __post_init__(self):
        if (self.decomposition is None) == (self.exception is None):
            raise ValueError("an outcome holds exactly one of decomposition/exception")

    @property
    def decomposable(self) -> bool:
        return self.decomposition is not None


def verify_decomposition(d: MultiDigraph, dec: Decomposition) -> bool:
    ids = set(d.arcs)
    if dec.a1 & dec.a2 or (dec.a1 | dec.a2) != ids:
        return False
    if len(d) == 1:
        return True
    return is_strong(d.arc_subgraph(dec.a1)) and is_strong(d.arc_subgraph(dec.a2))


def _arc_order(d: MultiDigraph, arcs: list) -> list:
    return sorted(arcs, key=lambda a: (min(d.out_degree(d.tail(a)), d.in_degree(d.head(a))), d.tail(a), d.head(a), a))


class _Search:
    """Two-colouring of arcs keeping both potential classes strong.

    The potential graph of class c holds the arcs coloured c plus the arcs
    still uncoloured; if it stops being strong the branch is dead.
    """

    def __init__(self, d: MultiDigraph, fixed: Optional[dict] = None):
        self.d = d
        self.vmask = d.vertex_mask()
        self.fixed = dict(fixed or {})
        free = [a for a in d.arcs if a not in self.fixed]
        self.order = _arc_order(d, free)
        self.cnt = [dict(), dict()]
        for c in (0, 1):
            for a, (t, h) in d.arcs.items():
                if self.fixed.get(a, c) == c:
                    self.cnt[c][(t, h)] = self.cnt[c].get((t, h), 0) + 1
        self.out = [dict.fromkeys(d.vertices, 0), dict.fromkeys(d.vertices, 0)]
        self.inn = [dict.fromkeys(d.vertices, 0), dict.fromkeys(d.vertices, 0)]
        for c in (0, 1):
            for (t, h) in self.cnt[c]:
                self.out[c][t] |= 1 << h
                self.inn[c][h] |= 1 << t
        self.colour = dict(self.fixed)
        self.size = [sum(1 for v in self.fixed.values() if v == c) for c in (0, 1)]
        self.nodes = 0

    def _strong(self, c) -> bool:
        return _strong_masks(self.vmask, self.out[c], self.inn[c])

    def _assigned_strong(self, c) -> bool:
        out = dict.fromkeys(self.d.vertices, 0)
        inn = dict.fromkeys(self.d.vertices, 0)
        for a, col in self.colour.items():
            if col == c:
                t, h = self.d.arcs[a]
                out[t] |= 1 << h
                inn[h] |= 1 << t
        return _strong_masks(self.vmask, out, inn)

    def _put(self, a, c):
        """Colour a with c; returns True if the other class stays viable."""
        t, h = self.d.arcs[a]
        other = 1 - c
        self.colour[a] = c
        self.size[c] += 1
        k = self.cnt[other][(t, h)] - 1
        self.cnt[other][(t, h)] = k
        if k == 0:
            self.out[other][t] &= ~(1 << h)
            self.inn[other][h] &= ~(1 << t)
            return self._strong(other)
        return True

    def _take(self, a, c):
        t, h = self.d.arcs[a]
        other = 1 - c
        del self.colour[a]
        self.size[c] -= 1
        k = self.cnt[other][(t, h)] + 1
        self.cnt[other][(t, h)] = k
        if k == 1:
            self.out[other][t] |= 1 << h
            self.inn[other][h] |= 1 << t

    def run(self, symmetric: bool = True) -> Optional[dict]:
        if not (self._strong(0) and self._strong(1)):
            return None
        if not self.order:
            return dict(self.colour)
        first = self.order[0]
        choices = (0,) if symmetric and not self.fixed else (0, 1)
        for c in choices:
            ok = self._put(first, c)
            if ok:
                res = self._dfs(1)
                if res is not None:
                    return res
            self._take(first, c)
        return None

    def _dfs(self, i) -> Optional[dict]:
        self.nodes += 1
        if i == len(self.order):
            return dict(self.colour)
        # early exit: if one class is already strong the rest can join the other
        for c in (0, 1):
            if self.size[c] >= len(self.d) and self._assigned_strong(c):
                res = dict(self.colour)
                for a in self.order[i:]:
                    res[a] = 1 - c
                return res
        a = self.order[i]
        first = 0 if self.size[0] <= self.size[1] else 1
        for c in (first, 1 - first):
            ok = self._put(a, c)
            if ok:
                res = self._dfs(i + 1)
                if res is not None:
                    self._take(a, c)
                    return res
            self._take(a, c)
        return None


def _colouring_to_dec(colour: dict) -> Decomposition:
    return Decomposition({a for a, c in colour.items() if c == 0}, {a for a, c in colour.items() if c == 1})


def find_decomposition(d: MultiDigraph, fixed: Optional[dict] = None) -> Optional[Decomposition]:
    """Backtracking search for a strong arc decomposition (no size cap).

    ``fixed`` optionally pins arcs to class 0 or 1.
    """
    if len(d) == 1:
        if fixed:
            return Decomposition({a for a, c in fixed.items() if c == 0}, {a for a, c in fixed.items() if c == 1})
        return Decomposition(set(d.arcs), set())
    colour = _Search(d, fixed).run(symmetric=True)
    if colour is None:
        return None
    dec = _colouring_to_dec(colour)
    if not verify_decomposition(d, dec):
        raise InternalInvariantFailure("search produced an invalid decomposition")
    return dec


def brute_force_sad(d: MultiDigraph, budget: Optional[int] = None) -> Optional[Decomposition]:
    """Exhaustive oracle: a decomposition if one exists, else None."""
    if budget is None:
        budget = default_budget()
    if d.num_arcs() > budget:
        raise BudgetExceeded(f"{d.num_arcs()} arcs exceed the oracle budget of {budget}")
    return find_decomposition(d)


def naive_sad(d: MultiDigraph) -> Optional[Decomposition]:
    """Enumerate every bipartition without pruning (tiny graphs only)."""
    ids = d.arc_ids()
    if not ids:
        return Decomposition(set(), set()) if len(d) == 1 else None
    for bits in product((0, 1), repeat=len(ids) - 1):
        a1 = {ids[0]} | {a for a, b in zip(ids[1:], bits) if b == 0}
        dec = Decomposition(a1, set(ids) - a1)
        if verify_decomposition(d, dec):
            return dec
    return None


def sad_semicomplete_multi(d: MultiDigraph) -> Outcome:
    """Decompose a 2-arc-strong semicomplete multidigraph or certify an exception."""
    from .catalog import match_catalog
    from .semicomplete import is_semicomplete

    if not is_semicomplete(d) or not is_k_arc_strong(d, 2):
        raise PreconditionViolated("needs a 2-arc-strong semicomplete multidigraph")
    cert = match_catalog(d)
    if cert is not None:
        return Outcome(exception=cert, route="catalog")
    dec = find_decomposition(d)
    if dec is None:
        raise InternalInvariantFailure("semicomplete multidigraph outside the catalog has no decomposition")
    return Outcome(decomposition=dec, route="semicomplete-search")


def extend_to_outside_vertices(d: MultiDigraph, x: Iterable[int], dec_on_x: Decomposition) -> Decomposition:
    """Extend a decomposition of D[X] to D.

    Every vertex outside X must have two distinct in-neighbours and two
    distinct out-neighbours in X.  Each such vertex sends one out-arc and
    receives one in-arc in each class; every other arc joins class a1.
    """
    x = frozenset(x)
    inner = d.induced(x)
    if set(dec_on_x.a1 | dec_on_x.a2) != set(inner.arcs):
        raise PreconditionViolated("dec_on_x must cover exactly the arcs inside X")
    if len(x) > 1 and not verify_decomposition(inner, dec_on_x):
        raise PreconditionViolated("dec_on_x is not a decomposition of D[X]")
    a1, a2 = set(dec_on_x.a1), set(dec_on_x.a2)
    for v in sorted(d.vertices - x):
        outs = {}
        for a in d.out_arcs(v):
            h = d.head(a)
            if h in x:
                outs.setdefault(h, a)
        ins = {}
        for a in d.in_arcs(v):
            t = d.tail(a)
            if t in x:
                ins.setdefault(t, a)
        if len(outs) < 2 or len(ins) < 2:
            raise PreconditionViolated(f"vertex {v} lacks two in- and out-neighbours in X")
        o = sorted(outs)
        i = sorted(ins)
        a1.add(outs[o[0]])
        a2.add(outs[o[1]])
        a1.add(ins[i[0]])
        a2.add(ins[i[1]])
    a1 |= set(d.arcs) - a1 - a2
    dec = Decomposition(a1, a2)
    if not verify_decomposition(d, dec):
        raise InternalInvariantFailure("extension produced an invalid decomposition")
    return dec
