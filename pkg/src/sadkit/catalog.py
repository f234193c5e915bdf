"""Known 2-arc-strong digraphs without strong arc decompositions.

Three kinds of certificate are produced:

* catalog isomorphism: the graph is (the reverse of) one of a finite list of
  small exceptional digraphs;
* ``LOCAL_DEG2``: a vertex u with two in- and two out-neighbours wired to two
  degree-2 neighbours in a way that forces a class to lose an arc;
* ``LOCAL_TRIANGLE``: a terminal (or, reversed, initial) 3-cycle component of
  D[V2] attached to two V1 vertices of degree 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Optional

from .digraph import MultiDigraph, acyclic_ordering
from .errors import InvalidFlags
from .isomorphism import are_isomorphic
from .semicomplete import SplitInstance, certify_split

__all__ = [
    "ExceptionCertificate",
    "catalog",
    "figure_graphs",
    "gadget_graph",
    "build_appendix_family",
    "match_catalog",
    "match_exception",
    "find_deg2_witness",
    "find_triangle_witness",
    "verify_certificate",
    "GADGETS",
    "PRODUCT_VERDICTS",
]

V1, V2, V3, V4, A, B = 0, 1, 2, 3, 4, 5
LABELS = {V1: "v1", V2: "v2", V3: "v3", V4: "v4", A: "a", B: "b"}

_CYCLE = [(V1, V2), (V2, V3), (V3, V4), (V4, V1)]
S4_ARCS = _CYCLE + [(V1, V3), (V2, V4), (V3, V1), (V4, V2)]
S4_MINUS1_ARCS = _CYCLE + [(V1, V3), (V3, V1), (V2, V4)]
S4_MINUS2_ARCS = _CYCLE + [(V1, V3), (V2, V4)]

FIGURE_EXTRAS = {
    "S4": [],
    "S4_1": [(V3, V1)],
    "S4_2": [(V1, V2)],
    "S4_3": [(V1, V3), (V4, V2)],
    "S4_4": [(V1, V2), (V1, V3)],
    "S4_5": [(V1, V2), (V4, V2)],
    "S4_6": [(V1, V2), (V1, V3), (V4, V2)],
}

# (solid arcs, optional arcs) for a vertex attached to the 4-cycle base.
# The gadget on ``a`` uses (i)..(v); the starred versions live on ``b``.
GADGETS = {
    "i": ([(A, V2), (A, V4), (V4, A), (V2, A)], []),
    "ii": ([(A, V2), (V2, A), (V4, A), (A, V1)], []),
    "iii": ([(A, V2), (A, V4), (V4, A), (V1, A)], []),
    "iv": ([(A, V2), (V2, A), (V4, A), (A, V3)], [(A, V4)]),
    "v": ([(A, V2), (A, V4), (V4, A), (V3, A)], [(V2, A)]),
    "i*": ([(B, V1), (B, V3), (V3, B), (V1, B)], []),
    "ii*": ([(B, V1), (B, V3), (V3, B), (V4, B)], []),
    "iii*": ([(B, V1), (V1, B), (V3, B), (B, V4)], []),
    "iv*": ([(B, V1), (B, V3), (V3, B), (V2, B)], [(V1, B)]),
    "v*": ([(B, V1), (V1, B), (V3, B), (B, V2)], [(B, V3)]),
}

FAMILY_IDS = ("i", "ii", "iii", "iv", "v")

# verdicts for (left)* x (right) with left <= right in family order
PRODUCT_VERDICTS = {
    ("i", "i"): False, ("i", "ii"): False, ("i", "iii"): False, ("i", "iv"): False, ("i", "v"): True,
    ("ii", "ii"): False, ("ii", "iii"): False, ("ii", "iv"): False, ("ii", "v"): True,
    ("iii", "iii"): False, ("iii", "iv"): False, ("iii", "v"): False,
    ("iv", "iv"): False, ("iv", "v"): True,
    ("v", "v"): True,
}


@dataclass(frozen=True)
class ExceptionCertificate:
    """Evidence that a digraph has no strong arc decomposition.

    For catalog matches ``mapping`` sends the input's vertices onto the
    catalog graph (of the reversed input when ``reversed`` is set).  For
    local structures ``witness`` holds the named vertices.
    """

    catalog_id: str
    mapping: tuple = ()
    witness: tuple = ()
    dashed_flags: tuple = ()
    reversed: bool = False
    detail: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def label(self) -> str:
        return ("REVERSED " if self.reversed else "") + self.catalog_id


def figure_graphs() -> list:
    """The seven semicomplete multidigraph exceptions on four vertices."""
    return [(name, MultiDigraph(range(4), S4_ARCS + extra, LABELS)) for name, extra in FIGURE_EXTRAS.items()]


def _check_flags(gadget: str, dashed) -> tuple:
    optional = GADGETS[gadget][1]
    dashed = tuple(bool(f) for f in (dashed or ()))
    if len(dashed) > len(optional):
        raise InvalidFlags(f"gadget {gadget} has {len(optional)} optional arcs, got {len(dashed)} flags")
    return dashed + (False,) * (len(optional) - len(dashed))


def _gadget_arcs(gadget: str, flags) -> list:
    solid, optional = GADGETS[gadget]
    return solid + [arc for arc, on in zip(optional, flags) if on]


def gadget_graph(f: str, dashed=()) -> SplitInstance:
    """Base S4 minus one arc with the single gadget vertex ``a``."""
    if f not in FAMILY_IDS:
        raise InvalidFlags(f"unknown family id {f!r}")
    flags = _check_flags(f, dashed)
    arcs = S4_MINUS1_ARCS + _gadget_arcs(f, flags)
    g = MultiDigraph(range(5), arcs, LABELS)
    return certify_split(g, {A}, {V1, V2, V3, V4})


def build_appendix_family(left: str, right: str, dashed=((), ())) -> SplitInstance:
    """The product (left)* x (right) on the 6-arc base with gadget vertices b and a.

    ``dashed`` is a pair of flag tuples: optional arcs of the starred gadget
    on b, then those of the gadget on a.
    """
    if left not in FAMILY_IDS or right not in FAMILY_IDS:
        raise InvalidFlags(f"unknown family ids {left!r}, {right!r}")
    try:
        lf, rf = dashed
    except (TypeError, ValueError):
        raise InvalidFlags("dashed must be a pair of flag tuples") from None
    lflags = _check_flags(left + "*", lf)
    rflags = _check_flags(right, rf)
    arcs = S4_MINUS2_ARCS + _gadget_arcs(left + "*", lflags) + _gadget_arcs(right, rflags)
    g = MultiDigraph(range(6), arcs, LABELS)
    return certify_split(g, {A, B}, {V1, V2, V3, V4})


def _flag_variants(gadget: str):
    return list(product((False, True), repeat=len(GADGETS[gadget][1])))


def product_variants(left: str, right: str) -> list:
    out = []
    for lf in _flag_variants(left + "*"):
        for rf in _flag_variants(right):
            out.append(((lf, rf), build_appendix_family(left, right, (lf, rf))))
    return out


def catalog() -> list:
    """Every catalogued exception as ``(id, flags, MultiDigraph)``."""
    entries = [(name, (), g) for name, g in figure_graphs()]
    for f in FAMILY_IDS:
        for flags in _flag_variants(f):
            entries.append((f"GADGET_{f}", flags, gadget_graph(f, flags).graph))
    for (left, right), decomposable in PRODUCT_VERDICTS.items():
        if decomposable:
            continue
        for flags, s in product_variants(left, right):
            entries.append((f"PRODUCT_{left}*x{right}", flags, s.graph))
    return entries


_CATALOG_CACHE: list = []


def _catalog_cached():
    if not _CATALOG_CACHE:
        for cid, flags, g in catalog():
            _CATALOG_CACHE.append((cid, flags, g, (len(g), g.num_arcs())))
    return _CATALOG_CACHE


def match_catalog(d: MultiDigraph) -> Optional[ExceptionCertificate]:
    """Catalog entry isomorphic to d or to its reverse."""
    key = (len(d), d.num_arcs())
    candidates = [e for e in _catalog_cached() if e[3] == key]
    # a direct match wins over a reversed one, since some entries are reverses of others
    for reversed_, h in ((False, d), (True, d.reverse() if candidates else d)):
        for cid, flags, g, _ in candidates:
            m = are_isomorphic(h, g)
            if m is not None:
                return ExceptionCertificate(cid, tuple(sorted(m.items())), dashed_flags=flags, reversed=reversed_)
    return None


def _outs(d: MultiDigraph, v: int) -> set:
    return d.out_neighbors(v)


def _deg2_at(d: MultiDigraph, u: int) -> Optional[tuple]:
    if d.out_degree(u) != 2 or d.in_degree(u) != 2:
        return None
    outs, ins = d.out_neighbors(u), d.in_neighbors(u)
    if len(outs) != 2 or len(ins) != 2:
        return None
    for x1 in sorted(outs & ins):
        (x2,) = ins - {x1}
        (x3,) = outs - {x1}
        if x3 in (x2,):
            continue
        if d.out_degree(x1) != 2 or d.out_neighbors(x1) != {x2, u}:
            continue
        if d.out_degree(x2) != 2:
            continue
        n2 = d.out_neighbors(x2)
        if u not in n2 or len(n2) != 2:
            continue
        (v,) = n2 - {u}
        if v in (x1, x2, u):
            continue
        return (u, x1, x2, x3, v)
    return None


def find_deg2_witness(d: MultiDigraph) -> Optional[tuple]:
    """Search both orientations; returns ``(reversed, (u, x1, x2, x3, v))``."""
    for reversed_, g in ((False, d), (True, d.reverse())):
        for u in sorted(g.vertices):
            w = _deg2_at(g, u)
            if w is not None:
                return reversed_, w
    return None


def _triangle_terminal(g: MultiDigraph, v1: frozenset, v2: frozenset) -> Optional[tuple]:
    sub = g.induced(v2)
    order = acyclic_ordering(sub)
    if len(order) < 2 or len(order.terminal) != 3:
        return None
    cp = order.terminal
    inner = sub.induced(cp)
    if inner.num_arcs() != 3:
        return None
    for a, b, c in permutations(sorted(cp)):
        if not (inner.has_arc(a, b) and inner.has_arc(b, c) and inner.has_arc(c, a)):
            continue
        nb = g.out_neighbors(b)
        if g.out_degree(b) != 3 or len(nb) != 3 or c not in nb:
            continue
        rest = nb - {c}
        if not rest <= v1:
            continue
        for u in sorted(rest):
            (v,) = rest - {u}
            if g.out_degree(c) != 2 or g.out_neighbors(c) != {v, a}:
                continue
            if g.out_degree(a) != 2 or g.out_neighbors(a) != {u, b}:
                continue
            if g.out_degree(u) != 2 or g.in_degree(u) != 2 or g.in_neighbors(u) != {a, b}:
                continue
            if g.out_degree(v) != 2 or g.in_degree(v) != 2 or g.in_neighbors(v) != {b, c}:
                continue
            nu, nv = g.out_neighbors(u), g.out_neighbors(v)
            if a not in nu or b not in nv:
                continue
            (up,) = nu - {a}
            (vp,) = nv - {b}
            outside = v2 - cp
            if up in outside and vp in outside:
                return (a, b, c, u, v, up, vp)
    return None


def find_triangle_witness(s: SplitInstance) -> Optional[tuple]:
    """Returns ``(reversed, (a, b, c, u, v, u+, v+))`` when the 3-cycle structure occurs."""
    if len(s.v2) < 4:
        return None
    for reversed_, g in ((False, s.graph), (True, s.graph.reverse())):
        w = _triangle_terminal(g, s.v1, s.v2)
        if w is not None:
            return reversed_, w
    return None


def local_certificate(s: SplitInstance) -> Optional[ExceptionCertificate]:
    hit = find_deg2_witness(s.graph)
    if hit is not None:
        return ExceptionCertificate("LOCAL_DEG2", witness=hit[1], reversed=hit[0])
    hit = find_triangle_witness(s)
    if hit is not None:
        return ExceptionCertificate("LOCAL_TRIANGLE", witness=hit[1], reversed=hit[0])
    return None


def match_exception(d) -> Optional[ExceptionCertificate]:
    """Certificate for a split instance or plain multidigraph, if one applies.

    Local witnesses are tried first since they are cheaper to check.
    """
    if isinstance(d, SplitInstance):
        cert = local_certificate(d)
        if cert is not None:
            return cert
        return match_catalog(d.graph)
    hit = find_deg2_witness(d)
    if hit is not None:
        return ExceptionCertificate("LOCAL_DEG2", witness=hit[1], reversed=hit[0])
    return match_catalog(d)


def _catalog_graph(cid: str, flags) -> Optional[MultiDigraph]:
    for eid, eflags, g, _ in _catalog_cached():
        if eid == cid and tuple(eflags) == tuple(flags):
            return g
    return None


def verify_certificate(d, cert: ExceptionCertificate) -> bool:
    """Re-check a certificate against the graph it claims to describe."""
    s = d if isinstance(d, SplitInstance) else None
    g = s.graph if s is not None else d
    if cert.catalog_id == "LOCAL_DEG2":
        h = g.reverse() if cert.reversed else g
        return _deg2_at(h, cert.witness[0]) == tuple(cert.witness)
    if cert.catalog_id == "LOCAL_TRIANGLE":
        if s is None:
            return False
        h = g.reverse() if cert.reversed else g
        return _triangle_terminal(h, s.v1, s.v2) == tuple(cert.witness)
    target = _catalog_graph(cert.catalog_id, cert.dashed_flags)
    if target is None:
        return False
    h = g.reverse() if cert.reversed else g
    m = dict(cert.mapping)
    if set(m) != set(h.vertices) or set(m.values()) != set(target.vertices):
        return False
    return h.relabel(m).pair_multiset() == target.pair_multiset()
