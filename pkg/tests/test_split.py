import pytest
from hypothesis import given
from hypothesis import strategies as st

from sadkit.digraph import MultiDigraph, PathInDigraph, is_k_arc_strong
from sadkit.errors import InternalInvariantFailure, PreconditionViolated
from sadkit.procedures import targets_xy
from sadkit.search import find_decomposition, verify_decomposition
from sadkit.semicomplete import certify_split, maximal_split_partition
from sadkit.split import (
    FeasibleSet,
    PendingDecomposition,
    Work,
    build_gbar,
    critical_pair,
    is_critical,
    lift,
    make_path,
    pending_extend,
    rebuild_feasible,
    split_off_path,
    validate_pending,
)

from .conftest import split_instances

# V2 = {0, 1, 2} as a 3-cycle with chords both ways, f = 3 in V1
F_ARCS = [(0, 1), (1, 2), (2, 0), (1, 0), (3, 0), (3, 1), (2, 3), (0, 3)]


def f_instance():
    return certify_split(MultiDigraph(range(4), F_ARCS), {3}, {0, 1, 2})


def _not_strong_v2(s):
    s = maximal_split_partition(s)
    return s if len(s.v2) >= 5 and not is_k_arc_strong(s.d_v2(), 2) else None


def test_rebuild_fresh_vertex_takes_other_out_neighbour():
    w = Work.start(f_instance())
    b = rebuild_feasible(w, FeasibleSet(), 3, e_arc=7)  # e = 0, out-neighbours {0, 1}
    assert b.pair(3) == (7, 5)


def test_rebuild_replaces_out_arc_pointing_back():
    w = Work.start(f_instance())
    b = FeasibleSet({3: (6, 4)})  # in from 2, out to 0
    assert rebuild_feasible(w, b, 3, e_arc=7).pair(3) == (7, 5)


def test_rebuild_keeps_out_arc_elsewhere():
    w = Work.start(f_instance())
    b = FeasibleSet({3: (6, 5)})  # in from 2, out to 1
    assert rebuild_feasible(w, b, 3, e_arc=7).pair(3) == (7, 5)
    with pytest.raises(PreconditionViolated):
        rebuild_feasible(w, b, 3, e_arc=0)


def test_feasible_set_reverses_roles_and_validates():
    g = f_instance().graph
    b = FeasibleSet({3: (6, 5)})
    assert b.reversed().pair(3) == (5, 6)
    b.validate(g, frozenset({3}), frozenset({0, 1, 2}))
    with pytest.raises(InternalInvariantFailure):
        FeasibleSet({3: (7, 4)}).validate(g, frozenset({3}), frozenset({0, 1, 2}))


def test_make_path_cuts_loops_and_stops_at_y():
    g = MultiDigraph(range(4), [(0, 1), (1, 0), (0, 2), (2, 3), (3, 1)])
    p = make_path(g, [0, 1, 2, 3, 4], {0}, {3})
    assert p.vertices == (0, 2, 3)


@given(split_instances(v1=(1, 3)))
def test_split_off_then_lift_restores_arcs(s):
    w = Work.start(s)
    # route a path through one V1 vertex x: u -> x -> v
    x = min(s.v1)
    g = s.graph
    a_in = min(g.in_arcs(x))
    a_out = min(a for a in g.out_arcs(x) if g.head(a) != g.tail(a_in))
    p = PathInDigraph.from_arcs(g, [a_in, a_out])
    h, lift_map = split_off_path(w, p)
    assert set(lift_map.values()) == {(a_in, a_out)}
    restored = set(h.arcs) - set(lift_map)
    for pair in lift_map.values():
        restored |= set(pair)
    assert restored == set(g.arcs)
    for nid, (i, o) in lift_map.items():
        assert h.arcs[nid] == (g.tail(i), g.head(o))


@given(split_instances(v2=(5, 6), v1=(1, 3)))
def test_critical_pair_boundary_is_minimal(s):
    s = _not_strong_v2(s)
    if s is None or not is_k_arc_strong(s.d_v2(), 1):
        return
    w = Work.start(s)
    X, Y = targets_xy(w)
    st_ = critical_pair(w, X, Y, FeasibleSet())
    assert is_critical(w, st_)
    for q in st_.paths():
        assert q.start in X and q.end in Y
    assert not set(st_.q1.arcs) & set(st_.q2.arcs)


@given(split_instances(v2=(5, 6), v1=(1, 3)))
def test_gbar_lives_on_v2_and_lifts_back(s):
    s = _not_strong_v2(s)
    if s is None or not is_k_arc_strong(s.d_v2(), 1):
        return
    w = Work.start(s)
    X, Y = targets_xy(w)
    st_ = critical_pair(w, X, Y, FeasibleSet())
    gbar, lift_map = build_gbar(w, st_)
    assert gbar.vertices == s.v2
    splitting = set(gbar.arcs) - set(s.d_v2().arcs)
    assert splitting == set(lift_map)
    lifted = [a for pair in lift_map.values() for a in pair]
    assert len(lifted) == len(set(lifted))
    if is_k_arc_strong(gbar, 2):
        dec = find_decomposition(gbar)
        pd = PendingDecomposition(*lift(dec, lift_map))
        assert validate_pending(s, pd) == []
        assert verify_decomposition(s.graph, pending_extend(s, pd))


@given(split_instances(v2=(5, 6), v1=(0, 3)), st.booleans())
def test_pending_extend_from_v2_decomposition(s, swap):
    s = maximal_split_partition(s)
    inner = s.d_v2()
    if not is_k_arc_strong(inner, 2):
        return
    dec = find_decomposition(inner)
    if dec is None:
        return
    d1, d2 = (dec.a2, dec.a1) if swap else (dec.a1, dec.a2)
    out = pending_extend(s, PendingDecomposition(d1, d2))
    assert verify_decomposition(s.graph, out)


def test_invalid_pending_is_rejected():
    s = f_instance()
    with pytest.raises(PreconditionViolated):
        pending_extend(s, PendingDecomposition(frozenset({0}), frozenset({1})))
