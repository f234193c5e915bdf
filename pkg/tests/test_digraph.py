import networkx as nx
import pytest
from hypothesis import given

from sadkit.digraph import (
    MultiDigraph,
    PathInDigraph,
    acyclic_ordering,
    arc_connectivity,
    arc_disjoint_xy_paths,
    brute_force_k_arc_strong,
    cut_arcs,
    is_k_arc_strong,
    is_strong,
    max_arc_disjoint_paths,
    strong_components,
)
from sadkit.errors import NotStrong, PreconditionViolated

from .conftest import digraphs


def to_nx(d):
    g = nx.MultiDiGraph()
    g.add_nodes_from(d.vertices)
    g.add_edges_from(d.arcs.values())
    return g


def test_two_cycle_is_strong():
    assert is_strong(MultiDigraph(range(2), [(0, 1), (1, 0)]))


def test_directed_path_is_not_strong():
    assert not is_strong(MultiDigraph(range(3), [(0, 1), (1, 2)]))


def test_s4_is_two_arc_strong(s4):
    assert is_strong(s4)
    assert is_k_arc_strong(s4, 2)
    assert not is_k_arc_strong(s4, 3)


def test_loops_rejected():
    with pytest.raises(ValueError):
        MultiDigraph(range(2), [(0, 0)])


def test_arc_ids_survive_reversal_and_subgraphs():
    d = MultiDigraph(range(3), [(0, 1), (1, 2), (2, 0), (0, 1)])
    r = d.reverse()
    assert set(r.arcs) == set(d.arcs)
    for a, (t, h) in d.arcs.items():
        assert r.arcs[a] == (h, t)
    sub = d.induced({0, 1})
    assert set(sub.arcs) == {0, 3}


def test_acyclic_ordering_of_path_of_cycles():
    d = MultiDigraph(range(4), [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)])
    order = acyclic_ordering(d)
    assert order.components == (frozenset({0, 1}), frozenset({2, 3}))
    assert order.initial == frozenset({0, 1}) and order.terminal == frozenset({2, 3})


def test_cut_arcs_of_cycle_and_parallel_arcs():
    c = MultiDigraph(range(3), [(0, 1), (1, 2), (2, 0)])
    assert cut_arcs(c) == {0, 1, 2}
    doubled = MultiDigraph(range(3), [(0, 1), (1, 2), (2, 0), (0, 1)])
    assert cut_arcs(doubled) == {1, 2}
    with pytest.raises(NotStrong):
        cut_arcs(MultiDigraph(range(2), [(0, 1)]))


def test_path_in_digraph_rejects_repeated_vertex():
    d = MultiDigraph(range(3), [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        PathInDigraph.from_arcs(d, [0, 1])
    p = PathInDigraph.from_arcs(MultiDigraph(range(3), [(0, 1), (1, 2)]), [0, 1])
    assert p.vertices == (0, 1, 2) and p.suffix_from(1) == (1,)


def test_xy_paths_need_disjoint_sets():
    d = MultiDigraph(range(2), [(0, 1), (0, 1)])
    with pytest.raises(PreconditionViolated):
        arc_disjoint_xy_paths(d, {0}, {0, 1})
    q1, q2 = arc_disjoint_xy_paths(d, {0}, {1})
    assert {q1.arcs, q2.arcs} == {(0,), (1,)}


@given(digraphs())
def test_strong_components_match_networkx(d):
    ours = sorted(sorted(c) for c in strong_components(d))
    theirs = sorted(sorted(c) for c in nx.strongly_connected_components(to_nx(d)))
    assert ours == theirs
    assert is_strong(d) == nx.is_strongly_connected(to_nx(d))


@given(digraphs())
def test_acyclic_ordering_has_only_forward_arcs(d):
    order = acyclic_ordering(d)
    for t, h in d.arcs.values():
        assert order.index_of(t) <= order.index_of(h)
    for comp in order.components:
        assert is_strong(d.induced(comp))


@given(digraphs(min_n=2, max_n=5, max_arcs=14))
def test_k_arc_strong_matches_definition(d):
    for k in (1, 2, 3):
        assert is_k_arc_strong(d, k) == brute_force_k_arc_strong(d, k)


@given(digraphs(min_n=2, max_n=6))
def test_flow_value_matches_networkx(d):
    vs = sorted(d.vertices)
    s, t = vs[0], vs[-1]
    value, used = max_arc_disjoint_paths(d, [s], [t])
    g = nx.DiGraph()
    g.add_nodes_from(d.vertices)
    for (a, b), m in d.pair_multiset().items():
        g.add_edge(a, b, capacity=m)
    assert value == nx.maximum_flow_value(g, s, t)


@given(digraphs(min_n=2, max_n=5))
def test_cut_arcs_are_exactly_the_bridges(d):
    if not is_strong(d):
        return
    expected = {a for a in d.arcs if not is_strong(d.without_arcs([a]))}
    assert cut_arcs(d) == expected


@given(digraphs(min_n=2, max_n=5))
def test_arc_connectivity_bounds(d):
    k = arc_connectivity(d, limit=4)
    assert is_k_arc_strong(d, k) if k >= 1 else not is_strong(d)
    if k < 4:
        assert not is_k_arc_strong(d, k + 1)
