import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sadkit.digraph import MultiDigraph, is_strong
from sadkit.errors import InvalidPartition, PreconditionViolated
from sadkit.generate import random_semicomplete
from sadkit.semicomplete import (
    NiceDecomposition,
    brute_force_nice_decompositions,
    certify_split,
    maximal_split_partition,
    natural_backward_ordering,
    nice_decomposition,
    validate_nice,
)


def strong_semicomplete(seed, n):
    rng = random.Random(seed)
    while True:
        d = MultiDigraph(range(n), random_semicomplete(rng, n, both_prob=rng.choice((0.0, 0.15, 0.3))))
        if is_strong(d):
            return d


def test_certify_split_rules():
    tri = [(0, 1), (1, 2), (2, 0)]
    ok = MultiDigraph(range(5), tri + [(3, 0), (0, 3), (4, 1), (1, 4)])
    s = certify_split(ok, {3, 4}, {0, 1, 2})
    assert s.v1 == {3, 4} and len(s.crossing_arcs()) == 4
    with pytest.raises(InvalidPartition) as e:
        certify_split(MultiDigraph(range(5), tri + [(3, 4)]), {3, 4}, {0, 1, 2})
    assert e.value.rule == "independent"
    with pytest.raises(InvalidPartition) as e:
        certify_split(MultiDigraph(range(4), tri + [(3, 0), (3, 0)]), {3}, {0, 1, 2})
    assert e.value.rule == "simple-crossing"
    with pytest.raises(InvalidPartition) as e:
        certify_split(MultiDigraph(range(4), [(0, 1), (1, 2)]), {3}, {0, 1, 2})
    assert e.value.rule == "semicomplete"
    with pytest.raises(InvalidPartition):
        certify_split(ok, {3}, {0, 1, 2})


def test_maximal_partition_moves_at_most_one_vertex():
    # both 2 and 3 see all of V2 = {0, 1}; promoting 2 makes 3 non-promotable
    arcs = [(0, 1), (1, 0), (2, 0), (0, 2), (2, 1), (1, 2), (3, 0), (0, 3), (3, 1), (1, 3)]
    s = certify_split(MultiDigraph(range(4), arcs), {2, 3}, {0, 1})
    m = maximal_split_partition(s)
    assert m.v1 == {3} and m.v2 == {0, 1, 2}
    assert maximal_split_partition(m) is m


def test_nice_decomposition_needs_four_vertices():
    with pytest.raises(PreconditionViolated):
        nice_decomposition(MultiDigraph(range(3), [(0, 1), (1, 2), (2, 0)]))


def test_nice_decomposition_of_small_tournament():
    # cut arcs are 0->1, 2->3 and 3->0; blocks {1} and {0} meet only in a cut arc.
    # The unique answer was found by enumeration.
    d = MultiDigraph(range(4), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 0)])
    nd = nice_decomposition(d)
    assert nd.blocks == (frozenset({1}), frozenset({0}), frozenset({3}), frozenset({2}))
    assert [d.arcs[a] for a in nd.backward_arcs] == [(2, 3), (3, 0), (0, 1)]
    assert validate_nice(d, nd) == []


@given(st.integers(0, 10**6), st.integers(4, 7))
def test_nice_decomposition_is_unique_and_valid(seed, n):
    d = strong_semicomplete(seed, n)
    nd = nice_decomposition(d)
    assert validate_nice(d, nd) == []
    if n <= 6:
        assert brute_force_nice_decompositions(d) == [nd.blocks]


def test_natural_ordering_sorts_by_tail_block():
    nd = NiceDecomposition(
        (frozenset({0}), frozenset({1}), frozenset({2})), (7, 8), ((7, (1, 0)), (8, (2, 1)))
    )
    assert natural_backward_ordering(nd) == (8, 7)
