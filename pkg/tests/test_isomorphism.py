import random

import networkx as nx
from hypothesis import given
from hypothesis import strategies as st

from sadkit.digraph import MultiDigraph
from sadkit.isomorphism import are_isomorphic, canonical_form

from .conftest import digraphs
from .test_digraph import to_nx


def _shuffled(d, seed):
    vs = sorted(d.vertices)
    perm = vs[:]
    random.Random(seed).shuffle(perm)
    return d.relabel(dict(zip(vs, perm))), dict(zip(vs, perm))


@given(digraphs(max_n=6), st.integers(0, 1000))
def test_relabelled_copy_is_isomorphic(d, seed):
    e, _ = _shuffled(d, seed)
    m = are_isomorphic(d, e)
    assert m is not None
    assert e.pair_multiset() == d.relabel(m).pair_multiset()
    assert canonical_form(d) == canonical_form(e)


@given(digraphs(max_n=5, max_arcs=10), digraphs(max_n=5, max_arcs=10))
def test_agrees_with_networkx(a, b):
    ours = are_isomorphic(a, b) is not None
    theirs = nx.is_isomorphic(to_nx(a), to_nx(b))
    assert ours == theirs


def test_multiplicity_matters():
    a = MultiDigraph(range(2), [(0, 1), (1, 0), (0, 1)])
    b = MultiDigraph(range(2), [(0, 1), (1, 0), (1, 0)])
    c = MultiDigraph(range(2), [(0, 1), (1, 0), (1, 0), (1, 0)])
    assert are_isomorphic(a, b) is not None
    assert are_isomorphic(a, c) is None
