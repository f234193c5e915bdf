import pytest
from hypothesis import given
from hypothesis import strategies as st

from sadkit.digraph import is_k_arc_strong
from sadkit.errors import PreconditionViolated
from sadkit.generate import FEASIBLE_SHAPES, GeneratorConfig, all_semicomplete, corpus, enumerate_semicomplete, generate, planted_obstruction
from sadkit.io import emit_edge_list
from sadkit.search import brute_force_sad
from sadkit.semicomplete import is_semicomplete, maximal_split_partition


def test_no_v1_gives_semicomplete():
    s = generate(GeneratorConfig(0, 5, seed=3))
    assert is_semicomplete(s.graph) and is_k_arc_strong(s.graph, 2)


@given(st.integers(0, 2**63), st.integers(0, 4), st.integers(3, 6))
def test_seed_determines_instance(seed, m, k):
    cfg = GeneratorConfig(m, k, 0.3, seed)
    a, b = generate(cfg), generate(cfg)
    assert emit_edge_list(a) == emit_edge_list(b)
    assert is_k_arc_strong(a.graph, 2)
    assert maximal_split_partition(a) is a


def test_config_is_validated():
    with pytest.raises(PreconditionViolated):
        GeneratorConfig(1, 1)
    with pytest.raises(PreconditionViolated):
        GeneratorConfig(1, 4, crossing_density=1.5)
    with pytest.raises(PreconditionViolated):
        GeneratorConfig(1, 4, two_cycle_prob=-0.1)


def test_corpus_respects_bounds():
    for cfg, s in corpus(40, seed=9):
        assert 4 <= len(s.v2) <= 8 and 0 <= len(s.v1) <= 6
        assert s.graph.num_arcs() <= 22


@pytest.mark.parametrize("k, m", FEASIBLE_SHAPES)
def test_every_corpus_shape_fits_the_arc_cap(k, m):
    s = generate(GeneratorConfig(m, k, 0.3, seed=11, max_arcs=22, two_cycle_prob=0.0))
    assert (len(s.v2), len(s.v1)) == (k, m) and s.graph.num_arcs() <= 22


def test_largest_shapes_are_in_the_corpus_table():
    assert (7, 0) in FEASIBLE_SHAPES and (4, 4) in FEASIBLE_SHAPES
    assert all(k * (k - 1) // 2 + 4 * m <= 22 for k, m in FEASIBLE_SHAPES)


def test_all_semicomplete_counts():
    assert sum(1 for _ in all_semicomplete(3)) == 27
    rep = enumerate_semicomplete(4)
    assert (rep.total, rep.two_arc_strong, len(rep.non_decomposable), len(rep.classes)) == (729, 87, 6, 1)


def test_planted_obstruction_has_no_decomposition():
    s = planted_obstruction(4, 5, 2)
    assert is_k_arc_strong(s.graph, 2)
    assert brute_force_sad(s.graph) is None
