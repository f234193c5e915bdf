import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sadkit.catalog import (
    PRODUCT_VERDICTS,
    build_appendix_family,
    catalog,
    find_deg2_witness,
    figure_graphs,
    gadget_graph,
    match_catalog,
    match_exception,
    product_variants,
    verify_certificate,
)
from sadkit.digraph import is_k_arc_strong
from sadkit.errors import InvalidFlags
from sadkit.generate import GeneratorConfig, generate
from sadkit.search import brute_force_sad


def _relabel(g, seed):
    vs = sorted(g.vertices)
    perm = vs[:]
    random.Random(seed).shuffle(perm)
    return g.relabel(dict(zip(vs, perm)))


def test_every_entry_is_two_arc_strong_without_decomposition():
    for cid, flags, g in catalog():
        assert is_k_arc_strong(g, 2), (cid, flags)
        assert brute_force_sad(g) is None, (cid, flags)


def test_decomposable_products_decompose_for_every_flag_variant():
    for (left, right), ok in PRODUCT_VERDICTS.items():
        for flags, s in product_variants(left, right):
            assert is_k_arc_strong(s.graph, 2)
            assert (brute_force_sad(s.graph) is not None) == ok, (left, right, flags)


def test_gadget_on_first_family_is_two_cycles():
    s = build_appendix_family("i", "i")
    g = s.graph
    a, b = 4, 5
    assert g.out_neighbors(a) == g.in_neighbors(a) == {1, 3}
    assert g.out_neighbors(b) == g.in_neighbors(b) == {0, 2}


def test_bad_flags_raise():
    with pytest.raises(InvalidFlags):
        gadget_graph("i", (True,))


@given(st.integers(0, 10**6))
def test_matching_is_invariant_under_relabelling(seed):
    entries = catalog()
    cid, flags, g = entries[seed % len(entries)]
    # some entries are reverses of others, so only presence is invariant
    moved = _relabel(g, seed)
    cert = match_catalog(moved)
    assert cert is not None and verify_certificate(moved, cert)
    back = _relabel(g.reverse(), seed)
    cert = match_catalog(back)
    assert cert is not None and verify_certificate(back, cert)


def test_reversed_match_is_flagged():
    g = dict(figure_graphs())["S4_2"]
    cert = match_catalog(g.reverse())
    assert cert is not None
    assert verify_certificate(g.reverse(), cert)


def test_three_arc_strong_split_digraph_matches_nothing():
    s = generate(GeneratorConfig(v1_size=0, v2_size=6, seed=2))
    g = s.graph
    for t in sorted(s.v2):
        for h in sorted(s.v2):
            if t != h:
                g, _ = g.with_arcs([(t, h)])
    assert is_k_arc_strong(g, 3)
    assert match_exception(g) is None


def test_deg2_witness_in_s4(s4):
    hit = find_deg2_witness(s4)
    assert hit is not None
    u, x1, x2, x3, v = hit[1]
    assert s4.out_neighbors(u) == {x1, x3} and s4.in_neighbors(u) == {x1, x2}
    assert s4.out_neighbors(x1) == {x2, u} and s4.out_neighbors(x2) == {v, u}


def test_certificates_check_out():
    for cid, flags, g in catalog():
        cert = match_catalog(g)
        assert cert.catalog_id == cid or brute_force_sad(g) is None
        assert verify_certificate(g, cert)
