"""Acceptance criteria 1-8, each reported as one pass/fail line."""
import random
import time

import pytest

from sadkit.catalog import PRODUCT_VERDICTS, S4_ARCS, catalog, figure_graphs, product_variants
from sadkit.digraph import MultiDigraph, is_k_arc_strong, is_strong
from sadkit.errors import GenerationFailed
from sadkit.generate import GeneratorConfig, corpus, enumerate_semicomplete, generate, planted_obstruction, random_semicomplete
from sadkit.io import emit_edge_list, parse_edge_list
from sadkit.isomorphism import are_isomorphic
from sadkit.search import brute_force_sad, verify_decomposition
from sadkit.semicomplete import SplitInstance, nice_decomposition, validate_nice
from sadkit.solver import solve_split

from .conftest import ACCEPTANCE_LINES, digraphs

CORPUS_SIZE = 1000
CORPUS_SEED = 2026


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def corpus_results():
    t = time.perf_counter()
    rows = []
    for cfg, s in corpus(CORPUS_SIZE, seed=CORPUS_SEED):
        out = solve_split(s)
        truth = brute_force_sad(s.graph)
        rows.append((cfg, s, out, truth))
    return rows, time.perf_counter() - t


def test_criterion_1_catalog_has_no_decomposition():
    t = time.perf_counter()
    entries = catalog()
    bad = [(cid, flags) for cid, flags, g in entries if not is_k_arc_strong(g, 2) or brute_force_sad(g) is not None]
    families = {cid.split("_")[0] for cid, _, _ in entries}
    elapsed = time.perf_counter() - t
    ok = not bad and {"S4", "GADGET", "PRODUCT"} <= families and elapsed < 5
    report(1, ok, f"{len(entries)} entries, {len(bad)} violations, largest {max(g.num_arcs() for *_, g in entries)} arcs, {elapsed:.2f}s")


def test_criterion_2_decomposable_products():
    t = time.perf_counter()
    checked, bad = 0, []
    for (left, right), decomposable in PRODUCT_VERDICTS.items():
        if not decomposable:
            continue
        for flags, s in product_variants(left, right):
            dec = brute_force_sad(s.graph)
            checked += 1
            if dec is None or not verify_decomposition(s.graph, dec):
                bad.append((left, right, flags))
    elapsed = time.perf_counter() - t
    report(2, not bad and checked >= 4 and elapsed < 5, f"{checked} variants of 4 products, {len(bad)} failures, {elapsed:.2f}s")


def test_criterion_3_semicomplete_desk_reproduction():
    t = time.perf_counter()
    rep4 = enumerate_semicomplete(4)
    t4 = time.perf_counter() - t
    s4 = MultiDigraph(range(4), S4_ARCS)
    only_s4 = bool(rep4.non_decomposable) and all(are_isomorphic(g, s4) for g in rep4.non_decomposable)
    t = time.perf_counter()
    rep5 = enumerate_semicomplete(5)
    t5 = time.perf_counter() - t
    ok = only_s4 and len(rep4.classes) == 1 and t4 < 10 and not rep5.non_decomposable and t5 < 600
    report(
        3,
        ok,
        f"n=4: {rep4.total} digraphs, {rep4.two_arc_strong} 2-arc-strong, "
        f"{len(rep4.non_decomposable)} bad (all S4: {only_s4}) in {t4:.2f}s; "
        f"n=5: {rep5.total} digraphs, {rep5.two_arc_strong} 2-arc-strong, {len(rep5.non_decomposable)} bad in {t5:.1f}s",
    )


def test_criterion_4_oracle_equivalence(corpus_results):
    rows, elapsed = corpus_results
    wrong = sum(1 for _, _, out, truth in rows if out.decomposable != (truth is not None))
    unverified = sum(1 for _, s, out, _ in rows if out.decomposable and not verify_decomposition(s.graph, out.decomposition))
    sizes = sorted({len(s.v2) for _, s, _, _ in rows})
    v1s = sorted({len(s.v1) for _, s, _, _ in rows})
    exceptions = sum(1 for *_, out, _ in rows if not out.decomposable)
    ok = len(rows) >= 1000 and wrong == 0 and unverified == 0 and elapsed < 300
    ok = ok and all(4 <= k <= 8 for k in sizes) and all(0 <= m <= 6 for m in v1s)
    ok = ok and all(s.graph.num_arcs() <= 22 for _, s, _, _ in rows)
    report(
        4,
        ok,
        f"{len(rows)} instances (|V2| {sizes}, |V1| {v1s}, {exceptions} exceptions), "
        f"{wrong} disagreements, {unverified} unverified, {elapsed:.1f}s",
    )


def test_criterion_5_nice_decompositions():
    t = time.perf_counter()
    rng = random.Random(5)
    checked, bad = 0, 0
    while checked < 600:
        n = rng.randint(4, 9)
        d = MultiDigraph(range(n), random_semicomplete(rng, n, both_prob=rng.choice((0.0, 0.1, 0.25))))
        if not is_strong(d):
            continue
        checked += 1
        if validate_nice(d, nice_decomposition(d)):
            bad += 1
    elapsed = time.perf_counter() - t
    report(5, bad == 0 and elapsed < 30, f"{checked} strong semicomplete digraphs, {bad} invalid, {elapsed:.2f}s")


def _single_arc_witness(g, v2):
    for a in sorted(v2):
        for b in sorted(v2):
            if a != b:
                h, _ = g.with_arcs([(a, b)])
                if brute_force_sad(h, budget=h.num_arcs()) is not None:
                    return (a, b)
    return None


def test_criterion_6_one_arc_repairs():
    t = time.perf_counter()
    targets = [(g, frozenset(range(4))) for _, _, g in catalog()]
    n_catalog = len(targets)
    generated = 0
    seed = 0
    while generated < 60:
        try:
            s = planted_obstruction(seed, 4 + seed % 3, 1 + seed % 3, reverse=seed % 2 == 1)
        except GenerationFailed:
            seed += 1
            continue
        seed += 1
        if brute_force_sad(s.graph) is not None:
            continue
        targets.append((s.graph, s.v2))
        generated += 1
    missing = sum(1 for g, v2 in targets if _single_arc_witness(g, v2) is None)
    elapsed = time.perf_counter() - t
    report(
        6,
        missing == 0 and generated >= 50 and elapsed < 120,
        f"{n_catalog} catalog + {generated} generated non-decomposable instances, {missing} without a one-arc repair, {elapsed:.1f}s",
    )


def test_criterion_7_pipeline_purity(corpus_results):
    rows, _ = corpus_results
    fallbacks = [(cfg, out.route, out.note) for cfg, _, out, _ in rows if out.fallback]
    synthetic = 0
    for _, s, out, _ in rows:
        if out.decomposable and (out.decomposition.a1 | out.decomposition.a2) != set(s.graph.arcs):
            synthetic += 1
    rate = 1 - len(fallbacks) / len(rows)
    for cfg, route, note in fallbacks:
        print(f"  fallback on {route}: seed={cfg.seed} |V1|={cfg.v1_size} |V2|={cfg.v2_size}: {note}")
    report(7, rate >= 0.95 and synthetic == 0, f"{rate:.1%} without fallback ({len(fallbacks)} flagged), {synthetic} synthetic-arc violations")


def test_criterion_8_round_trip_and_determinism():
    rng = random.Random(8)
    mismatches = 0
    for _ in range(10_000):
        n = rng.randint(1, 7)
        arcs = []
        for _ in range(rng.randint(0, 18)):
            t, h = rng.sample(range(1, n + 1), 2) if n > 1 else (None, None)
            if t is not None:
                arcs.append((t, h))
        text = emit_edge_list(MultiDigraph(range(1, n + 1), arcs))
        back = parse_edge_list(text)
        if emit_edge_list(back) != text:
            mismatches += 1
    same = 0
    for seed in range(50):
        cfg = GeneratorConfig(seed % 4, 4 + seed % 3, 0.3, seed)
        if emit_edge_list(generate(cfg)) == emit_edge_list(generate(cfg)):
            same += 1
    report(8, mismatches == 0 and same == 50, f"10000 round trips, {mismatches} mismatches; {same}/50 seeds reproduce")
