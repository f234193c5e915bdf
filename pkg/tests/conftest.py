import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sadkit.catalog import S4_ARCS
from sadkit.digraph import MultiDigraph
from sadkit.errors import GenerationFailed
from sadkit.generate import GeneratorConfig, generate

settings.register_profile(
    "sadkit", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("sadkit")


@st.composite
def digraphs(draw, min_n=1, max_n=6, max_arcs=16):
    n = draw(st.integers(min_n, max_n))
    pairs = [(t, h) for t in range(n) for h in range(n) if t != h]
    if not pairs:
        return MultiDigraph(range(n), [])
    arcs = draw(st.lists(st.sampled_from(pairs), max_size=max_arcs))
    return MultiDigraph(range(n), arcs)


@st.composite
def split_instances(draw, v2=(4, 6), v1=(0, 3), max_arcs=22):
    seed = draw(st.integers(0, 2**32))
    k = draw(st.integers(*v2))
    m = draw(st.integers(*v1))
    density = draw(st.sampled_from((0.2, 0.35, 0.5)))
    try:
        return generate(GeneratorConfig(m, k, density, seed, max_arcs=max_arcs, attempts=30))
    except GenerationFailed:
        from hypothesis import assume

        assume(False)


def seeded_instances(count, seed, v2=(4, 6), v1=(0, 3), max_arcs=22):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        cfg = GeneratorConfig(
            rng.randint(*v1), rng.randint(*v2), rng.choice((0.2, 0.35, 0.5)), rng.getrandbits(48), max_arcs=max_arcs,
            attempts=20,
        )
        try:
            out.append(generate(cfg))
        except GenerationFailed:
            continue
    return out


@pytest.fixture
def s4():
    return MultiDigraph(range(4), S4_ARCS)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
