"""Seeded random 2-arc-strong split digraphs."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Optional

from .digraph import MultiDigraph, is_k_arc_strong, max_arc_disjoint_paths, reachable
from .errors import GenerationFailed, PreconditionViolated
from .isomorphism import canonical_form
from .search import find_decomposition
from .semicomplete import SplitInstance, certify_split

__all__ = [
    "GeneratorConfig",
    "generate",
    "random_semicomplete",
    "corpus",
    "all_semicomplete",
    "EnumerationReport",
    "enumerate_semicomplete",
    "planted_obstruction",
]


@dataclass(frozen=True)
class GeneratorConfig:
    v1_size: int
    v2_size: int
    crossing_density: float = 0.4
    seed: int = 0
    two_arc_strong: bool = True
    maximal_partition: bool = True
    max_arcs: Optional[int] = None
    attempts: int = 200
    # chance that a V2 pair gets arcs both ways; 0 gives tournaments
    two_cycle_prob: float = 1 / 3

    def __post_init__(self):
        if self.v2_size < 2:
            raise PreconditionViolated("v2_size must be at least 2")
        if self.v1_size < 0:
            raise PreconditionViolated("v1_size must be non-negative")
        if not 0.0 <= self.crossing_density <= 1.0:
            raise PreconditionViolated("crossing_density must lie in [0, 1]")
        if not 0.0 <= self.two_cycle_prob <= 1.0:
            raise PreconditionViolated("two_cycle_prob must lie in [0, 1]")


def random_semicomplete(rng: random.Random, n: int, both_prob: float = 1 / 3) -> list:
    """Arc pairs of a random semicomplete digraph on 0..n-1."""
    arcs = []
    for u in range(n):
        for v in range(u + 1, n):
            r = rng.random()
            if r < both_prob:
                arcs += [(u, v), (v, u)]
            elif r < (1 + both_prob) / 2:
                arcs.append((u, v))
            else:
                arcs.append((v, u))
    return arcs


def _deficient_cut(g: MultiDigraph) -> Optional[tuple]:
    """A vertex set S with at most one arc leaving it, as (S, complement)."""
    vs = sorted(g.vertices)
    s = vs[0]
    rev = None
    for v in vs[1:]:
        for direction in (0, 1):
            if direction == 1:
                rev = rev or g.reverse()
                h = rev
            else:
                h = g
            value, used = max_arc_disjoint_paths(h, [s], [v], limit=2)
            if value >= 2:
                continue
            # residual reachability from s gives the source side of a min cut
            side = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for a in h.out_arcs(x):
                    y = h.head(a)
                    if a not in used and y not in side:
                        side.add(y)
                        stack.append(y)
                for a in h.in_arcs(x):
                    y = h.tail(a)
                    if a in used and y not in side:
                        side.add(y)
                        stack.append(y)
            side = frozenset(side)
            rest = frozenset(g.vertices) - side
            # in the reversed graph the arc leaving `side` enters it in g
            return (side, rest) if direction == 0 else (rest, side)
    return None


def _candidate_arcs(pairs: set, v1: set, v2: set, src, dst) -> tuple:
    """Arcs from src to dst allowed in a simple split digraph, crossing first."""
    crossing, inner = [], []
    for t in sorted(src):
        for h in sorted(dst):
            if t == h or (t, h) in pairs:
                continue
            if t in v1 and h in v1:
                continue
            if t in v2 and h in v2:
                inner.append((t, h))
            else:
                crossing.append((t, h))
    return crossing, inner


def _attempt(cfg: GeneratorConfig, rng: random.Random) -> Optional[SplitInstance]:
    k, m = cfg.v2_size, cfg.v1_size
    v2 = set(range(k))
    v1 = set(range(k, k + m))
    arcs = random_semicomplete(rng, k, cfg.two_cycle_prob)
    banned = {}
    for x in sorted(v1):
        if cfg.maximal_partition:
            banned[x] = rng.randrange(k)
        for v in range(k):
            if banned.get(x) == v:
                continue
            if rng.random() < cfg.crossing_density:
                arcs.append((x, v))
            if rng.random() < cfg.crossing_density:
                arcs.append((v, x))
    pairs = set(arcs)
    n = k + m
    for _ in range(4 * n * n):
        g = MultiDigraph(range(n), arcs)
        cut = _deficient_cut(g) if cfg.two_arc_strong else None
        if cut is None:
            if cfg.two_arc_strong or _strong_enough(g):
                break
            cut = (frozenset({0}), frozenset(range(1, n)))
        side, rest = cut
        crossing, inner = _candidate_arcs(pairs, v1, v2, side, rest)
        crossing = [(t, h) for (t, h) in crossing if banned.get(t) != h and banned.get(h) != t]
        pool = crossing or inner
        if not pool:
            return None
        arc = pool[rng.randrange(len(pool))]
        arcs.append(arc)
        pairs.add(arc)
    else:
        return None
    g = MultiDigraph(range(n), sorted(arcs))
    if cfg.two_arc_strong and not is_k_arc_strong(g, 2):
        return None
    if cfg.max_arcs is not None and g.num_arcs() > cfg.max_arcs:
        return None
    return certify_split(g, v1, v2)


def _strong_enough(g: MultiDigraph) -> bool:
    return len(reachable(g, [0])) == len(g)


def generate(cfg: GeneratorConfig) -> SplitInstance:
    """Deterministic random split instance for ``cfg``.

    Vertices 0..v2_size-1 form V2; arc ids follow the sorted arc list.
    """
    rng = random.Random(cfg.seed)
    for _ in range(cfg.attempts):
        s = _attempt(cfg, rng)
        if s is not None:
            return s
    raise GenerationFailed(f"no instance for {cfg} after {cfg.attempts} attempts")


# sizes reachable under the 22-arc oracle cap: a semicomplete V2 part on k
# vertices already has k(k-1)/2 arcs and every V1 vertex adds at least four
FEASIBLE_SHAPES = [(k, m) for k in range(4, 9) for m in range(0, 7) if k * (k - 1) // 2 + 4 * m <= 22]


def corpus(count: int, seed: int = 0, max_arcs: int = 22) -> list:
    """``count`` seeded instances with |V2| in [4, 8], |V1| in [0, 6], at most ``max_arcs`` arcs."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k, m = FEASIBLE_SHAPES[rng.randrange(len(FEASIBLE_SHAPES))]
        slack = max_arcs - k * (k - 1) // 2 - 4 * m
        cfg = GeneratorConfig(
            two_cycle_prob=rng.choice((0.0, 1 / 6, 1 / 3)) if slack >= 6 else 0.0,
            v1_size=m,
            v2_size=k,
            crossing_density=rng.choice((0.2, 0.35, 0.5)),
            seed=rng.getrandbits(64),
            max_arcs=max_arcs,
            attempts=20,
        )
        try:
            out.append((cfg, generate(cfg)))
        except GenerationFailed:
            continue
    return out


def planted_obstruction(
    seed: int, v2_size: int = 5, v1_size: int = 2, reverse: bool = False, max_arcs: Optional[int] = 22
) -> SplitInstance:
    """A 2-arc-strong split digraph containing a degree-2 local obstruction.

    With V2 = 0..k-1 and u = k in V1: u -> {0, 2}, {0, 1} -> u, vertex 0
    sends arcs only to {1, u} and vertex 1 only to {w, u} for a random w
    in V2 outside {0, 1}.  The remaining arcs are random, and the
    connectivity repair never touches the planted neighbourhoods.
    """
    if v2_size < 4 or v1_size < 1:
        raise PreconditionViolated("planting needs |V2| >= 4 and |V1| >= 1")
    rng = random.Random(seed)
    k, m = v2_size, v1_size
    x1, x2, x3, u = 0, 1, 2, k
    v2 = set(range(k))
    v1 = set(range(k, k + m))
    for _ in range(200):
        w = rng.randrange(2, k)
        arcs = [(x1, x2), (x2, w), (u, x1), (u, x3), (x1, u), (x2, u)]
        for j in range(2, k):
            arcs.append((j, x1))
            if j != w:
                arcs.append((j, x2))
        if rng.random() < 0.5:
            arcs.append((w, x2))
        rest = random_semicomplete(rng, k - 2)
        arcs += [(t + 2, h + 2) for t, h in rest]

        def allowed(t, h):
            if t in (x1, x2) or u in (t, h):
                return False
            return not (t in v1 and h in v1)

        banned = {}
        for y in sorted(v1 - {u}):
            banned[y] = rng.randrange(k)
            for z in range(k):
                if z == banned[y]:
                    continue
                if rng.random() < 0.25 and allowed(y, z):
                    arcs.append((y, z))
                if rng.random() < 0.25 and allowed(z, y):
                    arcs.append((z, y))
        pairs = set(arcs)
        n = k + m
        ok = False
        for _ in range(4 * n * n):
            g = MultiDigraph(range(n), arcs)
            cut = _deficient_cut(g)
            if cut is None:
                ok = True
                break
            side, other = cut
            crossing, inner = _candidate_arcs(pairs, v1, v2, side, other)
            pool = [
                (t, h)
                for (t, h) in crossing + inner
                if allowed(t, h) and banned.get(t) != h and banned.get(h) != t
            ]
            if not pool:
                break
            arc = pool[rng.randrange(len(pool))]
            arcs.append(arc)
            pairs.add(arc)
        if not ok or (max_arcs is not None and len(arcs) > max_arcs):
            continue
        g = MultiDigraph(range(n), sorted(arcs))
        s = certify_split(g, v1, v2)
        return s.reverse() if reverse else s
    raise GenerationFailed(f"could not plant the obstruction for seed {seed}")


def all_semicomplete(n: int):
    """Every semicomplete digraph on 0..n-1 (each pair: forward, backward or both)."""
    pairs = list(combinations(range(n), 2))
    for choice in product((0, 1, 2), repeat=len(pairs)):
        arcs = []
        for (u, v), c in zip(pairs, choice):
            if c != 1:
                arcs.append((u, v))
            if c != 0:
                arcs.append((v, u))
        yield MultiDigraph(range(n), arcs)


@dataclass
class EnumerationReport:
    n: int
    total: int = 0
    two_arc_strong: int = 0
    non_decomposable: list = field(default_factory=list)

    @property
    def classes(self) -> list:
        """Non-decomposable graphs up to isomorphism, one representative each."""
        seen = {}
        for g in self.non_decomposable:
            seen.setdefault(canonical_form(g), g)
        return list(seen.values())


def enumerate_semicomplete(n: int) -> EnumerationReport:
    """Decide every 2-arc-strong semicomplete digraph on n labelled vertices."""
    rep = EnumerationReport(n)
    for g in all_semicomplete(n):
        rep.total += 1
        if not is_k_arc_strong(g, 2):
            continue
        rep.two_arc_strong += 1
        if find_decomposition(g) is None:
            rep.non_decomposable.append(g)
    return rep
