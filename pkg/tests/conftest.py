import itertools
import math
import random

import numpy as np

import pytest

from tempograph.temporal_graph import StaticGraph, TemporalGraph


def random_static(rng: random.Random, n: int, p: float) -> StaticGraph:
    return StaticGraph(
        ((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p),
        nodes=range(n),
    )


def random_temporal(rng: random.Random, n: int, r: int, per_step: int = 3) -> TemporalGraph:
    """Every one of the ``r`` timestamps carries 1..per_step random edges over ``n`` nodes."""
    triples = []
    for t in range(1, r + 1):
        for _ in range(rng.randint(1, per_step)):
            u, v = rng.sample(range(n), 2)
            triples.append((u, v, t))
    return TemporalGraph.from_edges(triples)


def two_burst() -> TemporalGraph:
    """Triangle on timestamps 1-2, K4 on timestamps 5-6."""
    tri = [(1, 2, 1), (2, 3, 1), (1, 3, 2)]
    k4 = [(10, 11, 5), (10, 12, 5), (10, 13, 5), (11, 12, 6), (11, 13, 6), (12, 13, 6)]
    return TemporalGraph.from_edges(tri + k4)


TWO_BURST_TEXT = "".join(f"{u} {v} {t}\n" for u, v, t in [
    (1, 2, 1), (2, 3, 1), (1, 3, 2),
    (10, 11, 5), (10, 12, 5), (10, 13, 5), (11, 12, 6), (11, 13, 6), (12, 13, 6),
])


def brute_profit_st(h, k, lam, w):
    """Best ``profit_static`` over all k-multisets of non-empty node subsets.

    Loops over the first ``k - 2`` picks and broadcasts over the last two.
    """
    nodes = sorted(h.nodes)
    n = len(nodes)
    masks = np.arange(1, 1 << n)
    bits = (masks[:, None] >> np.arange(n)) & 1
    sizes = bits.sum(1)
    ecount = np.zeros(len(masks))
    for u, v in h.edges():
        ecount += bits[:, nodes.index(u)] & bits[:, nodes.index(v)]
    dens = ecount / sizes
    wv = np.array([w(x) for x in range(k + 1)])
    if k == 1:
        return float((dens + lam * wv[bits].sum(1)).max())
    best = -math.inf
    for combo in itertools.combinations_with_replacement(range(len(masks)), k - 2):
        base = bits[list(combo)].sum(0) if combo else np.zeros(n, dtype=int)
        counts = base + bits[:, None, :] + bits[None, :, :]
        tot = dens[list(combo)].sum() + dens[:, None] + dens[None, :] + lam * wv[counts].sum(2)
        best = max(best, float(tot.max()))
    return best


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
