import itertools
import math

import pytest

from conftest import random_static
from tempograph.incremental import (
    IncrementalDensest,
    find,
    find_densest,
    level_count,
    update_stream,
)
from tempograph.static_densest import NodeWeights, brute_force_generalized, exact_densest
from tempograph.temporal_graph import StaticGraph

TRIANGLE = StaticGraph([(0, 1), (1, 2), (0, 2)])
K4 = list(itertools.combinations(range(4), 2))


def test_find_bounds():
    assert find(TRIANGLE, 0.4, 0.1).density >= 0.4
    assert find(TRIANGLE, 1.5, 0.1).density < 1.5
    assert find(StaticGraph(), 0.3, 0.1).density == 0.0


def test_find_densest_examples():
    _, res, _ = find_densest(TRIANGLE, 0.0, 0.1)
    assert res.density >= 1.0 / (2 * 1.1 ** 2)
    _, res, _ = find_densest(StaticGraph([(0, 1)]), 0.0, 0.1)
    assert res.density == 0.5
    beta, res, _ = find_densest(StaticGraph(), 0.0, 0.1)
    assert beta == pytest.approx(1 / (4 * 1.1)) and not res.nodes


def test_find_densest_levels_are_consistent(rng):
    for _ in range(100):
        h = random_static(rng, rng.randint(2, 12), rng.random())
        eps = rng.choice([0.1, 0.5, 1.0])
        beta, res, levels = find_densest(h, 0.0, eps)
        assert res.density * 2 * (1 + eps) ** 2 >= exact_densest(h).density - 1e-9
        thr = 2 * (1 + eps) * beta
        for v, lv in levels.level.items():
            deg = sum(1 for u in h.adj[v] if levels.level[u] >= lv)
            assert deg < thr or lv >= levels.k


def test_stream_examples():
    inc = IncrementalDensest(0.1)
    inc.extend(K4)
    assert inc.density >= 1.5 / 2.2
    assert list(update_stream([(0, 1)], 0.1))[-1].score == 0.5


def test_rebuild_then_consistent():
    inc = IncrementalDensest(0.5)
    flags = []
    for u, v in [(0, 1), (1, 2), (0, 2)]:
        flag = inc.add_edge(u, v)
        flags.append(flag)
        if flag:
            inc.rebuild()
        assert not inc.audit()
    assert inc.rebuilds == sum(flags)


def test_edge_between_settled_nodes_is_quiet():
    inc = IncrementalDensest(0.5)
    inc.extend([(0, 1), (2, 3)])
    levels = dict(inc.level)
    assert inc.add_edge(0, 2) is False
    assert inc.level == levels or not inc.audit()


def test_new_node_enqueues_everything_when_weighted():
    inc = IncrementalDensest(0.5, NodeWeights({v: 0.1 for v in range(10)}, 0.5))
    inc.extend([(0, 1), (1, 2)])
    inc.add_edge(2, 3)
    assert inc.last_enqueued >= 4


@pytest.mark.parametrize("weighted", [False, True])
def test_random_streams(rng, weighted):
    for _ in range(120):
        n = rng.randint(2, 12)
        eps = rng.choice([0.1, 0.5, 1.0])
        w = NodeWeights({v: rng.random() for v in range(n)}, rng.choice([0.05, 0.5])) if weighted else None
        pairs = list(itertools.combinations(range(n), 2))
        rng.shuffle(pairs)
        inc = IncrementalDensest(eps, w)
        seen, prev = [], 0.0
        for u, v in pairs[: rng.randint(1, 40)]:
            seen.append((u, v))
            best = inc.insert(u, v)
            h = StaticGraph(seen)
            opt = brute_force_generalized(h, w).score if w else exact_densest(h).density
            assert best.score >= prev - 1e-12
            assert opt / best.score <= 2 * (1 + eps) + 1e-9
            assert best.score <= opt + 1e-9
            assert not inc.audit()
            prev = best.score


def test_rebuild_count_is_logarithmic(rng):
    for _ in range(60):
        n = rng.randint(3, 15)
        eps = rng.choice([0.1, 0.5, 1.0])
        pairs = list(itertools.combinations(range(n), 2))
        rng.shuffle(pairs)
        inc = IncrementalDensest(eps)
        inc.extend(pairs[:40])
        opt = exact_densest(inc.graph()).density
        # beta starts at 1/(4(1+eps)) and every rebuild raises it by at least (1+eps)
        bound = 2 + math.ceil(math.log(4 * (1 + eps) ** 3 * opt) / math.log1p(eps))
        assert inc.rebuilds <= bound


def test_level_count():
    assert level_count(1, 0.1) == 0
    assert level_count(2, 1.0) == 1
    assert level_count(100, 0.1) == math.ceil(math.log(100) / math.log(1.1))
