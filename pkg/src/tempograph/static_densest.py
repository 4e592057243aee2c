"""Densest-subgraph solvers on static graphs.

Covers the plain density objective ``|E(H)| / |V(H)|`` (exact via max-flow,
Charikar peeling, brute force) and the generalized objective

    dens_a(H) = |E(H)| / |V(H)| + lam * sum(delta[v] for v in H)

obtained from the generalized degree ``deg(v|H) + 2 * lam * |V(H)| * delta[v]``.
"""
from __future__ import annotations

import heapq
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .temporal_graph import StaticGraph

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "DensestResult",
    "NodeWeights",
    "brute_force_densest",
    "brute_force_generalized",
    "charikar_peel",
    "dens_a",
    "exact_densest",
    "greedy_k_static",
    "profit_static",
    "static_greedy_generalized",
]

BRUTE_FORCE_LIMIT = 20
_INT32_MAX = 2**31 - 1


@dataclass(frozen=True)
class DensestResult:
    nodes: frozenset[int]
    density: float
    exact: bool = False
    score: float | None = None  # dens_a when node weights are in play
    order: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def value(self) -> float:
        return self.density if self.score is None else self.score


_EMPTY = DensestResult(frozenset(), 0.0, exact=True)


@dataclass(frozen=True)
class NodeWeights:
    """Per-node additive terms of the generalized degree.

    ``delta`` maps a node to its marginal gain (a mapping or a callable;
    missing keys of a mapping count as 0). The effective generalized-degree
    term for node ``v`` in a candidate ``H`` is ``2 * lam * |V(H)| * delta[v]``.
    """

    delta: Mapping[int, float] | Callable[[int], float]
    lam: float = 1.0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")

    def __call__(self, v: int) -> float:
        d = self.delta(v) if callable(self.delta) else self.delta.get(v, 0.0)
        if d < 0:
            raise ValueError(f"negative node gain {d} for node {v}")
        return d

    def term(self, v: int, size: int) -> float:
        return 2.0 * self.lam * size * self(v)


def dens_a(h: StaticGraph, nodes: Iterable[int], weights: NodeWeights | None = None) -> float:
    """Half the average generalized degree of the subgraph induced by ``nodes``."""
    nodes = set(nodes)
    if not nodes:
        return 0.0
    d = h.edge_count(nodes) / len(nodes)
    if weights is None or weights.lam == 0:
        return d
    return d + weights.lam * sum(weights(v) for v in nodes)


def _subset_tables(h: StaticGraph, max_nodes: int):
    nodes = sorted(h.nodes)
    n = len(nodes)
    if n > max_nodes:
        raise ValueError(f"brute force refused: {n} nodes > limit {max_nodes}")
    idx = {v: i for i, v in enumerate(nodes)}
    masks = np.arange(1, 1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    sizes = bits.sum(axis=1)
    ecount = np.zeros(len(masks), dtype=np.int64)
    for u, v in h.edges():
        ecount += bits[:, idx[u]] & bits[:, idx[v]]
    return nodes, masks, bits, sizes, ecount


def _lex_smallest(nodes, bits, rows) -> frozenset[int]:
    best = min(tuple(nodes[j] for j in np.flatnonzero(bits[r])) for r in rows)
    return frozenset(best)


def brute_force_densest(h: StaticGraph, limit: int = BRUTE_FORCE_LIMIT) -> DensestResult:
    """Exhaustive maximum density; ties go to the lexicographically smallest node tuple."""
    if h.n == 0:
        return _EMPTY
    nodes, _, bits, sizes, ecount = _subset_tables(h, limit)
    dens = ecount / sizes
    b = int(np.argmax(dens))
    e_b, s_b = int(ecount[b]), int(sizes[b])
    rows = np.flatnonzero(ecount * s_b == e_b * sizes)
    return DensestResult(_lex_smallest(nodes, bits, rows), e_b / s_b, exact=True)


def brute_force_generalized(
    h: StaticGraph, weights: NodeWeights, limit: int = BRUTE_FORCE_LIMIT
) -> DensestResult:
    """Exhaustive maximum of ``dens_a`` over all non-empty node subsets."""
    if h.n == 0:
        return _EMPTY
    nodes, _, bits, sizes, ecount = _subset_tables(h, limit)
    delta = np.array([weights(v) for v in nodes], dtype=float)
    score = ecount / sizes + weights.lam * (bits @ delta)
    best = score.max()
    rows = np.flatnonzero(score >= best - 1e-12)
    chosen = _lex_smallest(nodes, bits, rows)
    return DensestResult(chosen, h.density(chosen), exact=True, score=dens_a(h, chosen, weights))


def _min_cut_side(h: StaticGraph, order: list[int], p: int, q: int) -> list[int]:
    """Source side of a minimum cut for the test ``max_S q|E(S)| - p|S| > 0``."""
    n = len(order)
    m = h.m
    idx = {v: i for i, v in enumerate(order)}
    src, snk = n, n + 1
    big = q * m
    if big + 2 * p > _INT32_MAX:
        raise OverflowError("graph too large for int32 max-flow capacities")
    rows, cols, caps = [], [], []
    for v in order:
        i = idx[v]
        rows += [src, i]
        cols += [i, snk]
        caps += [big, big + 2 * p - q * len(h.adj[v])]
    for u, v in h.edges():
        rows += [idx[u], idx[v]]
        cols += [idx[v], idx[u]]
        caps += [q, q]
    cap = csr_matrix(
        (np.array(caps, dtype=np.int32), (np.array(rows), np.array(cols))), shape=(n + 2, n + 2)
    )
    flow = maximum_flow(cap, src, snk, method="dinic").flow
    residual = (cap - flow).tocsr()
    residual.data[residual.data < 0] = 0
    residual.eliminate_zeros()
    reach = breadth_first_order(residual, src, directed=True, return_predecessors=False)
    return [order[i] for i in reach if i < n]


def exact_densest(h: StaticGraph) -> DensestResult:
    """Exact densest subgraph by parametric min-cut (Dinkelbach iteration).

    Starting from the whole graph's density ``p/q``, each round solves
    ``max_S q|E(S)| - p|S|`` with one integral max-flow and moves to the
    density of the maximizer; the ratio strictly increases and stops at the
    optimum. Ties: the whole graph wins when it is already optimal, otherwise
    the minimal source side of the last improving cut.
    """
    if h.n == 0 or h.m == 0:
        return _EMPTY if h.n == 0 else DensestResult(frozenset([min(h.nodes)]), 0.0, exact=True)
    order = sorted(h.nodes)
    best = frozenset(order)
    p, q = h.m, h.n
    while True:
        side = _min_cut_side(h, order, p, q)
        if not side:
            break
        e = h.edge_count(side)
        if q * e - p * len(side) <= 0:
            break
        best = frozenset(side)
        g = math.gcd(e, len(side))
        p, q = e // g, len(side) // g
    return DensestResult(best, h.edge_count(best) / len(best), exact=True)


def charikar_peel(h: StaticGraph) -> DensestResult:
    """Greedy peeling (min degree first, smallest id on ties); 2-approximation."""
    if h.n == 0:
        return _EMPTY
    deg = {v: len(nb) for v, nb in h.adj.items()}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    alive = set(deg)
    e, n = h.m, h.n
    best_e, best_n, best_k = e, n, 0
    order: list[int] = []
    while heap:
        d, v = heapq.heappop(heap)
        if v not in alive or d != deg[v]:
            continue
        alive.remove(v)
        order.append(v)
        e -= d
        n -= 1
        for u in h.adj[v]:
            if u in alive:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
        if n and e * best_n > best_e * n:
            best_e, best_n, best_k = e, n, len(order)
    nodes = frozenset(h.nodes) - frozenset(order[:best_k])
    return DensestResult(nodes, best_e / best_n, order=tuple(order))


def static_greedy_generalized(h: StaticGraph, weights: NodeWeights | None = None) -> DensestResult:
    """Peel the node of minimum generalized degree, keep the best layer by ``dens_a``.

    Ties between layers go to the later, smaller one. Every generalized degree
    is recomputed each round because the node term scales with the current
    node count; Theta(|V|^2) overall.
    """
    if weights is None or weights.lam == 0:
        res = charikar_peel(h)
        return DensestResult(res.nodes, res.density, score=res.density, order=res.order)
    if h.n == 0:
        return DensestResult(frozenset(), 0.0, score=0.0)
    nodes = sorted(h.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    deg = np.array([len(h.adj[v]) for v in nodes], dtype=float)
    delta = np.array([weights(v) for v in nodes], dtype=float)
    lam = weights.lam
    alive = np.ones(n, dtype=bool)
    e, size, dsum = h.m, n, float(delta.sum())
    best_score, best_k = e / size + lam * dsum, 0
    order: list[int] = []
    while size:
        dega = np.where(alive, deg + 2.0 * lam * size * delta, np.inf)
        i = int(np.argmin(dega))
        v = nodes[i]
        alive[i] = False
        order.append(v)
        e -= int(deg[i])
        dsum -= delta[i]
        size -= 1
        for u in h.adj[v]:
            j = idx[u]
            if alive[j]:
                deg[j] -= 1
        if size:
            score = e / size + lam * dsum
            if score >= best_score - 1e-12:  # ties go to the smaller layer
                best_score, best_k = score, len(order)
    chosen = frozenset(nodes) - frozenset(order[:best_k])
    return DensestResult(
        chosen, h.density(chosen), score=dens_a(h, chosen, weights), order=tuple(order)
    )


def profit_static(
    h: StaticGraph, selection: Iterable[Iterable[int]], lam: float, w: Callable[[int], float]
) -> float:
    """``sum of densities + lam * cover`` for a collection of node sets of ``h``."""
    counts: dict[int, int] = {}
    total = 0.0
    for s in selection:
        s = set(s)
        total += h.density(s)
        for v in s:
            counts[v] = counts.get(v, 0) + 1
    return total + lam * sum(w(x) for x in counts.values())


def greedy_k_static(
    h: StaticGraph,
    k: int,
    lam: float,
    w: Callable[[int], float],
    inner: str = "greedy",
) -> list[DensestResult]:
    """Greedily pick ``k`` subgraphs, each maximizing density plus weighted cover gain.

    ``inner`` selects the per-round maximizer: ``"greedy"`` (peeling,
    1/2-approximate) or ``"exact"`` (exhaustive, small graphs only).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    solve = {"greedy": static_greedy_generalized, "exact": brute_force_generalized}[inner]
    counts: dict[int, int] = {}
    picked = []
    for _ in range(k):
        gains = {v: w(counts.get(v, 0) + 1) - w(counts.get(v, 0)) for v in h.nodes}
        res = solve(h, NodeWeights(gains, lam))
        picked.append(res)
        for v in res.nodes:
            counts[v] = counts.get(v, 0) + 1
    return picked
