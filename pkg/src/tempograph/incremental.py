"""Insert-only approximate densest subgraph via nested level sets.

A node's *level* is the number of peeling rounds it survives at threshold
``2 (1 + eps) beta``: level ``L`` means ``v in S_0, ..., S_L`` but not
``S_{L+1}``. A consistent state satisfies, for every node at level ``L``,
``deg_a(v | H_L) < 2 (1 + eps) beta`` and ``S_K`` is empty where
``K = ceil(log_{1+eps} |V|)``. Edge insertions only raise generalized degrees,
so they are repaired by promoting nodes; a promotion that would reach ``K``
forces a rebuild at a higher ``beta``.

Node weights (``NodeWeights``) make the generalized degree
``deg(v|H) + 2 lam |V(H)| delta_v`` depend on the candidate size, so a
promotion into ``S_{t+1..t'}`` can also invalidate weighted nodes settled on
those levels; they are re-queued along with the neighbours.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .static_densest import DensestResult, NodeWeights
from .temporal_graph import StaticGraph

__all__ = [
    "IncrementalDensest",
    "LevelSets",
    "MonotoneBest",
    "find",
    "find_densest",
    "level_count",
    "update_stream",
]


def level_count(n: int, eps: float) -> int:
    """``K = ceil(log_{1+eps}(n))`` (0 for graphs with fewer than two nodes)."""
    if n <= 1:
        return 0
    return math.ceil(math.log(n) / math.log1p(eps) - 1e-12)


@dataclass(frozen=True)
class LevelSets:
    level: dict[int, int]
    beta: float
    eps: float
    k: int

    def sets(self) -> list[frozenset[int]]:
        """``[S_0, S_1, ..., S_k]``."""
        return [frozenset(v for v, lv in self.level.items() if lv >= t) for t in range(self.k + 1)]


@dataclass(frozen=True)
class MonotoneBest:
    score: float = 0.0
    density: float = 0.0
    nodes: frozenset[int] = frozenset()


def _score(adj, nodes, delta, lam) -> tuple[float, float]:
    if not nodes:
        return 0.0, 0.0
    e = sum(len(adj[v] & nodes) for v in nodes) // 2
    d = e / len(nodes)
    if lam == 0:
        return d, d
    return d + lam * sum(delta(v) for v in nodes), d


def _peel(adj, beta, eps, delta, lam):
    """One ``Find`` pass on an adjacency dict; returns (best set, best score, level map)."""
    alive = set(adj)
    n = len(alive)
    k = level_count(n, eps)
    thr = 2.0 * (1.0 + eps) * beta
    deg = {v: len(nb) for v, nb in adj.items()}
    dl = {v: delta(v) for v in alive} if lam else None
    e = sum(deg.values()) // 2
    dsum = sum(dl.values()) if lam else 0.0
    level = dict.fromkeys(alive, 0)
    best = frozenset(alive)
    best_score = (e / n + lam * dsum) if n else 0.0
    t = 0
    while alive and t <= k:
        size = len(alive)
        if lam:
            gone = [v for v in alive if deg[v] + 2.0 * lam * size * dl[v] < thr]
        else:
            gone = [v for v in alive if deg[v] < thr]
        if not gone:
            for v in alive:
                level[v] = k
            break
        alive.difference_update(gone)
        for v in gone:
            for u in adj[v]:
                if u in alive:
                    deg[u] -= 1
                    e -= 1
            if lam:
                dsum -= dl[v]
        # edges with both ends in `gone`
        gone_set = set(gone)
        e -= sum(len(adj[v] & gone_set) for v in gone) // 2
        t += 1
        for v in alive:
            level[v] = t
        if alive:
            s = e / len(alive) + lam * dsum
            if s > best_score:
                best_score, best = s, frozenset(alive)
    return best, best_score, level, k


def _as_adj(h: StaticGraph) -> dict[int, set[int]]:
    return {v: set(nb) for v, nb in h.adj.items()}


def _weights(weights: NodeWeights | None):
    if weights is None or weights.lam == 0:
        return (lambda v: 0.0), 0.0
    return weights, weights.lam


def _result(adj, nodes, delta, lam) -> DensestResult:
    score, d = _score(adj, nodes, delta, lam)
    return DensestResult(frozenset(nodes), d, score=score)


def find(
    h: StaticGraph, beta: float, eps: float, weights: NodeWeights | None = None
) -> DensestResult:
    """Threshold peeling at ``2 (1 + eps) beta``; best intermediate layer by ``dens_a``.

    If ``beta <= OPT / (2 (1 + eps))`` the result scores at least ``beta``;
    if ``beta > OPT`` it scores strictly below ``beta``.
    """
    if beta <= 0 or eps <= 0:
        raise ValueError("beta and eps must be positive")
    delta, lam = _weights(weights)
    adj = _as_adj(h)
    best, _, _, _ = _peel(adj, beta, eps, delta, lam)
    return _result(adj, best, delta, lam)


def _find_densest(adj, rho, eps, delta, lam):
    beta = max(1.0 / (4.0 * (1.0 + eps)), (1.0 + eps) * rho)
    best: frozenset[int] = frozenset()
    while True:
        cand, score, level, k = _peel(adj, beta, eps, delta, lam)
        if cand and score >= beta:
            best = cand
            beta = (1.0 + eps) * score
        else:
            return beta, best, LevelSets(level, beta, eps, k)


def find_densest(
    h: StaticGraph, rho: float, eps: float, weights: NodeWeights | None = None
) -> tuple[float, DensestResult, LevelSets]:
    """Geometric search for ``beta``; the returned subgraph is within ``2 (1 + eps)^2``.

    Returns the final (failing) ``beta``, the best subgraph found and the
    level sets of the last ``find`` pass, which are consistent for that ``beta``.
    """
    if rho < 0 or eps <= 0:
        raise ValueError("rho must be >= 0 and eps > 0")
    delta, lam = _weights(weights)
    adj = _as_adj(h)
    beta, best, levels = _find_densest(adj, rho, eps, delta, lam)
    return beta, _result(adj, best, delta, lam), levels


class IncrementalDensest:
    """Level-set structure maintained under edge insertions.

    ``insert`` applies one edge, rebuilds when needed, and updates the
    monotone best-so-far answer exposed as ``best`` / ``density``.
    """

    def __init__(self, eps: float, weights: NodeWeights | None = None):
        if eps <= 0:
            raise ValueError("eps must be positive")
        self.eps = eps
        self.weights = weights
        self._delta_fn, self.lam = _weights(weights)
        self.adj: dict[int, set[int]] = {}
        self.level: dict[int, int] = {}
        self.up: dict[int, int] = {}  # neighbours with level >= own level
        self.delta: dict[int, float] = {}
        self.beta = 1.0 / (4.0 * (1.0 + eps))
        self.k = 0
        self.members: list[set[int]] = [set()]
        self.size = [0]  # |S_t|
        self.ecount = [0]  # edges by min endpoint level
        self.dsum = [0.0]  # delta sum of nodes settled at each level
        self.m = 0
        self.best = MonotoneBest()
        self.rebuilds = 0
        self.last_enqueued = 0

    # -- queries -----------------------------------------------------------
    @property
    def density(self) -> float:
        """Best-so-far ``dens_a`` (plain density when unweighted)."""
        return self.best.score

    @property
    def nodes(self) -> frozenset[int]:
        return self.best.nodes

    @property
    def threshold(self) -> float:
        return 2.0 * (1.0 + self.eps) * self.beta

    def graph(self) -> StaticGraph:
        g = StaticGraph()
        g.adj = {v: set(nb) for v, nb in self.adj.items()}
        g._m = self.m
        return g

    def level_sets(self) -> LevelSets:
        return LevelSets(dict(self.level), self.beta, self.eps, self.k)

    def gen_degree(self, v: int, t: int) -> float:
        """``deg_a(v | H_t)`` under the current levels (``v`` counted in ``S_t``)."""
        d = sum(1 for u in self.adj[v] if self.level[u] >= t)
        if not self.lam:
            return d
        size = self.size[t] + (0 if self.level[v] >= t else 1)
        return d + 2.0 * self.lam * size * self.delta[v]

    def audit(self) -> list[int]:
        """Nodes violating their settled-level threshold (empty when consistent)."""
        thr = self.threshold
        bad = [v for v, lv in self.level.items() if lv >= self.k or self.gen_degree(v, lv) >= thr]
        return sorted(bad)

    # -- level bookkeeping -------------------------------------------------
    def _grow(self, k: int) -> None:
        while len(self.size) <= k:
            self.members.append(set())
            self.size.append(0)
            self.ecount.append(0)
            self.dsum.append(0.0)

    def _new_node(self, x: int) -> None:
        self.adj[x] = set()
        self.level[x] = 0
        self.up[x] = 0
        d = self._delta_fn(x) if self.lam else 0.0
        if d < 0:
            raise ValueError(f"negative node gain {d} for node {x}")
        self.delta[x] = d
        self.members[0].add(x)
        self.size[0] += 1
        self.dsum[0] += d
        self.k = level_count(len(self.adj), self.eps)
        self._grow(self.k)

    def _promote(self, v: int, t: int, t2: int) -> list[int]:
        """Move ``v`` from level ``t`` to ``t2``; returns neighbours whose upper degree grew."""
        level, up, ecount, size = self.level, self.up, self.ecount, self.size
        self.members[t].discard(v)
        self.members[t2].add(v)
        for j in range(t + 1, t2 + 1):
            size[j] += 1
        dv = self.delta[v]
        self.dsum[t] -= dv
        self.dsum[t2] += dv
        cnt = 0
        raised = []
        for u in self.adj[v]:
            lu = level[u]
            if lu > t:
                ecount[t] -= 1
                if lu <= t2:
                    ecount[lu] += 1
                    up[u] += 1
                    raised.append(u)
                    if lu == t2:
                        cnt += 1
                else:
                    ecount[t2] += 1
                    cnt += 1
        level[v] = t2
        up[v] = cnt
        return raised

    def _target_level(self, v: int, t: int) -> int | None:
        """Smallest level above ``t`` where ``v`` would settle, or None (needs rebuild)."""
        thr = self.threshold
        hist = [0] * (self.k + 1)
        for u in self.adj[v]:
            hist[min(self.level[u], self.k)] += 1
        ge = sum(hist[t + 1:])
        dv = 2.0 * self.lam * self.delta[v]
        for t2 in range(t + 1, self.k):
            if ge + dv * (self.size[t2] + 1) < thr:
                return t2
            ge -= hist[t2]
        return None

    # -- updates -----------------------------------------------------------
    def add_edge(self, u: int, v: int) -> bool:
        """Insert ``(u, v)`` and repair levels; True means a rebuild is required.

        A duplicate edge is a no-op returning False. When the state is flagged
        for rebuild the caller must call ``rebuild`` before further inserts.
        """
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        if u in self.adj and v in self.adj[u]:
            self.last_enqueued = 0
            return False
        new_node = False
        for x in (u, v):
            if x not in self.adj:
                self._new_node(x)
                new_node = True
        adj, level, up = self.adj, self.level, self.up
        adj[u].add(v)
        adj[v].add(u)
        self.m += 1
        lu, lv = level[u], level[v]
        self.ecount[min(lu, lv)] += 1
        if lv >= lu:
            up[u] += 1
        if lu >= lv:
            up[v] += 1

        if not self.lam:
            return self._repair_plain(u, v)
        stack = [u, v]
        if new_node:
            stack = sorted(adj)  # every weighted deg_a shifts with |V|
        pending = set(stack)
        self.last_enqueued = len(stack)
        thr = self.threshold
        lam, size, delta = self.lam, self.size, self.delta
        while stack:
            s = stack.pop()
            pending.discard(s)
            t = level[s]
            if up[s] + 2.0 * lam * size[t] * delta[s] < thr:
                continue
            t2 = self._target_level(s, t)
            if t2 is None:
                return True
            self._promote(s, t, t2)
            touched = list(adj[s])
            for j in range(t + 1, t2 + 1):
                touched.extend(x for x in self.members[j] if delta[x] > 0)
            for x in touched:
                if x not in pending:
                    pending.add(x)
                    stack.append(x)
                    self.last_enqueued += 1
        return False

    def _repair_plain(self, u: int, v: int) -> bool:
        # Unweighted repair: a node settles just above the (c+1)-th highest
        # neighbour level (c = largest degree below the threshold), and a
        # promotion only affects neighbours settled on the levels it crosses.
        adj, level, up, k = self.adj, self.level, self.up, self.k
        thr = self.threshold
        c = math.ceil(thr) - 1
        stack = [x for x in (u, v) if up[x] >= thr]
        pending = set(stack)
        self.last_enqueued = 2
        while stack:
            s = stack.pop()
            pending.discard(s)
            if up[s] < thr:
                continue
            t = level[s]
            nb = adj[s]
            t2 = t + 1
            if c < len(nb):
                t2 = max(t2, sorted([level[x] for x in nb], reverse=True)[c] + 1)
            if t2 >= k:
                return True
            for x in self._promote(s, t, t2):
                if up[x] >= thr and x not in pending:
                    pending.add(x)
                    stack.append(x)
                    self.last_enqueued += 1
        return False

    def rebuild(self) -> None:
        """Recompute levels with ``find_densest`` started from the current ``beta``."""
        self.rebuilds += 1
        delta = self.delta.__getitem__
        beta, best, levels = _find_densest(self.adj, self.beta, self.eps, delta, self.lam)
        while any(lv >= levels.k for lv in levels.level.values()) and levels.k > 0:
            beta, best2, levels = _find_densest(self.adj, beta, self.eps, delta, self.lam)
            best = best2 or best
        self._load(levels)
        self._offer(best)

    def _load(self, levels: LevelSets) -> None:
        self.beta = levels.beta
        self.k = level_count(len(self.adj), self.eps)
        n_lv = self.k + 1
        self.members = [set() for _ in range(n_lv)]
        self.size = [0] * n_lv
        self.ecount = [0] * n_lv
        self.dsum = [0.0] * n_lv
        self.level = dict(levels.level)
        for v, lv in self.level.items():
            self.members[lv].add(v)
            self.dsum[lv] += self.delta[v]
        for t in range(n_lv):
            self.size[t] = sum(len(self.members[j]) for j in range(t, n_lv))
        for v, nb in self.adj.items():
            lv = self.level[v]
            self.up[v] = sum(1 for u in nb if self.level[u] >= lv)
            for u in nb:
                if u > v:
                    self.ecount[min(lv, self.level[u])] += 1

    def _offer(self, nodes: frozenset[int]) -> None:
        if not nodes:
            return
        score, d = _score(self.adj, nodes, self.delta.__getitem__, self.lam)
        if score > self.best.score:
            self.best = MonotoneBest(score, d, frozenset(nodes))

    def _best_level(self) -> None:
        e = n = 0
        ds = 0.0
        best_t, best_s = -1, -1.0
        for t in range(len(self.size) - 1, -1, -1):
            e += self.ecount[t]
            n += len(self.members[t])
            ds += self.dsum[t]
            if n:
                s = e / n + self.lam * ds
                if s >= best_s:
                    best_t, best_s = t, s
        if best_t >= 0 and best_s > self.best.score + 1e-12:
            self._offer(frozenset(v for v, lv in self.level.items() if lv >= best_t))

    def insert(self, u: int, v: int) -> MonotoneBest:
        """Insert an edge, rebuilding if needed; returns the best-so-far answer."""
        if self.add_edge(u, v):
            self.rebuild()
        self._best_level()
        return self.best

    def extend(self, edges: Iterable[tuple[int, int]]) -> MonotoneBest:
        """Insert a batch; the best level is inspected once, after the batch."""
        for u, v in edges:
            if self.add_edge(u, v):
                self.rebuild()
        self._best_level()
        return self.best


def update_stream(
    edges: Iterable[tuple[int, int]], eps: float, weights: NodeWeights | None = None
) -> Iterator[MonotoneBest]:
    """Feed an edge stream; yield the monotone best answer after each insertion."""
    inc = IncrementalDensest(eps, weights)
    for u, v in edges:
        yield inc.insert(u, v)
