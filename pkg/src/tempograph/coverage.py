"""Coverage-aware segmentation: cover functions, frequency tracking and kGCvr.

The objective adds ``lam * cover`` to the summed densities, where
``cover = sum_v w(x_v)`` and ``x_v`` counts the selected subgraphs holding
``v``. ``w`` must be non-negative, non-decreasing and concave on the
integers with ``w(0) == 0``.
"""
from __future__ import annotations

import math
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .incremental import IncrementalDensest
from .segmentation import (
    Segmentation,
    _approx_dp,
    _check_k,
    _episodes,
    _IncTracker,
    _pieces,
)
from .static_densest import NodeWeights, static_greedy_generalized
from .temporal_graph import Interval, StaticGraph, TemporalGraph, edge_stream, induced_static

__all__ = [
    "WEIGHTS",
    "CountMinSketch",
    "CoverReport",
    "CoverState",
    "check_weight",
    "cm_query",
    "cm_update",
    "cover_report",
    "cover_value",
    "gain_interval",
    "indicator",
    "jaccard",
    "kgcvr_segment",
    "marginal_gain_chi",
    "sqrt_weight",
]


def indicator(x: int) -> float:
    return 1.0 if x > 0 else 0.0


def sqrt_weight(x: int) -> float:
    return math.sqrt(x)


WEIGHTS: dict[str, Callable[[int], float]] = {"indicator": indicator, "sqrt": sqrt_weight}


def check_weight(w: Callable[[int], float], upto: int = 64) -> None:
    """Raise ValueError unless ``w`` is zero at 0, non-decreasing and concave up to ``upto``."""
    vals = [w(x) for x in range(upto + 1)]
    if vals[0] != 0:
        raise ValueError("w(0) must be 0")
    for x in range(1, upto + 1):
        if vals[x] < vals[x - 1]:
            raise ValueError(f"w decreases at {x}")
        if x >= 2 and vals[x] - vals[x - 1] > vals[x - 1] - vals[x - 2] + 1e-12:
            raise ValueError(f"w is not concave at {x}")


def _resolve(w: str | Callable[[int], float]) -> tuple[str, Callable[[int], float]]:
    if callable(w):
        return getattr(w, "__name__", "custom"), w
    try:
        return w, WEIGHTS[w]
    except KeyError:
        raise ValueError(f"unknown cover function {w!r}; expected one of {sorted(WEIGHTS)}") from None


_MERSENNE = (1 << 61) - 1


class CountMinSketch:
    """Count-min sketch with ``(a x + b) mod p mod width`` row hashes.

    Estimates never undercount; with probability ``1 - delta`` over the hash
    draw an estimate exceeds the truth by at most ``eps * total``.
    """

    def __init__(self, eps: float = 0.01, delta: float = 0.01, seed: int | None = None,
                 width: int | None = None, depth: int | None = None):
        if eps <= 0 or not 0 < delta < 1:
            raise ValueError("need eps > 0 and 0 < delta < 1")
        self.eps, self.delta, self.seed = eps, delta, seed
        self.width = width or math.ceil(math.e / eps)
        self.depth = depth or math.ceil(math.log(1.0 / delta))
        rng = np.random.default_rng(seed)
        self.a = [int(x) for x in rng.integers(1, _MERSENNE, size=self.depth)]
        self.b = [int(x) for x in rng.integers(0, _MERSENNE, size=self.depth)]
        self.table = [[0] * self.width for _ in range(self.depth)]
        self.total = 0
        self._memo: dict[int, tuple[int, ...]] = {}  # hashed columns per key

    def _cols(self, v: int) -> tuple[int, ...]:
        cols = self._memo.get(v)
        if cols is None:
            cols = self._memo[v] = tuple(
                ((a * v + b) % _MERSENNE) % self.width for a, b in zip(self.a, self.b))
        return cols

    def update(self, v: int, count: int = 1) -> None:
        for row, col in zip(self.table, self._cols(v)):
            row[col] += count
        self.total += count

    def query(self, v: int) -> int:
        return min(row[col] for row, col in zip(self.table, self._cols(v)))

    def copy(self) -> CountMinSketch:
        out = object.__new__(CountMinSketch)
        out.__dict__.update(self.__dict__)
        out.table = [row[:] for row in self.table]
        out._memo = dict(self._memo)
        return out


def cm_update(s: CountMinSketch, v: int) -> None:
    s.update(v)


def cm_query(s: CountMinSketch, v: int) -> int:
    return s.query(v)


@dataclass
class CoverState:
    """Selection frequencies ``x_v`` (exact counts, or a count-min sketch).

    In sketch mode only the set of ever-selected nodes is stored exactly (for
    reporting the cover); counts come from the sketch.
    """

    w: Callable[[int], float] = indicator
    lam: float = 0.0
    sketch: CountMinSketch | None = None
    counts: dict[int, int] = field(default_factory=dict)
    seen: set[int] = field(default_factory=set)

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be >= 0")

    def add(self, nodes: Iterable[int]) -> None:
        for v in nodes:
            self.seen.add(v)
            if self.sketch is None:
                self.counts[v] = self.counts.get(v, 0) + 1
            else:
                self.sketch.update(v)

    def count(self, v: int) -> int:
        if self.sketch is not None:
            return self.sketch.query(v)
        return self.counts.get(v, 0)

    def gain(self, v: int) -> float:
        x = self.count(v)
        return self.w(x + 1) - self.w(x)

    def weights(self) -> NodeWeights:
        return NodeWeights(self.gain, self.lam)


def cover_value(state: CoverState) -> float:
    """``sum_v w(x_v)`` over the nodes selected at least once."""
    return sum(state.w(state.count(v)) for v in state.seen)


def marginal_gain_chi(h: StaticGraph, state: CoverState) -> float:
    """Density of ``h`` plus ``lam`` times the summed node gains w.r.t. ``state``."""
    if h.n == 0:
        return 0.0
    return h.density() + state.lam * sum(state.gain(v) for v in h.nodes)


def gain_interval(
    g: TemporalGraph, iv: Interval, state: CoverState, eps_ds: float = 0.1, method: str = "incremental"
) -> tuple[float, frozenset[int]]:
    """Approximate ``max chi`` over subgraphs of the interval's induced graph.

    ``method="incremental"`` streams the interval's edges through the
    weighted level-set structure (as inside the DP); ``"static"`` runs
    generalized peeling once on the induced graph.
    """
    if iv.empty:
        return 0.0, frozenset()
    if method == "static":
        res = static_greedy_generalized(induced_static(g, iv), state.weights())
        return res.value, res.nodes
    if method != "incremental":
        raise ValueError(f"unknown method {method!r}")
    inc = IncrementalDensest(eps_ds, state.weights())
    for e in edge_stream(g, iv):
        if not e.duplicate:
            inc.insert(e.u, e.v)
    return inc.density, inc.nodes


def jaccard(a: frozenset, b: frozenset) -> float:
    union = a | b
    return len(a & b) / len(union) if union else 1.0


@dataclass
class CoverReport:
    node_sets: list[list[int]]
    cover: float
    covered_nodes: int
    mean_size: float
    mean_density: float
    mean_jaccard: float
    jaccard_matrix: list[list[float]]


def cover_report(seg: Segmentation, w: str | Callable[[int], float] = "indicator") -> CoverReport:
    _, wf = _resolve(w)
    sets = [ep.nodes for ep in seg.episodes]
    state = CoverState(wf)
    for s in sets:
        state.add(s)
    k = len(sets)
    mat = [[jaccard(sets[i], sets[j]) for j in range(k)] for i in range(k)]
    pairs = [mat[i][j] for i, j in combinations(range(k), 2)]
    return CoverReport(
        node_sets=[seg.node_labels(ep) for ep in seg.episodes],
        cover=cover_value(state),
        covered_nodes=len(state.seen),
        mean_size=sum(len(s) for s in sets) / k if k else 0.0,
        mean_density=seg.total_density / k if k else 0.0,
        mean_jaccard=sum(pairs) / len(pairs) if pairs else 0.0,
        jaccard_matrix=mat,
    )


class _Chain:
    """Node sets chosen along a DP path (persistent linked list)."""

    __slots__ = ("nodes", "parent")

    def __init__(self, nodes: frozenset[int], parent: _Chain | None):
        self.nodes = nodes
        self.parent = parent

    def sets(self) -> list[frozenset[int]]:
        out = []
        c: _Chain | None = self
        while c is not None:
            out.append(c.nodes)
            c = c.parent
        return out


def kgcvr_segment(
    g: TemporalGraph,
    k: int,
    lam: float,
    w: str | Callable[[int], float] = "indicator",
    eps_dp: float = 0.1,
    eps_ds: float = 0.1,
    sketch: tuple[float, float] | None = None,
    seed: int | None = 0,
) -> tuple[Segmentation, CoverReport]:
    """Greedy coverage-aware DP: density plus ``lam`` times the cover gain per interval.

    Every candidate start ``a`` of row ``l`` scores ``[a, i]`` by the marginal
    gain w.r.t. the subgraphs already picked on the best path to ``(l-1, a-1)``.
    ``sketch=(eps_cm, delta_cm)`` tracks those frequencies with a count-min
    sketch instead of exact counts. No approximation guarantee.
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if eps_dp <= 0 or eps_ds <= 0:
        raise ValueError("eps_dp and eps_ds must be positive")
    w_name, wf = _resolve(w)
    check_weight(wf)
    _check_k(g, k)

    def state_for(chain: _Chain | None) -> CoverState:
        cm = CountMinSketch(*sketch, seed=seed) if sketch else None
        st = CoverState(wf, lam, cm)
        if chain is not None:
            for s in chain.sets():
                st.add(s)
        return st

    def spawn(ell, a, chain):
        if lam == 0:
            return (a, None), lambda: _IncTracker(eps_ds)
        return (a, chain), lambda: _IncTracker(eps_ds, state_for(chain).weights())

    t0 = time.perf_counter()
    run = _approx_dp(g, k, eps_dp, spawn, extend=lambda parent, nodes: _Chain(nodes, parent))
    t1 = time.perf_counter()
    eps = _episodes(g, _pieces(run, k, g.r), k)
    final = CoverState(wf)
    for ep in eps:
        final.add(ep.nodes)
    total = sum(ep.density for ep in eps) + lam * cover_value(final)
    params = {"k": k, "lam": lam, "w": w_name, "eps_dp": eps_dp, "eps_ds": eps_ds}
    if sketch:
        params["sketch"] = {"eps_cm": sketch[0], "delta_cm": sketch[1], "seed": seed}
    seg = Segmentation(
        episodes=eps,
        total_profit=total,
        k=k,
        mode="kgcvr",
        params=params,
        labels=g.labels,
        table_profit=run.s[k][g.r],
        max_candidates=run.max_candidates,
        timings={"dp": t1 - t0, "reconstruct": time.perf_counter() - t1},
        profit_table=run.s,
    )
    return seg, cover_report(seg, wf)
