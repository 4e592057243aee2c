"""k-segmentation of the timeline maximizing the summed densest-subgraph density.

Solvers, by mode name:

* ``optimal``  -- exact DP over all split points, exact densest subgraph per interval
* ``kgoptdp``  -- exact DP, incremental approximate densest subgraph (suffix scan)
* ``kgoptds``  -- approximate DP with candidate sparsification, exact densest subgraph
* ``kgapprox`` -- approximate DP with one incremental structure per live candidate
"""
from __future__ import annotations

import itertools
import math
import time
from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .incremental import IncrementalDensest
from .static_densest import brute_force_densest, charikar_peel, exact_densest
from .temporal_graph import Interval, StaticGraph, TemporalGraph, induced_static

__all__ = [
    "MODES",
    "Candidate",
    "Episode",
    "InfeasibleError",
    "Segmentation",
    "approx_dp_segment",
    "brute_force_segment",
    "candidate_cap",
    "exact_dp_segment",
    "post_process",
    "segment",
    "sprs",
]

MODES = ("optimal", "kgapprox", "kgoptdp", "kgoptds")


class InfeasibleError(ValueError):
    """Requested segmentation cannot exist (e.g. more intervals than timestamps)."""


@dataclass(frozen=True)
class Episode:
    lo: int
    hi: int
    start: int  # raw timestamp of lo
    end: int  # raw timestamp of hi
    nodes: frozenset[int]
    density: float

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)


@dataclass
class Segmentation:
    episodes: list[Episode]
    total_profit: float
    k: int
    mode: str
    params: dict = field(default_factory=dict)
    labels: tuple[int, ...] = ()
    table_profit: float | None = None  # DP value s[r, k] before reconstruction
    max_candidates: int = 0
    timings: dict[str, float] = field(default_factory=dict)
    profit_table: list[list[float]] | None = field(default=None, repr=False)

    def node_labels(self, ep: Episode) -> list[int]:
        if not self.labels:
            return sorted(ep.nodes)
        return sorted(self.labels[v] for v in ep.nodes)

    @property
    def total_density(self) -> float:
        return sum(ep.density for ep in self.episodes)


def candidate_cap(k: int, eps: float) -> int:
    """Upper bound on the sparsified candidate list length."""
    return 2 + math.ceil(k * (1 + eps) / eps)


def _check_k(g: TemporalGraph, k: int) -> None:
    if k < 1:
        raise InfeasibleError(f"k must be >= 1, got {k}")
    if k > g.r:
        raise InfeasibleError(f"k={k} exceeds the number of distinct timestamps r={g.r}")


def _pairs(g: TemporalGraph, t: int) -> list[tuple[int, int]]:
    return [(u, v) for u, v, _ in g.at(t)]


# -- reconstruction -------------------------------------------------------


def _split_part(g: TemporalGraph, lo: int, hi: int, nodes: frozenset[int]) -> tuple[frozenset, float]:
    part = induced_static(g, Interval(lo, hi))
    keep = frozenset(v for v in nodes if v in part.adj and part.adj[v] & nodes)
    d_keep = part.density(keep)
    peel = charikar_peel(part)
    if peel.density > d_keep:
        return peel.nodes, peel.density
    return keep, d_keep


def _episodes(g: TemporalGraph, pieces: list[tuple[int, int, frozenset[int]]], k: int) -> list[Episode]:
    """Turn concrete DP choices into exactly ``k`` episodes covering ``1..r``.

    Gaps left by carried cells are absorbed by extending interval ends; when
    fewer than ``k`` concrete intervals exist, the first splittable interval is
    cut after its first timestamp and each side keeps the better of the old
    subgraph restricted to it and a fresh peel (never lowers the total).
    """
    pieces = sorted(pieces)
    spans = []
    for j, (a, _, nodes) in enumerate(pieces):
        lo = 1 if j == 0 else a
        hi = pieces[j + 1][0] - 1 if j + 1 < len(pieces) else g.r
        spans.append([lo, hi, nodes])
    while len(spans) < k:
        j = next(j for j, (lo, hi, _) in enumerate(spans) if hi > lo)
        lo, hi, nodes = spans[j]
        left, _ = _split_part(g, lo, lo, nodes)
        right, _ = _split_part(g, lo + 1, hi, nodes)
        spans[j:j + 1] = [[lo, lo, left], [lo + 1, hi, right]]
    out = []
    for lo, hi, nodes in spans:
        h = induced_static(g, Interval(lo, hi))
        nodes = frozenset(nodes)
        out.append(Episode(lo, hi, g.raw(lo), g.raw(hi), nodes, h.density(nodes) if nodes else 0.0))
    return out


def _make_segmentation(g, pieces, k, mode, params, **extra) -> Segmentation:
    eps = _episodes(g, pieces, k)
    return Segmentation(
        episodes=eps,
        total_profit=sum(e.density for e in eps),
        k=k,
        mode=mode,
        params=params,
        labels=g.labels,
        **extra,
    )


# -- oracle ---------------------------------------------------------------


def brute_force_segment(g: TemporalGraph, k: int) -> Segmentation:
    """Enumerate every boundary vector with exhaustive densest subgraphs (tiny inputs)."""
    if g.r > 20 or k > 5 or g.n > 12:
        raise ValueError(f"brute force refused: r={g.r}, k={k}, n={g.n} (limits 20, 5, 12)")
    _check_k(g, k)
    cache: dict[tuple[int, int], tuple[Fraction, frozenset]] = {}

    def best(lo: int, hi: int):
        if (lo, hi) not in cache:
            h = induced_static(g, Interval(lo, hi))
            res = brute_force_densest(h)
            cache[lo, hi] = (Fraction(h.edge_count(res.nodes), max(len(res.nodes), 1)), res.nodes)
        return cache[lo, hi]

    top, top_bounds = Fraction(-1), None
    for bounds in itertools.combinations(range(1, g.r), k - 1):
        cuts = (0, *bounds, g.r)
        total = sum((best(cuts[j] + 1, cuts[j + 1])[0] for j in range(k)), Fraction(0))
        if total > top:
            top, top_bounds = total, cuts
    pieces = [
        (top_bounds[j] + 1, top_bounds[j + 1], best(top_bounds[j] + 1, top_bounds[j + 1])[1])
        for j in range(k)
    ]
    return _make_segmentation(g, pieces, k, "bruteforce", {"k": k}, table_profit=float(top))


# -- exact DP -------------------------------------------------------------


def _interval_table(g: TemporalGraph, densest: str, eps_ds: float):
    """``table[j][i] = (density, nodes)`` for every interval ``[j, i]``."""
    r = g.r
    table: list[list] = [[None] * (r + 1) for _ in range(r + 2)]
    if densest == "exact":
        for j in range(1, r + 1):
            h = StaticGraph()
            for i in range(j, r + 1):
                changed = False
                for u, v in _pairs(g, i):
                    changed |= h.add_edge(u, v)
                if changed or table[j][i - 1] is None:
                    res = exact_densest(h)
                    table[j][i] = (res.density, res.nodes)
                else:
                    table[j][i] = table[j][i - 1]
    elif densest in ("incremental", "approx"):
        for i in range(1, r + 1):
            inc = IncrementalDensest(eps_ds)
            for j in range(i, 0, -1):
                for u, v in _pairs(g, j):
                    inc.insert(u, v)
                table[j][i] = (inc.density, inc.nodes)
    else:
        raise ValueError(f"unknown densest routine {densest!r}")
    return table


def exact_dp_segment(
    g: TemporalGraph, k: int, densest: str = "exact", eps_ds: float = 0.1
) -> Segmentation:
    """Full DP ``o[i, l] = max_j o[j, l-1] + d*([j+1, i])`` with exactly ``l`` intervals.

    ``densest="exact"`` is the Optimal baseline; ``"incremental"`` scans the
    start point downward from ``i`` with one insert-only structure per ``i``.
    """
    _check_k(g, k)
    r = g.r
    t0 = time.perf_counter()
    table = _interval_table(g, densest, eps_ds)
    t1 = time.perf_counter()
    neg = float("-inf")
    o = [[neg] * (r + 1) for _ in range(k + 1)]
    back = [[0] * (r + 1) for _ in range(k + 1)]
    o[0][0] = 0.0
    for ell in range(1, k + 1):
        for i in range(ell, r + 1):
            best, arg = neg, 0
            for j in range(ell, i + 1):  # start of the last interval
                prev = o[ell - 1][j - 1]
                if prev == neg:
                    continue
                val = prev + table[j][i][0]
                if val > best:
                    best, arg = val, j
            o[ell][i], back[ell][i] = best, arg
    pieces = []
    i = r
    for ell in range(k, 0, -1):
        j = back[ell][i]
        pieces.append((j, i, table[j][i][1]))
        i = j - 1
    t2 = time.perf_counter()
    mode = "optimal" if densest == "exact" else "kgoptdp"
    params = {"k": k, "densest": densest}
    if densest != "exact":
        params["eps_ds"] = eps_ds
    return _make_segmentation(
        g, pieces, k, mode, params,
        table_profit=o[k][r],
        timings={"densest": t1 - t0, "dp": t2 - t1},
        profit_table=[row[:] for row in o],
    )


# -- approximate DP -------------------------------------------------------


@dataclass
class Candidate:
    """Start point ``start`` of a last interval with cached ``base = s[start-1, l-1]``."""

    start: int
    base: float
    key: Hashable = None


def sprs(A: Sequence[Candidate], sigma: float, ell: int, eps: float, k: int) -> list[Candidate]:
    """Sparsify candidates: drop ``a_{j+1}`` while ``base(a_{j+2}) - base(a_j) <= delta``.

    ``delta = sigma * eps / (k + ell * eps)``; the first and last candidates always survive.
    """
    delta = sigma * eps / (k + ell * eps)
    out = list(A)
    j = 0
    while j < len(out) - 2:
        if out[j + 2].base - out[j].base <= delta:
            del out[j + 1]
        else:
            j += 1
    return out


class _IncTracker:
    __slots__ = ("inc",)

    def __init__(self, eps: float, weights=None):
        self.inc = IncrementalDensest(eps, weights)

    def feed(self, edges):
        self.inc.extend(edges)

    @property
    def score(self) -> float:
        return self.inc.density

    @property
    def nodes(self) -> frozenset[int]:
        return self.inc.nodes


class _ExactTracker:
    __slots__ = ("h", "res", "memo", "start", "i")

    def __init__(self, start: int, memo: dict):
        self.h = StaticGraph()
        self.res = exact_densest(self.h)
        self.memo = memo
        self.start = start
        self.i = start - 1

    def feed(self, edges):
        self.i += 1
        changed = False
        for u, v in edges:
            changed |= self.h.add_edge(u, v)
        key = (self.start, self.i)
        if key in self.memo:
            self.res = self.memo[key]
        else:
            if changed:
                self.res = exact_densest(self.h)
            self.memo[key] = self.res

    @property
    def score(self) -> float:
        return self.res.density

    @property
    def nodes(self) -> frozenset[int]:
        return self.res.nodes


@dataclass
class _Run:
    s: list[list[float]]
    choice: list[list[tuple]]
    ctx: list[list[object]]
    max_candidates: int
    violations: int


def _approx_dp(
    g: TemporalGraph,
    k: int,
    eps_dp: float,
    spawn: Callable[[int, int, object], tuple[Hashable, Callable[[], object]]],
    extend: Callable[[object, frozenset[int]], object] | None = None,
    on_sprs: Callable[[int, int, list[Candidate]], None] | None = None,
) -> _Run:
    """Approximate DP driver shared by kGapprox, kGoptDS and kGCvr.

    ``spawn(l, a, ctx)`` returns ``(key, factory)`` for the tracker scoring the
    interval ``[a, i]`` given the context of cell ``(l-1, a-1)``; trackers with
    equal keys are shared between rows and freed once no row references them.
    ``extend(ctx, nodes)`` derives a cell context from a concrete choice.
    Loops run ``i`` outermost, which yields the same table as row-by-row order.
    """
    r = g.r
    cap = candidate_cap(k, eps_dp)
    s = [[0.0] * (r + 1) for _ in range(k + 1)]
    choice: list[list[tuple]] = [[("none",)] * (r + 1) for _ in range(k + 1)]
    ctx: list[list[object]] = [[None] * (r + 1) for _ in range(k + 1)]
    pool: dict[Hashable, list] = {}
    rows: list[list[Candidate]] = [[] for _ in range(k + 1)]
    max_len = 0
    violations = 0

    def acquire(ell: int, a: int, base: float) -> Candidate:
        key, factory = spawn(ell, a, ctx[ell - 1][a - 1])
        slot = pool.get(key)
        if slot is None:
            pool[key] = [factory(), 1]
        else:
            slot[1] += 1
        return Candidate(a, base, key)

    def release(c: Candidate) -> None:
        slot = pool[c.key]
        slot[1] -= 1
        if slot[1] == 0:
            del pool[c.key]

    for i in range(1, r + 1):
        if i == 1:
            rows[1].append(acquire(1, 1, 0.0))
        for ell in range(2, k + 1):
            rows[ell].append(acquire(ell, i, s[ell - 1][i - 1]))
        edges = _pairs(g, i)
        for slot in pool.values():
            slot[0].feed(edges)
        for ell in range(1, k + 1):
            best, best_c = float("-inf"), None
            for c in rows[ell]:
                val = c.base + pool[c.key][0].score
                if val > best:
                    best, best_c = val, c
            if ell == 1:
                s[1][i] = best
                tr = pool[best_c.key][0]
                choice[1][i] = ("c", 1, tr.nodes, tr.score)
                ctx[1][i] = extend(None, tr.nodes) if extend else None
                continue
            carry_i, carry_l = s[ell][i - 1], s[ell - 1][i]
            if best >= carry_i and best >= carry_l:
                tr = pool[best_c.key][0]
                s[ell][i] = best
                choice[ell][i] = ("c", best_c.start, tr.nodes, tr.score)
                if extend:
                    ctx[ell][i] = extend(ctx[ell - 1][best_c.start - 1], tr.nodes)
            elif carry_i >= carry_l:
                s[ell][i] = carry_i
                choice[ell][i] = ("i",)
                ctx[ell][i] = ctx[ell][i - 1]
            else:
                s[ell][i] = carry_l
                choice[ell][i] = ("l",)
                ctx[ell][i] = ctx[ell - 1][i]
            kept = sprs(rows[ell], s[ell][i], ell, eps_dp, k)
            survivors = {id(c) for c in kept}
            for c in rows[ell]:
                if id(c) not in survivors:
                    release(c)
            rows[ell] = kept
            max_len = max(max_len, len(kept))
            if len(kept) > cap:
                violations += 1
            if on_sprs is not None:
                on_sprs(ell, i, kept)
    return _Run(s, choice, ctx, max_len, violations)


def _pieces(run: _Run, k: int, r: int) -> list[tuple[int, int, frozenset[int]]]:
    pieces = []
    ell, i = k, r
    while ell >= 1 and i >= 1:
        ch = run.choice[ell][i]
        if ch[0] == "c":
            pieces.append((ch[1], i, ch[2]))
            i = ch[1] - 1
            ell -= 1
        elif ch[0] == "i":
            i -= 1
        else:
            ell -= 1
    return pieces


def approx_dp_segment(
    g: TemporalGraph,
    k: int,
    eps_dp: float,
    densest: str = "incremental",
    eps_ds: float = 0.1,
    on_sprs: Callable[[int, int, list[Candidate]], None] | None = None,
) -> Segmentation:
    """Approximate DP keeping a sparsified candidate list per row.

    With an exact densest routine (kGoptDS) the table satisfies
    ``s[i, l] (1 + l eps_dp / k) >= o[i, l]``; with the incremental structure
    (kGapprox) the total is within ``2 (1 + eps_ds)(1 + eps_dp)`` of optimal.
    """
    if eps_dp <= 0:
        raise ValueError("eps_dp must be positive")
    _check_k(g, k)
    t0 = time.perf_counter()
    if densest == "exact":
        memo: dict = {}

        def spawn(ell, a, _ctx):
            return a, lambda: _ExactTracker(a, memo)
    elif densest in ("incremental", "approx"):
        if eps_ds <= 0:
            raise ValueError("eps_ds must be positive")

        def spawn(ell, a, _ctx):
            return a, lambda: _IncTracker(eps_ds)
    else:
        raise ValueError(f"unknown densest routine {densest!r}")
    run = _approx_dp(g, k, eps_dp, spawn, on_sprs=on_sprs)
    t1 = time.perf_counter()
    mode = "kgoptds" if densest == "exact" else "kgapprox"
    params = {"k": k, "eps_dp": eps_dp, "densest": densest}
    if densest != "exact":
        params["eps_ds"] = eps_ds
    seg = _make_segmentation(
        g, _pieces(run, k, g.r), k, mode, params,
        table_profit=run.s[k][g.r],
        max_candidates=run.max_candidates,
        profit_table=run.s,
    )
    seg.timings = {"dp": t1 - t0, "reconstruct": time.perf_counter() - t1}
    return seg


def post_process(g: TemporalGraph, seg: Segmentation) -> Segmentation:
    """Replace every episode's subgraph by the exact densest subgraph of its interval."""
    t0 = time.perf_counter()
    eps = []
    for ep in seg.episodes:
        res = exact_densest(induced_static(g, ep.interval))
        if res.density >= ep.density:
            eps.append(replace(ep, nodes=res.nodes, density=res.density))
        else:  # cannot happen with an exact solver; keeps totals monotone under float noise
            eps.append(ep)
    out = replace(
        seg,
        episodes=eps,
        total_profit=sum(e.density for e in eps),
        params={**seg.params, "post_process": True},
        timings={**seg.timings, "post_process": time.perf_counter() - t0},
    )
    return out


def segment(
    g: TemporalGraph,
    k: int,
    mode: str = "kgapprox",
    eps_dp: float = 0.1,
    eps_ds: float = 0.1,
    post: bool = False,
) -> Segmentation:
    """Dispatch on solver mode name (see module docstring)."""
    if mode == "optimal":
        seg = exact_dp_segment(g, k, "exact")
    elif mode == "kgoptdp":
        seg = exact_dp_segment(g, k, "incremental", eps_ds)
    elif mode == "kgoptds":
        seg = approx_dp_segment(g, k, eps_dp, "exact")
    elif mode == "kgapprox":
        seg = approx_dp_segment(g, k, eps_dp, "incremental", eps_ds)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return post_process(g, seg) if post else seg
