"""Temporal graph data model, timestamp compression and interval-induced graphs.

Timestamps are compressed to the contiguous index range ``1..r`` (one index per
distinct raw timestamp); raw values are kept only for reporting.
"""
from __future__ import annotations

import io
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

__all__ = [
    "EdgeListError",
    "Interval",
    "StaticGraph",
    "StreamEdge",
    "TemporalGraph",
    "edge_stream",
    "induced_static",
    "parse_edge_list",
]

_SPLIT = re.compile(r"[,\s]+")


class EdgeListError(ValueError):
    """Malformed edge-list input. ``line`` is 1-based, or None for whole-input errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Interval(NamedTuple):
    """Closed range of timestamp indices; ``hi < lo`` is the empty interval."""

    lo: int
    hi: int

    @property
    def empty(self) -> bool:
        return self.hi < self.lo

    def __len__(self) -> int:
        return max(0, self.hi - self.lo + 1)


class StaticGraph:
    """Simple undirected graph; node set is exactly the set of edge endpoints
    unless extra nodes are passed explicitly."""

    __slots__ = ("adj", "_m")

    def __init__(self, edges: Iterable[tuple[int, int]] = (), nodes: Iterable[int] = ()):
        adj: dict[int, set[int]] = {v: set() for v in nodes}
        m = 0
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            nu = adj.setdefault(u, set())
            if v in nu:
                continue
            nu.add(v)
            adj.setdefault(v, set()).add(u)
            m += 1
        self.adj = adj
        self._m = m

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(self.adj)

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return self._m

    def add_edge(self, u: int, v: int) -> bool:
        """Add ``(u, v)``; False when the pair is already present."""
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        nu = self.adj.setdefault(u, set())
        if v in nu:
            return False
        nu.add(v)
        self.adj.setdefault(v, set()).add(u)
        self._m += 1
        return True

    def copy(self) -> StaticGraph:
        g = StaticGraph()
        g.adj = {v: set(nb) for v, nb in self.adj.items()}
        g._m = self._m
        return g

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of ``(u, v)`` pairs with ``u < v``."""
        return sorted((u, v) for u, nb in self.adj.items() for v in nb if u < v)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def subgraph(self, nodes: Iterable[int]) -> StaticGraph:
        keep = set(nodes)
        g = StaticGraph()
        g.adj = {v: self.adj[v] & keep for v in keep if v in self.adj}
        g._m = sum(len(nb) for nb in g.adj.values()) // 2
        return g

    def edge_count(self, nodes: Iterable[int]) -> int:
        """Number of edges induced by ``nodes``."""
        keep = set(nodes)
        return sum(len(self.adj[v] & keep) for v in keep if v in self.adj) // 2

    def density(self, nodes: Iterable[int] | None = None) -> float:
        if nodes is None:
            return self._m / len(self.adj) if self.adj else 0.0
        keep = set(nodes)
        return self.edge_count(keep) / len(keep) if keep else 0.0

    def relabel(self, mapping: dict[int, int]) -> StaticGraph:
        return StaticGraph(
            ((mapping[u], mapping[v]) for u, v in self.edges()),
            nodes=(mapping[v] for v in self.adj),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StaticGraph) and self.adj == other.adj

    def __repr__(self) -> str:
        return f"StaticGraph(n={self.n}, m={self.m})"


class StreamEdge(NamedTuple):
    u: int
    v: int
    t: int
    duplicate: bool


@dataclass(frozen=True)
class TemporalGraph:
    """Immutable temporal graph over dense node ids ``0..n-1``.

    ``edges`` holds ``(u, v, t)`` triples sorted by timestamp index ``t`` (1-based);
    ``raw_times[t - 1]`` is the original timestamp of index ``t`` and
    ``labels[i]`` the original label of node ``i``.
    """

    edges: tuple[tuple[int, int, int], ...]
    raw_times: tuple[int, ...]
    labels: tuple[int, ...]
    _offsets: tuple[int, ...] = field(repr=False, compare=False, default=())

    def __post_init__(self):
        offsets = [0] * (len(self.raw_times) + 2)
        prev = 0
        for i, (u, v, t) in enumerate(self.edges):
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if t < prev:
                raise ValueError("edges must be sorted by timestamp index")
            prev = t
            offsets[t + 1] = i + 1
        for t in range(1, len(offsets)):
            if offsets[t] < offsets[t - 1]:
                offsets[t] = offsets[t - 1]
        object.__setattr__(self, "_offsets", tuple(offsets))

    @classmethod
    def from_edges(cls, triples: Iterable[tuple[int, int, int]]) -> TemporalGraph:
        """Build from raw ``(u, v, t)`` triples: labels and timestamps are compressed."""
        triples = list(triples)
        if not triples:
            raise EdgeListError("empty input")
        labels = sorted({x for u, v, _ in triples for x in (u, v)})
        times = sorted({t for _, _, t in triples})
        node_id = {lab: i for i, lab in enumerate(labels)}
        time_id = {t: i + 1 for i, t in enumerate(times)}
        edges = sorted(
            ((node_id[u], node_id[v], time_id[t]) for u, v, t in triples),
            key=lambda e: e[2],
        )
        return cls(tuple(edges), tuple(times), tuple(labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def r(self) -> int:
        return len(self.raw_times)

    def at(self, t: int) -> Sequence[tuple[int, int, int]]:
        """Temporal edges carrying timestamp index ``t``."""
        return self.edges[self._offsets[t]:self._offsets[t + 1]]

    def span(self, iv: Interval) -> Sequence[tuple[int, int, int]]:
        lo, hi = max(iv.lo, 1), min(iv.hi, self.r)
        if hi < lo:
            return ()
        return self.edges[self._offsets[lo]:self._offsets[hi + 1]]

    def raw(self, t: int) -> int:
        return self.raw_times[t - 1]

    def to_edge_list(self) -> str:
        return "".join(
            f"{self.labels[u]} {self.labels[v]} {self.raw_times[t - 1]}\n"
            for u, v, t in self.edges
        )


def parse_edge_list(text: str | bytes | io.IOBase) -> TemporalGraph:
    """Parse ``u v t`` lines (whitespace or comma separated, ``#`` comments)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    elif not isinstance(text, str):
        text = text.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    triples = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p for p in _SPLIT.split(line) if p]
        if len(parts) != 3:
            raise EdgeListError(f"expected 3 fields, got {len(parts)}", lineno)
        try:
            u, v, t = (int(p) for p in parts)
        except ValueError:
            raise EdgeListError(f"non-integer token in {line!r}", lineno) from None
        if u == v:
            raise EdgeListError(f"self-loop on node {u}", lineno)
        triples.append((u, v, t))
    if not triples:
        raise EdgeListError("empty input")
    return TemporalGraph.from_edges(triples)


def induced_static(g: TemporalGraph, iv: Interval) -> StaticGraph:
    """Static graph of the deduplicated pairs active somewhere in ``iv``."""
    return StaticGraph((u, v) for u, v, _ in g.span(iv))


def edge_stream(g: TemporalGraph, iv: Interval) -> Iterator[StreamEdge]:
    """Temporal edges of ``iv`` in time order, repeats of a static pair flagged."""
    seen: set[tuple[int, int]] = set()
    for u, v, t in g.span(iv):
        key = (u, v) if u < v else (v, u)
        dup = key in seen
        seen.add(key)
        yield StreamEdge(u, v, t, dup)
