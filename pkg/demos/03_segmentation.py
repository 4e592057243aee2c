"""
Splitting a timeline into dense episodes
========================================

Two communities form slowly in a quiet stream: each pair inside a community
connects once, at a random moment of its active window. An episode has to span
most of a window to see the full community, so both the exact dynamic program
and the sparsified approximate one place one episode on each window.
"""
import random

from tempograph import TemporalGraph, segment

rng = random.Random(11)
triples = [(*rng.sample(range(40), 2), t) for t in range(1, 61)]  # background
for members, (lo, hi) in ((range(8), (10, 19)), (range(20, 27), (40, 49))):
    triples += [(u, v, rng.randint(lo, hi)) for u in members for v in members if u < v]
g = TemporalGraph.from_edges(triples)
print(f"{g.n} nodes, {g.m} temporal edges, {g.r} timestamps")

for mode in ("optimal", "kgapprox"):
    seg = segment(g, k=2, mode=mode, eps_dp=0.1, eps_ds=0.1)
    print(f"\n{mode}: total density {seg.total_profit:.3f}")
    for ep in seg.episodes:
        print(f"  [{ep.start:2d}, {ep.end:2d}]  density {ep.density:.3f}  nodes {seg.node_labels(ep)}")
