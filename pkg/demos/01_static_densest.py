"""
Densest subgraph of a static graph
==================================

Three ways to find the densest subgraph of a single snapshot: the exact
parametric min-cut, greedy peeling, and generalized peeling with node gains.
"""
import random

from tempograph import NodeWeights, StaticGraph, charikar_peel, exact_densest, static_greedy_generalized

# A 6-node clique hidden in 40 sparse random edges.
rng = random.Random(7)
edges = [(u, v) for u in range(6) for v in range(u + 1, 6)]
edges += [tuple(rng.sample(range(6, 30), 2)) for _ in range(40)]
h = StaticGraph(edges)
print(f"graph: {h.n} nodes, {h.m} edges, overall density {h.density():.3f}")

exact = exact_densest(h)
print(f"exact:   density {exact.density:.3f} on {sorted(exact.nodes)}")

# Peeling is a 2-approximation, and here it finds the clique too.
peel = charikar_peel(h)
print(f"peeling: density {peel.density:.3f} on {sorted(peel.nodes)}")

# Node gains pull the answer toward nodes that have not been covered yet.
# Each node v adds 2 * lam * |V(H)| * delta(v) to its generalized degree.
gains = NodeWeights({v: 1.0 for v in range(20, 30)}, lam=0.5)
gen = static_greedy_generalized(h, gains)
print(f"with gains on 20..29: score {gen.score:.3f}, density {gen.density:.3f}, "
      f"{len(gen.nodes)} nodes")
