"""
Densest subgraph under edge insertions
======================================

The incremental structure keeps level sets up to date as edges arrive. Its
reported density never decreases and stays within 2(1 + eps) of the optimum.
"""
import random

from tempograph import StaticGraph, exact_densest, update_stream

rng = random.Random(3)
stream = [tuple(rng.sample(range(25), 2)) for _ in range(200)]
# A burst of clique edges halfway through.
stream[100:100] = [(u, v) for u in range(30, 38) for v in range(u + 1, 38)]

eps = 0.2
seen = StaticGraph()
worst = 1.0
for i, best in enumerate(update_stream(stream, eps), 1):
    seen.add_edge(*stream[i - 1])
    if i % 40 == 0 or i == len(stream):
        opt = exact_densest(seen).density
        worst = max(worst, opt / best.density)
        print(f"after {i:3d} edges: reported {best.density:.3f}, optimum {opt:.3f}")

print(f"worst ratio at checkpoints {worst:.3f} (bound {2 * (1 + eps):.1f})")
