"""Sampling uniform random regular graphs with the pairing model."""
import numpy as np

from sparsetw.graph import enumerate_regular_graphs, sample_regular_graph, validate_regular

# A cubic graph on 20 vertices; the same seed always gives the same graph
g = sample_regular_graph(20, 3, seed=7)
print(g.n_vertices, "vertices,", g.n_edges, "edges")
print("violations:", validate_regular(g) or "none")
print("first edges:", g.edges[:5])

# On 6 vertices there are 70 labelled cubic graphs; the sampler should hit
# each about equally often
labelled = {tuple(h.edges): i for i, h in enumerate(enumerate_regular_graphs(6, 3))}
rng = np.random.default_rng(0)
hits = np.zeros(len(labelled), dtype=int)
for _ in range(7000):
    hits[labelled[tuple(sample_regular_graph(6, 3, rng).edges)]] += 1
print("labelled graphs:", len(labelled), " min/max hits:", hits.min(), hits.max(), "(expected 100 each)")
