"""How often a random regular graph contains a fixed small subgraph."""
from sparsetw.mckay import fl_bounds, mckay_check, pattern_from_name, single_edge_probability

N, d = 50, 3
edge = pattern_from_name("edge")
b = fl_bounds(edge, N, d)
print(f"single edge: exact {float(single_edge_probability(N, d)):.5f} in [{b.lower:.5f}, {b.upper:.5f}]")

patterns = [pattern_from_name(p) for p in ("edge", "2-path", "triangle")]
for c in mckay_check(patterns, N, d, n_samples=20000, seed=11):
    r = c.as_dict()
    print(f"{r['pattern']:>8}: MC {r['estimate']:.5f} +- {r['stderr']:.5f}"
          f"  bounds [{r['lower']:.5f}, {r['upper']:.5f}]  ok={r['within_bounds']}")
