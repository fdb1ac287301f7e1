"""Diagrams: the skeletons of closed non-backtracking paths."""
import math

from sparsetw.diagrams import count_realizable, count_weighted, enumerate_diagrams, reduce_path

census = enumerate_diagrams(4)
print("diagram counts by s:", {s: len(ds) for s, ds in census.items()})
for d in census[2][:3]:
    print(d.to_json())

# A tail leading into a loop that is run around twice
path = (1, 2, 3, 4, 5, 6, 7, 4, 5, 6, 7, 4, 3, 2, 1)
wd = reduce_path(path)
print("reduced:", "s =", wd.s, " n =", wd.n, " weights =", wd.weights)

# Weightings of the 3s-1 edges by chain lengths, against the binomial bounds
n = 40
for s in (1, 2, 3):
    lo, hi = math.comb(n - 3 * s, 3 * s - 2), math.comb(n + 3 * s - 2, 3 * s - 2)
    real = [count_realizable(d, n) for d in census[s]]
    print(f"s={s}: {lo} <= positive {count_weighted(s, n, True)} <= realizable {min(real)}..{max(real)}"
          f" <= all {count_weighted(s, n, False)} <= {hi}")
