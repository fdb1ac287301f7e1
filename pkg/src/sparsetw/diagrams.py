"""Diagrams: rooted cubic multigraphs carrying a doubled non-backtracking circuit.

A diagram with parameter ``s`` has ``2s`` vertices (root of degree 1, all
others of degree 3, loops counting 2) and ``3s - 1`` edges, each traversed
exactly twice by a circuit that leaves the root and comes back to it without
ever following an edge by its reverse.  Closed non-backtracking paths whose
traversal graph has maximal degree 3 contract to diagrams once every maximal
chain of degree-2 vertices is replaced by one edge carrying the chain's
number of interior vertices as its weight.

Two diagrams are the same iff one circuit is carried to the other by a
root-preserving relabelling.  Since the circuit starts at the root, relabelling
vertices and edges in order of first appearance gives a canonical form.  A
circuit and its reversal are *different* diagrams; this is the convention
under which each positive-weight diagram has exactly N(N-1)...(N-n+s) paths.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import ParameterError

S_MAX = 5

# Frozen output of enumerate_diagrams (s = 5 takes ~20 s to re-derive).
D1_TABLE = {1: 1, 2: 7, 3: 128, 4: 3885, 5: 163840}


@dataclass(frozen=True)
class Diagram:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    vertex_sequence: tuple[int, ...]
    edge_sequence: tuple[int, ...]

    @property
    def s(self) -> int:
        return self.n_vertices // 2

    @property
    def root(self) -> int:
        return self.vertex_sequence[0]

    @property
    def n_loops(self) -> int:
        return sum(a == b for a, b in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    @property
    def key(self) -> tuple:
        return self.vertex_sequence, self.edge_sequence

    def relabel(self, vertex_perm: Sequence[int], edge_perm: Sequence[int]) -> "Diagram":
        """Same diagram under new vertex and edge labels (not canonical)."""
        edges = [None] * len(self.edges)
        for e, (a, b) in enumerate(self.edges):
            edges[edge_perm[e]] = (vertex_perm[a], vertex_perm[b])
        return Diagram(
            self.n_vertices,
            tuple(edges),
            tuple(vertex_perm[v] for v in self.vertex_sequence),
            tuple(edge_perm[e] for e in self.edge_sequence),
        )

    def to_json(self) -> str:
        return json.dumps({
            "s": self.s,
            "vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "root": self.root,
            "circuit": list(self.vertex_sequence),
            "edge_sequence": list(self.edge_sequence),
        }, separators=(",", ":"))


def canonicalize(vertex_sequence: Sequence[int], edge_sequence: Sequence[int]) -> Diagram:
    """Relabel vertices and edges by first appearance along the circuit."""
    vmap: dict[int, int] = {}
    emap: dict[int, int] = {}
    for v in vertex_sequence:
        vmap.setdefault(v, len(vmap))
    for e in edge_sequence:
        emap.setdefault(e, len(emap))
    vs = tuple(vmap[v] for v in vertex_sequence)
    es = tuple(emap[e] for e in edge_sequence)
    edges: list[tuple[int, int] | None] = [None] * len(emap)
    for j, e in enumerate(es):
        if edges[e] is None:
            a, b = vs[j], vs[j + 1]
            edges[e] = (a, b)
    return Diagram(len(vmap), tuple(edges), vs, es)


def validate_diagram(diagram: Diagram) -> list[str]:
    """Every violated Diagram invariant; empty iff valid."""
    out = []
    vs, es = diagram.vertex_sequence, diagram.edge_sequence
    if len(vs) != len(es) + 1:
        out.append("circuit: vertex and edge sequences have inconsistent lengths")
        return out
    if vs[0] != vs[-1]:
        out.append("circuit: does not return to the root")
    uses = [0] * len(diagram.edges)
    for j, e in enumerate(es):
        a, b = diagram.edges[e]
        if {vs[j], vs[j + 1]} != {a, b}:
            out.append(f"step {j}: edge {e} does not join {vs[j]} and {vs[j + 1]}")
        uses[e] += 1
        if j and es[j - 1] == e and a != b:
            out.append(f"step {j}: edge {e} followed by its reverse")
    for e, u in enumerate(uses):
        if u != 2:
            out.append(f"edge {e}: traversed {u} times")
    deg = diagram.degrees()
    root = vs[0]
    if deg[root] != 1:
        out.append(f"root degree {deg[root]} != 1")
    for v, dv in enumerate(deg):
        if v != root and dv != 3:
            out.append(f"vertex {v}: degree {dv} != 3")
    s = diagram.s
    if diagram.n_vertices % 2 or diagram.n_vertices != 2 * s:
        out.append(f"vertex count {diagram.n_vertices} is not 2s")
    if len(diagram.edges) != 3 * s - 1:
        out.append(f"edge count {len(diagram.edges)} != 3s-1 = {3 * s - 1}")
    return out


def _generate(s: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Circuits in canonical form, by depth-first extension from the root."""
    V, E = 2 * s, 3 * s - 1
    L = 2 * E
    cap = [1] + [3] * (V - 1)
    deg = [0] * V
    ends: list[tuple[int, int]] = []
    used: list[int] = []
    vs = [0]
    es: list[int] = []
    state = {"open": 0, "nv": 1}

    def rec(cur: int, prev: int):
        step = len(es)
        if step == L:
            if cur == 0 and state["nv"] == V and state["open"] == 0 and all(deg[v] == 3 for v in range(1, V)):
                yield tuple(vs), tuple(es)
            return
        new_left = E - len(ends)
        # every missing vertex needs a fresh edge
        if V - state["nv"] > new_left:
            return
        for e, (a, b) in enumerate(ends):
            if used[e] != 1 or (cur != a and cur != b):
                continue
            if e == prev and a != b:
                continue
            other = b if cur == a else a
            # closing the root edge ends the circuit
            if other == 0 and (state["open"] > 1 or new_left):
                continue
            used[e] = 2
            state["open"] -= 1
            vs.append(other)
            es.append(e)
            yield from rec(other, e)
            es.pop()
            vs.pop()
            state["open"] += 1
            used[e] = 1
        if new_left == 0:
            return
        nv = state["nv"]
        for t in range(nv + 1 if nv < V else nv):
            if t == cur:
                if deg[cur] + 2 > cap[cur]:
                    continue
                deg[cur] += 2
            else:
                if deg[cur] + 1 > cap[cur] or deg[t] + 1 > cap[t]:
                    continue
                deg[cur] += 1
                deg[t] += 1
            ends.append((cur, t))
            used.append(1)
            state["open"] += 1
            if t == nv:
                state["nv"] += 1
            vs.append(t)
            es.append(len(ends) - 1)
            yield from rec(t, len(ends) - 1)
            es.pop()
            vs.pop()
            if t == nv:
                state["nv"] -= 1
            state["open"] -= 1
            used.pop()
            ends.pop()
            if t == cur:
                deg[cur] -= 2
            else:
                deg[cur] -= 1
                deg[t] -= 1

    yield from rec(0, -1)


@lru_cache(maxsize=None)
def _diagrams_for(s: int) -> tuple[Diagram, ...]:
    seen = {}
    for vs, es in _generate(s):
        d = canonicalize(vs, es)
        seen.setdefault(d.key, d)
    return tuple(seen.values())


def enumerate_diagrams(s_max: int) -> dict[int, list[Diagram]]:
    """All diagrams with parameter ``1 <= s <= s_max``, grouped by s."""
    if s_max > S_MAX:
        raise ParameterError(f"s_max must be <= {S_MAX} (got {s_max})")
    if s_max < 1:
        raise ParameterError("s_max must be >= 1")
    return {s: list(_diagrams_for(s)) for s in range(1, s_max + 1)}


def d1_count(s: int) -> int:
    """Number of diagrams with parameter s."""
    if not 1 <= s <= S_MAX:
        raise ParameterError(f"s must lie in 1..{S_MAX} (got {s})")
    return len(_diagrams_for(s))


def d1_value(s: int) -> int:
    """D1(s) from the frozen table, enumerating only when it is missing."""
    if s in D1_TABLE:
        return D1_TABLE[s]
    return d1_count(s)


def d1_bounds_hold(s: int, C: float = 100.0) -> bool:
    d1 = d1_value(s)
    return (s / C) ** s <= d1 <= C ** (s - 1) * s ** s


# ---------------------------------------------------------------------------
# weights


def count_weighted(s: int, n: int, positive_only: bool) -> int:
    """Weight functions on 3s-1 edges with sum(w + 1) = n.

    ``positive_only`` restricts to w >= 1, otherwise w >= -1.
    """
    if n < 3 * s:
        raise ParameterError(f"need n >= 3s (got n={n}, s={s})")
    k = 3 * s - 2
    return math.comb(n - 3 * s, k) if positive_only else math.comb(n + k, k)


def count_weightings_dp(lower_bounds: Sequence[int], n: int) -> int:
    """Integer vectors w >= lower_bounds (componentwise) with sum(w + 1) = n.

    Dynamic programme over edges; independent of the closed forms above.
    """
    ways = [0] * (n + 1)
    ways[0] = 1
    for lb in lower_bounds:
        step = lb + 1
        nxt = [0] * (n + 1)
        run = 0
        # nxt[t] = sum_{u >= step} ways[t - u]
        for t in range(n + 1):
            if t - step >= 0:
                run += ways[t - step]
            nxt[t] = run
        ways = nxt
    return ways[n]


def enumerate_weightings(lower_bounds: Sequence[int], n: int) -> Iterator[tuple[int, ...]]:
    """Explicit list of the weight vectors counted by count_weightings_dp."""
    k = len(lower_bounds)

    def rec(i, left):
        if i == k - 1:
            w = left - 1
            if w >= lower_bounds[i]:
                yield (w,)
            return
        for w in range(lower_bounds[i], left):
            for rest in rec(i + 1, left - (w + 1)):
                yield (w,) + rest

    if k == 0:
        if n == 0:
            yield ()
        return
    yield from rec(0, n)


def parallel_classes(diagram: Diagram) -> list[list[int]]:
    """Non-loop edges grouped by their unordered endpoint pair."""
    groups: dict[tuple[int, int], list[int]] = {}
    for e, (a, b) in enumerate(diagram.edges):
        if a != b:
            groups.setdefault((min(a, b), max(a, b)), []).append(e)
    return list(groups.values())


def is_realizable(diagram: Diagram, weights: Sequence[int]) -> bool:
    """Whether the weights materialise into a closed NB path in a simple graph.

    Loops need weight >= 2 (a cycle of length >= 3) and at most one edge of
    each parallel class may have weight 0; all weights must be >= 0.
    """
    if any(w < 0 for w in weights):
        return False
    if any(a == b and weights[e] < 2 for e, (a, b) in enumerate(diagram.edges)):
        return False
    return all(sum(weights[e] == 0 for e in group) <= 1 for group in parallel_classes(diagram))


def count_realizable(diagram: Diagram, n: int) -> int:
    """Number of realizable weightings of ``diagram`` with sum(w + 1) = n."""
    ways = [0] * (n + 1)
    ways[0] = 1

    def convolve(poly):
        out = [0] * (n + 1)
        for t, a in enumerate(ways):
            if a:
                for u, b in enumerate(poly[: n + 1 - t]):
                    out[t + u] += a * b
        return out

    for a, b in diagram.edges:
        if a == b:
            ways = convolve([0, 0, 0] + [1] * (n + 1))
    for group in parallel_classes(diagram):
        # per-edge lengths >= 1, with at most one length equal to 1
        no_zero = [1]
        one_zero = [0]
        for _ in group:
            nz = [0] * (n + 1)
            oz = [0] * (n + 1)
            for t in range(n + 1):
                for length in range(1, n + 1 - t):
                    if length == 1:
                        oz[t + 1] += no_zero[t] if t < len(no_zero) else 0
                    else:
                        nz[t + length] += no_zero[t] if t < len(no_zero) else 0
                        oz[t + length] += one_zero[t] if t < len(one_zero) else 0
            no_zero, one_zero = nz, oz
        ways = convolve([x + y for x, y in zip(no_zero, one_zero)])
    return ways[n]


@dataclass(frozen=True)
class WeightedDiagram:
    diagram: Diagram
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.diagram.edges):
            raise ParameterError("one weight per diagram edge is required")
        if any(w < -1 for w in self.weights):
            raise ParameterError("weights must be >= -1")

    @property
    def n(self) -> int:
        """Half the length of every path reducing to this weighted diagram."""
        return sum(w + 1 for w in self.weights)

    @property
    def s(self) -> int:
        return self.diagram.s

    @property
    def positive(self) -> bool:
        return all(w >= 1 for w in self.weights)


def materialize(wd: WeightedDiagram) -> tuple[int, ...]:
    """One concrete closed path for a positive-weight diagram, on labels 0, 1, 2, ...

    Labels are assigned in order of first visit, so the output is the
    canonical representative of its labelling class.
    """
    if not all(w >= 0 for w in wd.weights):
        raise ParameterError("materialize needs nonnegative weights")
    d = wd.diagram
    next_label = [0]

    def fresh():
        next_label[0] += 1
        return next_label[0] - 1

    vlab: dict[int, int] = {}
    chains: dict[int, tuple[int, int, list[int]]] = {}
    vs, es = d.vertex_sequence, d.edge_sequence
    vlab[vs[0]] = fresh()
    path = [vlab[vs[0]]]
    for j, e in enumerate(es):
        a, b = vs[j], vs[j + 1]
        if e not in chains:
            interior = [fresh() for _ in range(wd.weights[e])]
            if b not in vlab:
                vlab[b] = fresh()
            chains[e] = (a, b, interior)
            path.extend(interior)
        else:
            a0, b0, interior = chains[e]
            if a0 == b0 or (a, b) == (a0, b0):
                path.extend(interior)
            else:
                path.extend(reversed(interior))
        path.append(vlab[b])
    return tuple(path)


def _check_path(path: Sequence[int]) -> dict[tuple[int, int], int]:
    p = list(path)
    if len(p) < 2 or p[0] != p[-1]:
        raise ParameterError("path must be closed (u_n = u_0)")
    mult: dict[tuple[int, int], int] = {}
    for j in range(len(p) - 1):
        u, v = p[j], p[j + 1]
        if u == v:
            raise ParameterError(f"step {j}: ({u},{u}) is not an edge of a simple graph")
        key = (min(u, v), max(u, v))
        mult[key] = mult.get(key, 0) + 1
    for j in range(len(p) - 2):
        if p[j + 2] == p[j]:
            raise ParameterError(f"path backtracks at position {j + 1}: u_{j + 2} = u_{j} = {p[j]}")
    odd = sorted(e for e, m in mult.items() if m % 2)
    if odd:
        raise ParameterError(f"edges traversed an odd number of times: {odd}")
    return mult


def reduce_path(path: Sequence[int]) -> WeightedDiagram:
    """Contract the degree-2 chains of a closed even NB path of maximal degree 3."""
    mult = _check_path(path)
    p = list(path)
    heavy = sorted(e for e, m in mult.items() if m != 2)
    if heavy:
        raise ParameterError(f"edges traversed more than twice (outside the reducible regime): {heavy}")
    deg: dict[int, int] = {}
    for u, v in mult:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if deg[p[0]] != 1:
        raise ParameterError(f"root has degree {deg[p[0]]}; only degree-1 roots reduce to positive weights")
    high = sorted(v for v, dv in deg.items() if dv > 3)
    if high:
        raise ParameterError(f"vertices of degree > 3 need identifications (out of scope): {high}")
    corners = [j for j, v in enumerate(p) if v == p[0] or deg[v] == 3]
    chain_id: dict[frozenset, int] = {}
    weights: dict[int, int] = {}
    vseq = [p[0]]
    eseq = []
    for j0, j1 in zip(corners, corners[1:]):
        edges = frozenset((min(p[j], p[j + 1]), max(p[j], p[j + 1])) for j in range(j0, j1))
        cid = chain_id.setdefault(edges, len(chain_id))
        weights[cid] = j1 - j0 - 1
        vseq.append(p[j1])
        eseq.append(cid)
    diagram = canonicalize(vseq, eseq)
    emap: dict[int, int] = {}
    for e in eseq:
        emap.setdefault(e, len(emap))
    w = [0] * len(emap)
    for cid, new in emap.items():
        w[new] = weights[cid]
    problems = validate_diagram(diagram)
    if problems:
        raise ParameterError("path does not reduce to a diagram: " + "; ".join(problems))
    return WeightedDiagram(diagram, tuple(w))


def path_vertex_census(path: Sequence[int]) -> dict[int, int]:
    """Number of distinct vertices of each degree in the path's edge set."""
    mult = _check_path(path)
    deg: dict[int, int] = {}
    for u, v in mult:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    out: dict[int, int] = {}
    for dv in deg.values():
        out[dv] = out.get(dv, 0) + 1
    return out


def falling_factorial(a: int, b: int) -> int:
    out = 1
    for i in range(b):
        out *= a - i
    return out


def count_path_realizations(wd: WeightedDiagram, N: int, bound: bool = False) -> int:
    """Paths on N labelled vertices reducing to ``wd``.

    Exact count N (N-1) ... (N-n+s) for positive weights (zero when N is too
    small); ``bound=True`` gives the general upper bound N^(n-s+1).
    """
    k = wd.n - wd.s + 1
    if bound:
        return N ** k
    if not all(w >= 0 for w in wd.weights):
        raise ParameterError("the exact count needs nonnegative weights")
    if N < k:
        return 0
    return falling_factorial(N, k)


def enumerate_reducible_paths(n: int) -> Iterator[tuple[int, ...]]:
    """Canonically labelled closed NB paths of length 2n that reduce to a diagram.

    Works directly on vertex sequences (labels in order of first visit), with
    every edge traversed exactly twice, root degree 1 and all other degrees at
    most 3; it never consults the diagram enumerator, so it serves as an
    independent census of positive-weight diagrams.
    """
    L = 2 * n
    path = [0]
    use: dict[tuple[int, int], int] = {}
    deg = [0] * (L + 2)
    state = {"open": 0, "nv": 1}

    def rec():
        step = len(path) - 1
        cur = path[-1]
        if step == L:
            if cur == 0 and state["open"] == 0 and all(deg[v] in (2, 3) for v in range(1, state["nv"])):
                yield tuple(path)
            return
        if state["open"] > L - step:
            return
        prev = path[-2] if step else -1
        nv = state["nv"]
        for t in range(nv + 1):
            if t == cur or t == prev:
                continue
            key = (min(cur, t), max(cur, t))
            u = use.get(key, 0)
            if u >= 2:
                continue
            if u == 0:
                capc = 1 if cur == 0 else 3
                capt = 1 if t == 0 else 3
                if deg[cur] + 1 > capc or deg[t] + 1 > capt:
                    continue
                deg[cur] += 1
                deg[t] += 1
                state["open"] += 1
            else:
                state["open"] -= 1
            use[key] = u + 1
            if t == nv:
                state["nv"] += 1
            path.append(t)
            yield from rec()
            path.pop()
            if t == nv:
                state["nv"] -= 1
            use[key] = u
            if u == 0:
                del use[key]
                deg[cur] -= 1
                deg[t] -= 1
                state["open"] -= 1
            else:
                state["open"] += 1

    yield from rec()
