"""Random simple d-regular graphs on labelled vertices."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParameterError, ResourceCapError
from .rng import as_generator

DEFAULT_MAX_RESTARTS = 10**6


@dataclass(frozen=True)
class RegularGraph:
    """Labelled graph on ``0..n_vertices-1`` that is meant to be d-regular.

    ``edges`` holds unordered pairs as ``(min, max)`` sorted lexicographically.
    Construction does not validate; use :func:`validate_regular`.
    """

    n_vertices: int
    degree: int
    adjacency: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Sequence[int]], degree: int | None = None):
        canon = sorted((min(int(u), int(v)), max(int(u), int(v))) for u, v in edges)
        adj: list[list[int]] = [[] for _ in range(n_vertices)]
        for u, v in canon:
            if 0 <= u < n_vertices and 0 <= v < n_vertices:
                adj[u].append(v)
                if u != v:
                    adj[v].append(u)
        if degree is None:
            degree = len(adj[0]) if n_vertices else 0
        return cls(
            n_vertices=n_vertices,
            degree=degree,
            adjacency=tuple(tuple(sorted(a)) for a in adj),
            edges=tuple(canon),
        )

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if u <= v else (v, u)
        return b in self.adjacency[a] if a != b else False

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n_vertices, "d": self.degree, "edges": [list(e) for e in self.edges]},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "RegularGraph":
        obj = json.loads(text)
        return cls.from_edges(obj["n"], obj["edges"], degree=obj["d"])


def check_parameters(n_vertices: int, degree: int) -> None:
    if degree < 3:
        raise ParameterError(f"degree must satisfy d >= 3 (got d={degree})")
    if degree >= n_vertices:
        raise ParameterError(f"degree must satisfy d < N (got d={degree}, N={n_vertices})")
    if (n_vertices * degree) % 2:
        raise ParameterError(f"N*d must be even (got N={n_vertices}, d={degree})")


def _pairing_attempt(stubs: np.ndarray, n: int, rng: np.random.Generator):
    perm = rng.permutation(stubs)
    a, b = perm[0::2], perm[1::2]
    if np.any(a == b):
        return None
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    key = lo * n + hi
    key.sort()
    if np.any(key[1:] == key[:-1]):
        return None
    return key


def sample_regular_graph(n_vertices: int, degree: int, seed, max_restarts: int = DEFAULT_MAX_RESTARTS) -> RegularGraph:
    """Uniform random simple d-regular graph via the pairing model.

    Any pairing with a loop or a repeated pair is discarded and the whole
    pairing is redrawn, which makes the accepted graph exactly uniform.
    """
    check_parameters(n_vertices, degree)
    rng = as_generator(seed)
    stubs = np.repeat(np.arange(n_vertices, dtype=np.int64), degree)
    for _ in range(max_restarts):
        key = _pairing_attempt(stubs, n_vertices, rng)
        if key is not None:
            edges = zip((key // n_vertices).tolist(), (key % n_vertices).tolist())
            return RegularGraph.from_edges(n_vertices, edges, degree=degree)
    raise ResourceCapError(
        f"no simple pairing after {max_restarts} restarts for N={n_vertices}, d={degree}"
    )


def validate_regular(graph: RegularGraph) -> list[str]:
    """List every violated RegularGraph invariant; empty iff valid."""
    out: list[str] = []
    n, d = graph.n_vertices, graph.degree
    if d < 3 or d >= n:
        out.append(f"parameters: need 3 <= d < N, got d={d}, N={n}")
    if (n * d) % 2:
        out.append(f"parameters: N*d={n * d} is odd")
    seen = set()
    for u, v in graph.edges:
        if not (0 <= u < n and 0 <= v < n):
            out.append(f"edge ({u},{v}): vertex out of range")
            continue
        if u == v:
            out.append(f"edge ({u},{v}): self-loop")
        if u > v:
            out.append(f"edge ({u},{v}): not in canonical (min,max) form")
        if (u, v) in seen:
            out.append(f"edge ({u},{v}): multi-edge")
        seen.add((u, v))
    if list(graph.edges) != sorted(graph.edges):
        out.append("edges: not sorted")
    deg = [0] * n
    for u, v in graph.edges:
        if 0 <= u < n and 0 <= v < n:
            deg[u] += 1
            deg[v] += 1
    for v in range(n):
        if deg[v] != d:
            out.append(f"vertex {v}: degree {deg[v]} != {d}")
    from_adj = set()
    if len(graph.adjacency) != n:
        out.append(f"adjacency: {len(graph.adjacency)} lists for {n} vertices")
    for u, nbrs in enumerate(graph.adjacency):
        if list(nbrs) != sorted(nbrs):
            out.append(f"adjacency[{u}]: not sorted")
        for v in nbrs:
            from_adj.add((min(u, v), max(u, v)))
    if from_adj != seen:
        out.append("adjacency and edge list describe different edge sets")
    if len(graph.edges) != n * d // 2:
        out.append(f"edge count {len(graph.edges)} != d*N/2 = {n * d // 2}")
    return out


def _pattern_edges(pattern) -> list[tuple[int, int]]:
    edges = getattr(pattern, "edges", pattern)
    return [(int(u), int(v)) for u, v in edges]


def contains_subgraph(graph: RegularGraph, pattern) -> bool:
    """True iff every edge of the labelled pattern is an edge of ``graph``."""
    edges = _pattern_edges(pattern)
    for u, v in edges:
        if not (0 <= u < graph.n_vertices and 0 <= v < graph.n_vertices):
            raise ParameterError(f"pattern vertex out of range in edge ({u},{v})")
    return all(graph.has_edge(u, v) for u, v in edges)


def enumerate_regular_graphs(n_vertices: int, degree: int) -> Iterator[RegularGraph]:
    """Every labelled simple d-regular graph on n vertices (brute force)."""
    need = [degree] * n_vertices
    chosen: list[tuple[int, int]] = []

    def rec(v: int):
        if v == n_vertices:
            yield RegularGraph.from_edges(n_vertices, chosen, degree=degree)
            return
        r = need[v]
        cands = [w for w in range(v + 1, n_vertices) if need[w] > 0]
        if r > len(cands):
            return
        for combo in itertools.combinations(cands, r):
            for w in combo:
                need[w] -= 1
                chosen.append((v, w))
            need[v] = 0
            yield from rec(v + 1)
            need[v] = r
            for w in combo:
                need[w] += 1
                chosen.pop()

    yield from rec(0)


def isomorphism_classes(graphs: Iterable[RegularGraph]) -> list[tuple[RegularGraph, int]]:
    """Group graphs into isomorphism classes; returns (representative, size).

    Graphs are bucketed by adjacency spectrum, and networkx settles
    isomorphism inside a bucket.
    """
    import networkx as nx

    buckets: dict[tuple, list[list]] = {}
    for g in graphs:
        A = np.zeros((g.n_vertices, g.n_vertices))
        if g.edges:
            e = np.asarray(g.edges)
            A[e[:, 0], e[:, 1]] = A[e[:, 1], e[:, 0]] = 1
        key = tuple(np.round(np.linalg.eigvalsh(A), 8) + 0.0)
        h = nx.Graph(list(g.edges))
        h.add_nodes_from(range(g.n_vertices))
        for entry in buckets.setdefault(key, []):
            if nx.is_isomorphic(entry[1], h):
                entry[2] += 1
                break
        else:
            buckets[key].append([g, h, 1])
    return [(g, c) for group in buckets.values() for g, _, c in group]


def complete_graph(n: int) -> RegularGraph:
    return RegularGraph.from_edges(n, itertools.combinations(range(n), 2), degree=n - 1)


def complete_bipartite_33() -> RegularGraph:
    return RegularGraph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)], degree=3)
