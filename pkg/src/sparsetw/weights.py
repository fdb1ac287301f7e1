"""Random edge weights and the Hermitian matrix they induce on a graph."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ParameterError
from .graph import RegularGraph
from .rng import as_generator

KINDS = ("rademacher", "symmetric-real", "complex-unit", "all-ones")
HERMITIAN_ATOL = 1e-12


@dataclass(frozen=True)
class WeightEnsemble:
    """Law of a single edge weight.

    For ``kind="symmetric-real"`` pick ``law="two-point"`` (values +-1),
    ``law="uniform"`` (uniform on [-sqrt 3, sqrt 3]) or ``law="finite"`` with
    ``support``/``probs`` describing a symmetric law with unit variance.
    """

    kind: str = "rademacher"
    law: str = "uniform"
    support: tuple[float, ...] = ()
    probs: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown ensemble kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "symmetric-real":
            if self.law not in ("two-point", "uniform", "finite"):
                raise ParameterError(f"unknown symmetric-real law {self.law!r}")
            if self.law == "finite":
                _check_finite_law(self.support, self.probs)

    @classmethod
    def finite(cls, support: Sequence[float], probs: Sequence[float]) -> "WeightEnsemble":
        return cls("symmetric-real", "finite", tuple(map(float, support)), tuple(map(float, probs)))

    @property
    def is_complex(self) -> bool:
        return self.kind == "complex-unit"

    @property
    def is_integer(self) -> bool:
        return self.kind in ("rademacher", "all-ones")

    @property
    def label(self) -> str:
        return f"symmetric-real:{self.law}" if self.kind == "symmetric-real" else self.kind

    @classmethod
    def from_label(cls, label: str) -> "WeightEnsemble":
        kind, _, law = label.partition(":")
        return cls(kind, law or "uniform")

    def draw(self, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "rademacher":
            return 2 * rng.integers(0, 2, size=size, dtype=np.int64) - 1
        if self.kind == "all-ones":
            return np.ones(size, dtype=np.int64)
        if self.kind == "complex-unit":
            return np.exp(2j * np.pi * rng.random(size))
        if self.law == "two-point":
            return (2 * rng.integers(0, 2, size=size) - 1).astype(float)
        if self.law == "uniform":
            return rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=size)
        idx = rng.choice(len(self.support), size=size, p=np.asarray(self.probs))
        return np.asarray(self.support)[idx]


def _check_finite_law(support, probs, tol: float = 1e-12) -> None:
    x = np.asarray(support, dtype=float)
    p = np.asarray(probs, dtype=float)
    if x.shape != p.shape or x.size == 0:
        raise ParameterError("support and probs must be nonempty and of equal length")
    if np.any(p < 0) or abs(p.sum() - 1) > tol:
        raise ParameterError("probs must be a probability vector")
    law = {}
    for xi, pi in zip(x, p):
        law[xi] = law.get(xi, 0.0) + pi
    for xi, pi in law.items():
        if abs(law.get(-xi, 0.0) - pi) > tol:
            raise ParameterError(f"law is not symmetric at {xi}")
    if abs(float(np.dot(p, x * x)) - 1.0) > 1e-9:
        raise ParameterError("law must have unit second moment")


@dataclass(frozen=True)
class WeightAssignment:
    """Weights aligned with an edge list."""

    edges: tuple[tuple[int, int], ...]
    values: np.ndarray = field(compare=False)

    def as_dict(self) -> dict[tuple[int, int], complex]:
        return dict(zip(self.edges, self.values.tolist()))

    def to_json(self) -> str:
        if np.iscomplexobj(self.values):
            vals = [[float(z.real), float(z.imag)] for z in self.values]
        else:
            vals = self.values.tolist()
        return json.dumps({"edges": [list(e) for e in self.edges], "weights": vals}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "WeightAssignment":
        obj = json.loads(text)
        edges = tuple((int(u), int(v)) for u, v in obj["edges"])
        w = obj["weights"]
        if w and isinstance(w[0], list):
            values = np.array([complex(a, b) for a, b in w])
        else:
            values = np.array(w)
        return cls(edges, values)


def assign_weights(graph: RegularGraph, ensemble: WeightEnsemble, seed) -> WeightAssignment:
    """One independent draw from ``ensemble`` per undirected edge."""
    rng = as_generator(seed)
    return WeightAssignment(graph.edges, ensemble.draw(graph.n_edges, rng))


@dataclass(frozen=True)
class HermitianMatrix:
    graph: RegularGraph
    weights: WeightAssignment
    sparse: sp.csr_matrix = field(compare=False, repr=False)

    @cached_property
    def dense(self) -> np.ndarray:
        return self.sparse.toarray()

    @property
    def n(self) -> int:
        return self.sparse.shape[0]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.sparse.data)

    @property
    def is_integer(self) -> bool:
        return np.issubdtype(self.sparse.dtype, np.integer)

    def neighbors(self, u: int) -> list[tuple[int, complex]]:
        row = self.sparse.getrow(u)
        return list(zip(row.indices.tolist(), row.data.tolist()))

    def negated(self) -> "HermitianMatrix":
        return build_matrix(self.graph, WeightAssignment(self.weights.edges, -self.weights.values))


def build_matrix(graph: RegularGraph, weights: WeightAssignment | Mapping) -> HermitianMatrix:
    """Hermitian matrix with M[u,v] = S(u,v) and M[v,u] = conj S(u,v) on edges."""
    if isinstance(weights, Mapping):
        keys = {(min(u, v), max(u, v)) for u, v in weights}
        items = {(min(u, v), max(u, v)): w for (u, v), w in weights.items()}
        missing = set(graph.edges) - keys
        extra = keys - set(graph.edges)
        if missing or extra:
            raise ParameterError(f"weight keys do not match edges (missing={sorted(missing)}, extra={sorted(extra)})")
        weights = WeightAssignment(graph.edges, np.array([items[e] for e in graph.edges]))
    elif tuple(weights.edges) != tuple(graph.edges) or len(weights.values) != graph.n_edges:
        missing = set(graph.edges) - set(weights.edges)
        extra = set(weights.edges) - set(graph.edges)
        raise ParameterError(f"weights do not cover the edge set (missing={sorted(missing)}, extra={sorted(extra)})")
    vals = np.asarray(weights.values)
    n = graph.n_vertices
    e = np.asarray(graph.edges, dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    data = np.concatenate([vals, np.conj(vals)])
    sparse = sp.csr_matrix((data, (rows, cols)), shape=(n, n), dtype=vals.dtype)
    sparse.sort_indices()
    return HermitianMatrix(graph, weights, sparse)


def random_matrix(graph: RegularGraph, ensemble: WeightEnsemble, seed) -> HermitianMatrix:
    return build_matrix(graph, assign_weights(graph, ensemble, seed))
