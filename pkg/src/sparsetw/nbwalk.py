"""Non-backtracking walk matrices and brute-force path enumeration.

The matrices ``M^(n)`` satisfy

    M^(0) = I,  M^(1) = M,  M^(2) = M^2 - d I,
    M^(n) = M M^(n-1) - (d-1) M^(n-2)            (n >= 3),

which is the Chebyshev-U expression ``(d-1)^{n/2} {U_n(x) - U_{n-2}(x)/(d-1)}``
at ``x = M / (2 sqrt(d-1))`` with ``U_{-1} = U_{-2} = 0``.  For a d-regular
graph the (u, v) entry is the signed sum over non-backtracking walks u -> v.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .errors import ParameterError, ResourceCapError
from .graph import RegularGraph
from .weights import HermitianMatrix, build_matrix

DEFAULT_WORK_CAP = 10**8
_INT64_SAFE = 2**62


def _as_array(M) -> np.ndarray:
    return M.dense if isinstance(M, HermitianMatrix) else np.asarray(M)


def _walk_bound(n_rows: int, d: int, n: int) -> int:
    return n_rows * max(d, 1) * max(d - 1, 1) ** max(n - 1, 0) + n_rows * d


def nb_matrices(M, d: int, n_max: int) -> list[np.ndarray]:
    """``[M^(0), ..., M^(n_max)]`` by the three-term recursion.

    Integer input stays exact: int64 while the walk-count bound fits, Python
    integers (object arrays) beyond that.
    """
    A = _as_array(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {A.shape}")
    if d < 3:
        raise ParameterError(f"degree must satisfy d >= 3 (got d={d})")
    if n_max < 0:
        raise ParameterError("n_max must be nonnegative")
    N = A.shape[0]
    if np.issubdtype(A.dtype, np.integer):
        if _walk_bound(N, d, n_max) * int(np.abs(A).max(initial=1)) ** n_max >= _INT64_SAFE:
            A = A.astype(object)
        else:
            A = A.astype(np.int64)
        eye = np.eye(N, dtype=np.int64).astype(A.dtype)
    else:
        eye = np.eye(N, dtype=A.dtype)
    out = [eye]
    if n_max >= 1:
        out.append(A.copy())
    if n_max >= 2:
        out.append(A @ A - d * eye)
    for _ in range(3, n_max + 1):
        out.append(A @ out[-1] - (d - 1) * out[-2])
    return out


def chebyshev_u_eig(M, d: int, n: int) -> np.ndarray:
    """Reference evaluation of ``U_n(M / (2 sqrt(d-1)))`` by eigendecomposition."""
    A = _as_array(M)
    lam, V = np.linalg.eigh(A.astype(complex) if np.iscomplexobj(A) else A.astype(float))
    x = lam / (2.0 * np.sqrt(d - 1))
    u = chebyshev_u_values(x, n)
    return (V * u) @ V.conj().T


def chebyshev_u_values(x: np.ndarray, n: int) -> np.ndarray:
    """``U_n(x)`` elementwise; ``U_{-1} = U_{-2} = 0``."""
    x = np.asarray(x, dtype=float)
    if n < 0:
        return np.zeros_like(x)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for _ in range(n):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def nb_matrix_eig(M, d: int, n: int) -> np.ndarray:
    """``M^(n)`` from the Chebyshev formula via eigendecomposition."""
    A = _as_array(M)
    lam, V = np.linalg.eigh(A.astype(complex) if np.iscomplexobj(A) else A.astype(float))
    x = lam / (2.0 * np.sqrt(d - 1))
    vals = (d - 1) ** (n / 2) * (chebyshev_u_values(x, n) - chebyshev_u_values(x, n - 2) / (d - 1))
    return (V * vals) @ V.conj().T


def chebyshev_u_traces(M, d: int, n: int, block: int = 512) -> np.ndarray:
    """``[tr U_k(M / (2 sqrt(d-1))) for k = 0..n]`` by the three-term recursion.

    The recursion is applied to blocks of basis vectors, so a sparse ``M``
    costs O(n d N^2) without forming any dense N x N polynomial.
    """
    if isinstance(M, HermitianMatrix):
        op = M.sparse
    elif sp.issparse(M):
        op = M.tocsr()
    else:
        op = np.asarray(M)
    N = op.shape[0]
    scale = 1.0 / np.sqrt(d - 1)
    dtype = complex if np.iscomplexobj(op.data if sp.issparse(op) else op) else float
    traces = np.zeros(n + 1)
    for j0 in range(0, N, block):
        j1 = min(N, j0 + block)
        cols = np.arange(j0, j1)
        X = np.zeros((N, j1 - j0), dtype=dtype)
        X[cols, cols - j0] = 1.0
        prev = np.zeros_like(X)
        cur = X
        traces[0] += j1 - j0
        for k in range(1, n + 1):
            prev, cur = cur, scale * (op @ cur) - prev
            traces[k] += cur[cols, cols - j0].real.sum()
    return traces


def chebyshev_trace(M, d: int, n: int) -> float:
    """``tr U_n(M / (2 sqrt(d-1)))`` by recursion, not by eigendecomposition."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    return float(chebyshev_u_traces(M, d, n)[-1])


# ---------------------------------------------------------------------------
# brute-force enumeration


def _edge_bits(graph: RegularGraph) -> list[list[tuple[int, int]]]:
    idx = graph.edge_index()
    return [[(v, 1 << idx[(min(u, v), max(u, v))]) for v in graph.adjacency[u]] for u in range(graph.n_vertices)]


def count_nb_closed_paths(graph: RegularGraph, n_max: int, require_even_multiplicity: bool = True,
                          work_cap: int = DEFAULT_WORK_CAP) -> list[int]:
    """Closed non-backtracking path counts ``[P_0, ..., P_{n_max}]``.

    One depth-first pass serves every length; with ``require_even_multiplicity``
    only paths using each edge an even number of times are counted.
    """
    nbrs = _edge_bits(graph)
    counts = [0] * (n_max + 1)
    budget = [work_cap]

    def dfs(start: int, prev: int, cur: int, depth: int, parity: int):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceCapError(f"path enumeration exceeded the work cap of {work_cap} partial paths")
        if cur == start and (parity == 0 or not require_even_multiplicity):
            counts[depth] += 1
        if depth == n_max:
            return
        for v, bit in nbrs[cur]:
            if v != prev:
                dfs(start, cur, v, depth + 1, parity ^ bit)

    for u0 in range(graph.n_vertices):
        dfs(u0, -1, u0, 0, 0)
    return counts


def enumerate_nb_closed_paths(graph: RegularGraph, n: int, require_even_multiplicity: bool = True,
                              return_paths: bool = False, work_cap: int = DEFAULT_WORK_CAP):
    """Count (and optionally list) closed non-backtracking paths of length n."""
    if not return_paths:
        return count_nb_closed_paths(graph, n, require_even_multiplicity, work_cap)[n]
    nbrs = _edge_bits(graph)
    paths: list[tuple[int, ...]] = []
    budget = [work_cap]
    stack: list[int] = []

    def dfs(start, prev, cur, depth, parity):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceCapError(f"path enumeration exceeded the work cap of {work_cap} partial paths")
        stack.append(cur)
        if depth == n:
            if cur == start and (parity == 0 or not require_even_multiplicity):
                paths.append(tuple(stack))
        else:
            for v, bit in nbrs[cur]:
                if v != prev:
                    dfs(start, cur, v, depth + 1, parity ^ bit)
        stack.pop()

    for u0 in range(graph.n_vertices):
        dfs(u0, -1, u0, 0, 0)
    return len(paths), paths


def signed_walk_sum(graph: RegularGraph, weights, u0: int, un: int, n: int,
                    work_cap: int = DEFAULT_WORK_CAP):
    """Sum over non-backtracking walks u0 -> un of length n of the weight products.

    Integer weights give an exact Python integer.
    """
    H = weights if isinstance(weights, HermitianMatrix) else build_matrix(graph, weights)
    dense = H.dense
    exact = np.issubdtype(dense.dtype, np.integer)
    entry = [[dense[u, v].item() for v in graph.adjacency[u]] for u in range(graph.n_vertices)]
    adj = graph.adjacency
    budget = [work_cap]
    total = [0]

    def dfs(prev, cur, depth, prod):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceCapError(f"walk enumeration exceeded the work cap of {work_cap} partial paths")
        if depth == n:
            if cur == un:
                total[0] += prod
            return
        for v, w in zip(adj[cur], entry[cur]):
            if v != prev:
                dfs(cur, v, depth + 1, prod * w)

    dfs(-1, u0, 0, 1)
    return total[0] if exact else complex(total[0]) if np.iscomplexobj(dense) else float(total[0])


def exact_sign_average_traces(graph: RegularGraph, n_max: int, max_edges: int = 24,
                              chunk: int = 4096) -> list[Fraction]:
    """``[E_S tr M^(n) for n = 0..n_max]`` averaged over all 2^{#E} sign patterns.

    Integer arithmetic throughout; the result is returned as exact fractions.
    """
    E = graph.n_edges
    if E > max_edges:
        raise ParameterError(f"exact sign averaging needs #edges <= {max_edges} (got {E})")
    N, d = graph.n_vertices, graph.degree
    edges = np.asarray(graph.edges, dtype=np.int64).reshape(-1, 2)
    total = 1 << E
    chunk = min(chunk, total)
    use_obj = chunk * _walk_bound(N, d, n_max) >= _INT64_SAFE
    sums = [0] * (n_max + 1)
    shifts = np.arange(E, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        signs = 1 - 2 * ((codes[:, None] >> shifts[None, :]) & 1)
        B = len(codes)
        A = np.zeros((B, N, N), dtype=np.int64)
        A[:, edges[:, 0], edges[:, 1]] = signs
        A[:, edges[:, 1], edges[:, 0]] = signs
        if use_obj:
            A = A.astype(object)
        eye = np.broadcast_to(np.eye(N, dtype=np.int64).astype(A.dtype), A.shape)
        mats = [eye, A]
        sums[0] += B * N
        for n in range(1, n_max + 1):
            if n == 1:
                cur = A
            elif n == 2:
                cur = A @ A - d * eye
            else:
                cur = A @ mats[-1] - (d - 1) * mats[-2]
            if n >= 2:
                mats = [mats[-1], cur]
            sums[n] += int(np.trace(cur, axis1=1, axis2=2).sum())
    return [Fraction(s, total) for s in sums]


@dataclass(frozen=True)
class SignAverageRecord:
    n: int
    path_count: int
    exact_sign_average: Fraction
    equal: bool

    def to_json(self) -> str:
        avg = self.exact_sign_average
        e_tr = int(avg) if avg.denominator == 1 else float(avg)
        return json.dumps({"n": self.n, "P_n": self.path_count, "E_tr": e_tr, "equal": self.equal},
                          separators=(",", ":"))


def verify_lemma1(graph: RegularGraph, n: int, max_edges: int = 24) -> SignAverageRecord:
    """Compare the brute-force path count with the exact sign-averaged trace."""
    return verify_lemma1_range(graph, n, max_edges)[n]


def verify_lemma1_range(graph: RegularGraph, n_max: int, max_edges: int = 24) -> list[SignAverageRecord]:
    if graph.n_edges > max_edges:
        raise ParameterError(f"exact sign averaging needs #edges <= {max_edges} (got {graph.n_edges})")
    counts = count_nb_closed_paths(graph, n_max, require_even_multiplicity=True)
    averages = exact_sign_average_traces(graph, n_max, max_edges=max_edges)
    return [SignAverageRecord(n, counts[n], averages[n], averages[n] == counts[n]) for n in range(n_max + 1)]

