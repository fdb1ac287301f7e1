"""Spectra of signed regular graphs, their scaled edge statistics, and KS tests."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import ParameterError, ResourceCapError
from .goe import largest_eigenvalue, sample_goe_dense, sample_gue_dense, tridiagonal_beta
from .graph import check_parameters, sample_regular_graph
from .rng import derive_seed, parallel_map, sample_generator
from .weights import HermitianMatrix, WeightEnsemble, random_matrix

HERMITIAN_TOL = 1e-10
MAX_DENSE_N = 20000
CSV_HEADER = ("sample_index", "lambda_min", "lambda_max", "scaled_min", "scaled_max", "seed")


def eigenvalues(matrix) -> np.ndarray:
    """Full ascending spectrum of a Hermitian matrix (dense LAPACK solve)."""
    A = matrix.dense if isinstance(matrix, HermitianMatrix) else np.asarray(matrix)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.abs(A).max())) if A.size else 1.0
    if A.size and float(np.abs(A - A.conj().T).max()) > HERMITIAN_TOL * scale:
        raise ParameterError("matrix is not Hermitian within 1e-10")
    if np.issubdtype(A.dtype, np.integer):
        A = A.astype(float)
    return np.linalg.eigvalsh(A)


def _edge_scale(N: float, d: int) -> float:
    if d < 3:
        raise ParameterError(f"degree must satisfy d >= 3 (got d={d})")
    return 2.0 * (d * (d - 1) * N / (d - 2) ** 2) ** (2.0 / 3.0)


def scaled_max(lambda_max: float, N: int, d: int) -> float:
    """2 (d(d-1) N / (d-2)^2)^(2/3) (lambda_N / (2 sqrt(d-1)) - 1)."""
    return _edge_scale(N, d) * (lambda_max / (2.0 * math.sqrt(d - 1)) - 1.0)


def scaled_min(lambda_min: float, N: int, d: int) -> float:
    """Mirror of ``scaled_max``: -2 (...)^(2/3) (lambda_1 / (2 sqrt(d-1)) + 1)."""
    return -_edge_scale(N, d) * (lambda_min / (2.0 * math.sqrt(d - 1)) + 1.0)


def goe_scaled_edge(lambda_max: float, N_prime: int) -> float:
    """2 N'^(2/3) (lambda_max / (2 sqrt(N' - 2)) - 1)."""
    return 2.0 * N_prime ** (2.0 / 3.0) * (lambda_max / (2.0 * math.sqrt(N_prime - 2)) - 1.0)


@dataclass(frozen=True)
class SpectralSample:
    eigenvalues: np.ndarray
    N: int
    d: int
    ensemble: str
    seed: int

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])


@dataclass(frozen=True)
class ScaledSample:
    sample_index: int
    seed: int
    lambda_min: float
    lambda_max: float
    scaled_min: float
    scaled_max: float
    # statistic of the second largest eigenvalue; exploratory, for all-ones weights
    scaled_second: float | None = None

    def row(self) -> tuple:
        return (self.sample_index, repr(self.lambda_min), repr(self.lambda_max),
                repr(self.scaled_min), repr(self.scaled_max), self.seed)


def spectral_sample(N: int, d: int, ensemble: WeightEnsemble, master: int, index: int) -> SpectralSample:
    seed = derive_seed(master, index)
    rng = sample_generator(master, index)
    graph = sample_regular_graph(N, d, rng)
    H = random_matrix(graph, ensemble, rng)
    return SpectralSample(eigenvalues(H), N, d, ensemble.label, seed)


def _scale_sample(s: SpectralSample, index: int, second: bool) -> ScaledSample:
    lo, hi = s.lambda_min, s.lambda_max
    sec = scaled_max(float(s.eigenvalues[-2]), s.N, s.d) if second else None
    return ScaledSample(index, s.seed, lo, hi, scaled_min(lo, s.N, s.d), scaled_max(hi, s.N, s.d), sec)


def ensemble_scaled_statistics(N: int, d: int, ensemble: WeightEnsemble, n_samples: int, seed: int,
                               threads: int = 1, max_n: int = MAX_DENSE_N) -> list[ScaledSample]:
    """Scaled extreme eigenvalues for ``n_samples`` independent (graph, weights) draws."""
    check_parameters(N, d)
    if n_samples < 1:
        raise ParameterError("n_samples must be >= 1")
    if N > max_n:
        raise ResourceCapError(f"dense eigensolve at N={N} exceeds the cap N <= {max_n}")
    second = ensemble.kind == "all-ones"
    return parallel_map(
        lambda i: _scale_sample(spectral_sample(N, d, ensemble, seed, i), i, second), range(n_samples), threads
    )


def goe_scaled_statistics(N_prime: int, n_samples: int, seed: int, beta: int = 1,
                          sampler: str = "tridiagonal", threads: int = 1) -> np.ndarray:
    """Scaled largest eigenvalues of the Gaussian beta-ensemble at size N'."""
    if beta not in (1, 2):
        raise ParameterError(f"beta must be 1 or 2 (got {beta})")
    if N_prime < 4:
        raise ParameterError(f"N' must be >= 4 (got {N_prime})")
    if sampler == "dense" and N_prime > MAX_DENSE_N:
        raise ResourceCapError(f"dense GOE at N'={N_prime} exceeds the cap N' <= {MAX_DENSE_N}")
    vals = parallel_map(
        lambda i: goe_scaled_edge(largest_eigenvalue(N_prime, beta, sample_generator(seed, i), sampler), N_prime),
        range(n_samples), threads,
    )
    return np.asarray(vals)


@dataclass(frozen=True)
class KSResult:
    statistic: float
    threshold: float
    alpha: float

    @property
    def passed(self) -> bool:
        return self.statistic <= self.threshold

    def as_dict(self) -> dict:
        return {"statistic": self.statistic, "threshold": self.threshold, "alpha": self.alpha, "passed": self.passed}


def ks_critical_value(alpha: float) -> float:
    """Asymptotic constant c(alpha) = sqrt(-ln(alpha / 2) / 2); c(0.01) = 1.628."""
    return math.sqrt(-math.log(alpha / 2.0) / 2.0)


def ks_two_sample(a, b, alpha: float = 0.01) -> KSResult:
    """Sup-distance between the empirical CDFs of ``a`` and ``b``."""
    x = np.sort(np.asarray(a, dtype=float))
    y = np.sort(np.asarray(b, dtype=float))
    m, n = len(x), len(y)
    if m == 0 or n == 0:
        raise ParameterError("both samples must be nonempty")
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / m
    fy = np.searchsorted(y, grid, side="right") / n
    stat = float(np.abs(fx - fy).max())
    return KSResult(stat, ks_critical_value(alpha) * math.sqrt((m + n) / (m * n)), alpha)


def samples_to_csv(samples: list[ScaledSample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_HEADER)
    for s in samples:
        w.writerow(s.row())
    return buf.getvalue()


def summary(values) -> dict:
    v = np.asarray(values, dtype=float)
    n = len(v)
    var = float(v.var(ddof=1)) if n > 1 else float("nan")
    return {"n": n, "mean": float(v.mean()), "variance": var, "stderr": math.sqrt(var / n) if n > 1 else float("nan")}


def goe_full_spectrum(N_prime: int, rng: np.random.Generator, beta: int = 1, sampler: str = "dense") -> np.ndarray:
    """Whole GOE/GUE spectrum, for sampler cross-checks."""
    if sampler == "tridiagonal":
        return eigvalsh_tridiagonal(*tridiagonal_beta(N_prime, beta, rng))
    A = sample_goe_dense(N_prime, rng, diagonal="gaussian") if beta == 1 else sample_gue_dense(N_prime, rng)
    return np.linalg.eigvalsh(A)
