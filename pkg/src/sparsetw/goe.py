"""Gaussian orthogonal/unitary comparison ensembles.

Off-diagonal entries have E|A_uv|^2 = 1 throughout, so the spectral edge sits
near 2 sqrt(N).
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import ParameterError


def sample_goe_dense(N: int, rng: np.random.Generator, diagonal: str = "zero") -> np.ndarray:
    """Real symmetric GOE matrix; ``diagonal`` is ``"zero"`` or ``"gaussian"`` (variance 2)."""
    G = rng.standard_normal((N, N))
    A = (G + G.T) / np.sqrt(2.0)
    if diagonal == "zero":
        np.fill_diagonal(A, 0.0)
    elif diagonal != "gaussian":
        raise ParameterError(f"unknown diagonal convention {diagonal!r}")
    return A


def sample_gue_dense(N: int, rng: np.random.Generator) -> np.ndarray:
    G = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return (G + G.conj().T) / 2.0


def tridiagonal_beta(N: int, beta: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the tridiagonal beta-Hermite model.

    Same eigenvalue law as the dense ensemble with Gaussian diagonal
    (variance 2/beta) and unit off-diagonal second moment.
    """
    if beta not in (1, 2):
        raise ParameterError(f"beta must be 1 or 2 (got {beta})")
    diag = rng.normal(0.0, np.sqrt(2.0), size=N) / np.sqrt(beta)
    off = np.sqrt(rng.chisquare(beta * np.arange(N - 1, 0, -1))) / np.sqrt(beta)
    return diag, off


def largest_eigenvalue(N: int, beta: int, rng: np.random.Generator, sampler: str = "tridiagonal") -> float:
    if sampler == "tridiagonal":
        diag, off = tridiagonal_beta(N, beta, rng)
        return float(eigvalsh_tridiagonal(diag, off, select="i", select_range=(N - 1, N - 1))[0])
    if sampler == "dense":
        A = sample_goe_dense(N, rng, diagonal="gaussian") if beta == 1 else sample_gue_dense(N, rng)
        return float(np.linalg.eigvalsh(A)[-1])
    raise ParameterError(f"unknown sampler {sampler!r}")
