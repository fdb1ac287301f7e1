"""Counter-based seed derivation and RNG construction.

Every Monte Carlo loop in the package draws sample ``i`` from a generator
seeded with ``derive_seed(master, i)``, so results do not depend on how the
samples are split between workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

T = TypeVar("T")
R = TypeVar("R")


def splitmix64(x: int) -> int:
    """One SplitMix64 output step applied to the 64-bit state ``x``."""
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """64-bit seed for stream ``index`` under ``master``."""
    return splitmix64(splitmix64(master & _MASK) ^ (index & _MASK))


def as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK))


def sample_generator(master: int, index: int) -> np.random.Generator:
    return as_generator(derive_seed(master, index))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Ordered map, optionally over a thread pool.

    Output order follows ``items`` regardless of ``threads``.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
