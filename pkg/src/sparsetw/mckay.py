"""McKay's bounds on the probability that a random regular graph contains a subgraph."""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError, ResourceCapError
from .graph import _pairing_attempt, check_parameters
from .rng import parallel_map, sample_generator

EULER_E = math.e


@dataclass(frozen=True)
class SubgraphPattern:
    """A fixed labelled subgraph L of the complete graph K_N."""

    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        canon = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        if any(u == v for u, v in canon):
            raise ParameterError("pattern has a self-loop")
        if len(set(canon)) != len(canon):
            raise ParameterError("pattern has a repeated edge")
        object.__setattr__(self, "edges", canon)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for e in self.edges for v in e}))

    @property
    def degrees(self) -> dict[int, int]:
        deg: dict[int, int] = {}
        for u, v in self.edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return deg

    @property
    def n_edges(self) -> int:
        return len(self.edges)


NAMED_PATTERNS = {
    "edge": SubgraphPattern(((0, 1),), "edge"),
    "2-path": SubgraphPattern(((0, 1), (1, 2)), "2-path"),
    "3-path": SubgraphPattern(((0, 1), (1, 2), (2, 3)), "3-path"),
    "triangle": SubgraphPattern(((0, 1), (1, 2), (0, 2)), "triangle"),
}


def pattern_from_name(name: str) -> SubgraphPattern:
    try:
        return NAMED_PATTERNS[name]
    except KeyError:
        raise ParameterError(f"unknown pattern {name!r}; expected one of {sorted(NAMED_PATTERNS)}") from None


def falling_factorial(a: int, b: int) -> int:
    """a (a-1) ... (a-b+1), exactly."""
    if b < 0:
        raise ParameterError("falling factorial needs b >= 0")
    if b > a >= 0:
        warnings.warn(f"falling factorial {a}^[{b}] with b > a is 0", stacklevel=2)
        return 0
    out = 1
    for i in range(b):
        out *= a - i
    return out


def log_falling_factorial(a: float, b: int) -> float:
    return math.lgamma(a + 1) - math.lgamma(a - b + 1)


@dataclass(frozen=True)
class FlBounds:
    lower: float
    upper: float
    base: float
    xi: float
    Xi: float
    clamped: bool = False


def fl_bounds(pattern: SubgraphPattern, N: int, d: int) -> FlBounds:
    """Lower and upper bounds on the containment probability F_L.

    Refuses inputs outside E_G - E_L >= 3 d (d+1) or with a pattern degree
    above d, where the bounds are not claimed.
    """
    E_G = d * N // 2
    E_L = pattern.n_edges
    if E_G - E_L < 3 * d * (d + 1):
        raise ParameterError(
            f"bounds need E_G - E_L >= 3d(d+1): E_G={E_G}, E_L={E_L}, 3d(d+1)={3 * d * (d + 1)}"
        )
    degs = pattern.degrees
    if any(l > d for l in degs.values()):
        raise ParameterError("pattern has a vertex of degree > d")
    if any(v >= N for v in pattern.vertices):
        raise ParameterError("pattern vertex label >= N")
    if E_L <= 30:
        num = 1
        for l in degs.values():
            num *= falling_factorial(d, l)
        base_q = Fraction(num, 2**E_L * falling_factorial(E_G, E_L))
        Xi_q = Fraction(falling_factorial(E_G, E_L), falling_factorial(E_G - 2 * d * d, E_L))
        ratio_q = Fraction(falling_factorial(E_G, E_L), falling_factorial(E_G - 1, E_L))
        base, Xi, ratio = float(base_q), float(Xi_q), float(ratio_q)
    else:
        log_num = sum(log_falling_factorial(d, l) for l in degs.values())
        base = math.exp(log_num - E_L * math.log(2) - log_falling_factorial(E_G, E_L))
        Xi = math.exp(log_falling_factorial(E_G, E_L) - log_falling_factorial(E_G - 2 * d * d, E_L))
        ratio = math.exp(log_falling_factorial(E_G, E_L) - log_falling_factorial(E_G - 1, E_L))
    top = 1 - d * (d + 1) / (2 * (E_G - E_L - 2 * d * (d + 1)))
    bottom = 1 + d * d / (2 * (E_G - 2 * d * d - (EULER_E - 1) / EULER_E * E_L))
    xi = (top / bottom) ** E_L * ratio
    lower = xi * base
    clamped = lower < 0
    return FlBounds(max(lower, 0.0), Xi * base, base, xi, Xi, clamped)


def _edge_keys(n: int, d: int, rng: np.random.Generator, max_restarts: int) -> np.ndarray:
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for _ in range(max_restarts):
        key = _pairing_attempt(stubs, n, rng)
        if key is not None:
            return key
    raise ResourceCapError(f"no simple pairing after {max_restarts} restarts for N={n}, d={d}")


@dataclass(frozen=True)
class FrequencyEstimate:
    estimate: float
    standard_error: float
    hits: int
    n_samples: int


def mc_containment(patterns: Sequence[SubgraphPattern], N: int, d: int, n_samples: int, seed: int,
                   threads: int = 1, max_restarts: int = 10**6) -> list[FrequencyEstimate]:
    """Containment frequencies of several patterns over the same graph samples."""
    check_parameters(N, d)
    for p in patterns:
        if any(v >= N for v in p.vertices):
            raise ParameterError(f"pattern {p.name or p.edges} uses a label >= N")
    keys = [np.array(sorted(u * N + v for u, v in p.edges), dtype=np.int64) for p in patterns]

    def one(i: int) -> list[bool]:
        g = _edge_keys(N, d, sample_generator(seed, i), max_restarts)
        out = []
        for k in keys:
            pos = np.searchsorted(g, k)
            out.append(bool(np.all(pos < len(g)) and np.all(g[np.minimum(pos, len(g) - 1)] == k)))
        return out

    chunks = [range(a, min(n_samples, a + 1000)) for a in range(0, n_samples, 1000)]
    rows = parallel_map(lambda r: [one(i) for i in r], chunks, threads)
    hits = np.zeros(len(patterns), dtype=np.int64)
    for block in rows:
        hits += np.sum(np.array(block, dtype=bool).reshape(-1, len(patterns)), axis=0)
    out = []
    for h in hits.tolist():
        p = h / n_samples
        out.append(FrequencyEstimate(p, math.sqrt(max(p * (1 - p), 0.0) / n_samples), h, n_samples))
    return out


def mc_subgraph_frequency(pattern: SubgraphPattern, N: int, d: int, n_samples: int, seed: int,
                          threads: int = 1) -> FrequencyEstimate:
    """Fraction of sampled graphs that contain the labelled pattern."""
    return mc_containment([pattern], N, d, n_samples, seed, threads)[0]


def single_edge_probability(N: int, d: int) -> Fraction:
    """Exact containment probability of one fixed edge: d N / 2 edges over C(N, 2) slots."""
    return Fraction(d, N - 1)


@dataclass(frozen=True)
class McKayCheck:
    pattern: str
    N: int
    d: int
    bounds: FlBounds
    frequency: FrequencyEstimate
    sigmas: float = 3.0

    @property
    def within_bounds(self) -> bool:
        """Sandwich test with the binomial error evaluated at the bound being tested.

        The plug-in error of the estimate collapses to zero on zero hits, which
        rare patterns produce routinely.
        """
        f, n = self.frequency.estimate, self.frequency.n_samples
        lo, hi = self.bounds.lower, min(self.bounds.upper, 1.0)
        s_lo = math.sqrt(lo * (1 - lo) / n)
        s_hi = math.sqrt(hi * (1 - hi) / n)
        return lo - self.sigmas * s_lo <= f <= self.bounds.upper + self.sigmas * s_hi

    def as_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "N": self.N,
            "d": self.d,
            "lower": self.bounds.lower,
            "upper": self.bounds.upper,
            "estimate": self.frequency.estimate,
            "stderr": self.frequency.standard_error,
            "within_bounds": self.within_bounds,
            "lower_clamped": self.bounds.clamped,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), separators=(",", ":"))


def mckay_check(patterns: Iterable[SubgraphPattern], N: int, d: int, n_samples: int, seed: int,
                threads: int = 1) -> list[McKayCheck]:
    patterns = list(patterns)
    bounds = [fl_bounds(p, N, d) for p in patterns]
    freqs = mc_containment(patterns, N, d, n_samples, seed, threads)
    return [McKayCheck(p.name or str(p.edges), N, d, b, f) for p, b, f in zip(patterns, bounds, freqs)]
