"""Trace moments: closed-form series, the path-count upper bound, and Monte Carlo.

For a d-regular graph and x = M / (2 sqrt(d-1)) the Chebyshev traces and the
non-backtracking traces are related by

    U_{2n}(x) = (d-1)^{-n} (M^(0) + M^(2) + ... + M^(2n)),

so ``tr U_{2n}`` carries an extra ``N / (d-1)^n`` beyond the path counts.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .diagrams import D1_TABLE, d1_value
from .errors import ParameterError, ResourceCapError
from .goe import sample_goe_dense, tridiagonal_beta
from .graph import check_parameters, sample_regular_graph
from .nbwalk import chebyshev_u_traces, chebyshev_u_values
from .rng import parallel_map, sample_generator
from .weights import WeightEnsemble, random_matrix

S_TERMS_DEFAULT = min(6, max(D1_TABLE))
EXACT_MAX_N = 2000
DEFAULT_PROBES = 64
DEFAULT_WORK_CAP = 10**13


def n_prime(N: int, d: int) -> int:
    """Matched GOE dimension floor(d (d-1) N / (d-2)^2)."""
    if d < 3:
        raise ParameterError(f"degree must satisfy d >= 3 (got d={d})")
    return (d * (d - 1) * N) // ((d - 2) ** 2)


def _check_terms(s_terms: int) -> None:
    if s_terms < 1:
        raise ParameterError("s_terms must be >= 1")
    if s_terms > max(D1_TABLE):
        raise ParameterError(f"D1(s) is tabulated only for s <= {max(D1_TABLE)} (asked for {s_terms})")


def _log_sum(logs: list[float]) -> float:
    top = max(logs)
    return top + math.log(math.fsum(math.exp(v - top) for v in logs))


def series_p2n_terms(N: int, d: int, n: int, s_terms: int = S_TERMS_DEFAULT) -> list[float]:
    """Logarithms of the individual series terms for E P_{2n}."""
    _check_terms(s_terms)
    out = []
    for s in range(1, s_terms + 1):
        out.append(
            n * math.log(d - 1)
            + (2 * s - 1) * math.log(d - 2)
            - (s - 1) * math.log(d)
            - s * math.log(d - 1)
            - (s - 1) * math.log(N)
            + (3 * s - 2) * math.log(n)
            - math.lgamma(3 * s - 1)
            + math.log(d1_value(s))
        )
    return out


def log_series_p2n(N: int, d: int, n: int, s_terms: int = S_TERMS_DEFAULT) -> float:
    return _log_sum(series_p2n_terms(N, d, n, s_terms))


def series_p2n(N: int, d: int, n: int, s_terms: int = S_TERMS_DEFAULT) -> float:
    """Asymptotic series for the expected number of closed even NB paths of length 2n.

    Overflows to ``inf`` when (d-1)^n leaves double range; use ``log_series_p2n`` there.
    """
    try:
        return math.exp(log_series_p2n(N, d, n, s_terms))
    except OverflowError:
        return math.inf


def _series_u(x_log: float, n: int, s_terms: int) -> float:
    logs = [
        (s - 1) * x_log + math.log(d1_value(s)) - math.lgamma(3 * s - 1)
        for s in range(1, s_terms + 1)
    ]
    return n * math.exp(_log_sum(logs))


def series_trace_U(N: int, d: int, n: int, s_terms: int = S_TERMS_DEFAULT) -> float:
    """n * sum_s ((d-2)^2 n^3 / (d (d-1) N))^(s-1) D1(s) / (3s-2)!."""
    _check_terms(s_terms)
    if d < 3:
        raise ParameterError(f"degree must satisfy d >= 3 (got d={d})")
    x_log = 2 * math.log(d - 2) + 3 * math.log(n) - math.log(d) - math.log(d - 1) - math.log(N)
    return _series_u(x_log, n, s_terms)


def series_goe(N_prime: float, n: int, s_terms: int = S_TERMS_DEFAULT) -> float:
    """n * sum_s (n^3 / N')^(s-1) D1(s) / (3s-2)!; ``N_prime`` may be fractional."""
    _check_terms(s_terms)
    return _series_u(3 * math.log(n) - math.log(N_prime), n, s_terms)


def unfloored_n_prime(N: int, d: int) -> float:
    return d * (d - 1) * N / (d - 2) ** 2


def log_upper_bound_p2n(N: int, d: int, n: int, C: float) -> float:
    if n > N:
        raise ParameterError(f"the upper bound is stated for n <= N (got n={n}, N={N})")
    if d < 3:
        raise ParameterError(f"degree must satisfy d >= 3 (got d={d})")
    expo = C * n**1.5 / math.sqrt(N) * (1 + d / math.sqrt(n * N))
    return math.log(n) + math.log(d - 2) + (n - 1) * math.log(d - 1) + expo


def upper_bound_p2n(N: int, d: int, n: int, C: float) -> float:
    """n (d-2) (d-1)^(n-1) exp{C n^(3/2) / N^(1/2) (1 + d / sqrt(n N))}, valid for n <= N."""
    try:
        return math.exp(log_upper_bound_p2n(N, d, n, C))
    except OverflowError:
        return math.inf


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MeanEstimate:
    estimate: float
    standard_error: float
    n_samples: int

    @classmethod
    def from_samples(cls, values) -> "MeanEstimate":
        v = np.asarray(values, dtype=float)
        se = float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else float("nan")
        return cls(float(v.mean()), se, len(v))


@dataclass(frozen=True)
class TraceMoment:
    """Monte Carlo record for one trace order k (k = 2n for even moments)."""

    N: int
    d: int
    order: int
    ensemble: str
    estimator: str
    trace_u: MeanEstimate
    trace_nb: MeanEstimate
    samples_u: tuple[float, ...] = field(repr=False)
    samples_nb: tuple[float, ...] = field(repr=False)

    @property
    def normalized_nb(self) -> MeanEstimate:
        """tr M^(2n) / ((d-2)(d-1)^(n-1)), the path-count form of the U-series."""
        n = self.order // 2
        c = (self.d - 2) * (self.d - 1) ** (n - 1)
        return MeanEstimate(self.trace_nb.estimate / c, self.trace_nb.standard_error / c, self.trace_nb.n_samples)


def _trace_cost(N: int, d: int, order: int, n_samples: int, estimator: str, probes: int) -> float:
    cols = N if estimator == "exact" else probes
    return float(order) * d * N * cols * n_samples


def _resolve_estimator(N: int, estimator: str) -> str:
    if estimator == "auto":
        return "exact" if N <= EXACT_MAX_N else "hutchinson"
    if estimator not in ("exact", "hutchinson"):
        raise ParameterError(f"unknown estimator {estimator!r}")
    return estimator


def hutchinson_u_traces(op, d: int, order: int, probes: int, rng: np.random.Generator) -> np.ndarray:
    """Rademacher-probe estimates of ``[tr U_k(M / (2 sqrt(d-1))) for k <= order]``."""
    N = op.shape[0]
    Z = (2 * rng.integers(0, 2, size=(N, probes)) - 1).astype(float)
    scale = 1.0 / math.sqrt(d - 1)
    prev, cur = np.zeros_like(Z), Z
    out = np.empty(order + 1)
    out[0] = np.einsum("ij,ij->", Z, cur) / probes
    for k in range(1, order + 1):
        prev, cur = cur, scale * (op @ cur) - prev
        out[k] = np.real(np.einsum("ij,ij->", Z, cur)) / probes
    return out


def _traces_for_sample(N, d, ensemble, order, master, index, estimator, probes):
    rng = sample_generator(master, index)
    graph = sample_regular_graph(N, d, rng)
    H = random_matrix(graph, ensemble, rng)
    if estimator == "exact":
        tu = chebyshev_u_traces(H, d, order)
    else:
        tu = hutchinson_u_traces(H.sparse, d, order, probes, rng)
    return tu


def _nb_trace_from_u(tu: np.ndarray, d: int, k: int) -> float:
    if k == 0:
        return tu[0]
    if k == 1:
        return math.sqrt(d - 1) * tu[1]
    return (d - 1) ** (k / 2) * (tu[k] - tu[k - 2] / (d - 1))


def mc_trace_order(N: int, d: int, ensemble: WeightEnsemble, order: int, n_samples: int, seed: int,
                   estimator: str = "auto", probes: int = DEFAULT_PROBES, threads: int = 1,
                   work_cap: float = DEFAULT_WORK_CAP) -> TraceMoment:
    """Monte Carlo of tr U_k and tr M^(k) for one trace order ``k``."""
    check_parameters(N, d)
    if order < 0:
        raise ParameterError("order must be nonnegative")
    if n_samples < 2:
        raise ParameterError("need at least two samples")
    est = _resolve_estimator(N, estimator)
    cost = _trace_cost(N, d, order, n_samples, est, probes)
    if cost > work_cap:
        raise ResourceCapError(f"estimated work {cost:.3g} exceeds the cap {work_cap:.3g}")
    rows = parallel_map(
        lambda i: _traces_for_sample(N, d, ensemble, order, seed, i, est, probes), range(n_samples), threads
    )
    su = [float(r[order]) for r in rows]
    snb = [float(_nb_trace_from_u(r, d, order)) for r in rows]
    return TraceMoment(N, d, order, ensemble.label, est, MeanEstimate.from_samples(su),
                       MeanEstimate.from_samples(snb), tuple(su), tuple(snb))


def mc_trace_moment(N: int, d: int, ensemble: WeightEnsemble, n: int, n_samples: int, seed: int,
                    estimator: str = "auto", probes: int = DEFAULT_PROBES, threads: int = 1,
                    work_cap: float = DEFAULT_WORK_CAP) -> TraceMoment:
    """Monte Carlo of the even moment: tr U_{2n} and tr M^(2n)."""
    return mc_trace_order(N, d, ensemble, 2 * n, n_samples, seed, estimator, probes, threads, work_cap)


def _goe_trace_sample(N_prime: int, order: int, master: int, index: int, sampler: str) -> float:
    rng = sample_generator(master, index)
    if sampler == "dense":
        lam = np.linalg.eigvalsh(sample_goe_dense(N_prime, rng, diagonal="zero"))
    elif sampler == "tridiagonal":
        from scipy.linalg import eigvalsh_tridiagonal

        lam = eigvalsh_tridiagonal(*tridiagonal_beta(N_prime, 1, rng))
    else:
        raise ParameterError(f"unknown GOE sampler {sampler!r}")
    x = lam / (2.0 * math.sqrt(N_prime - 2))
    return float(chebyshev_u_values(x, order).sum())


def goe_sample_trace(N_prime: int, n: int, n_samples: int, seed: int, sampler: str = "dense",
                     threads: int = 1, order: int | None = None) -> MeanEstimate:
    """Monte Carlo of tr U_{2n}(A / (2 sqrt(N' - 2))) over the GOE.

    The default sampler has a zero diagonal and unit off-diagonal variance,
    for which E tr U_2 = N' / (N' - 2).  ``sampler="tridiagonal"`` draws the
    Gaussian-diagonal ensemble instead and is offered for edge statistics.
    """
    if N_prime < 4:
        raise ParameterError(f"N' must be >= 4 (got {N_prime})")
    k = 2 * n if order is None else order
    vals = parallel_map(lambda i: _goe_trace_sample(N_prime, k, seed, i, sampler), range(n_samples), threads)
    return MeanEstimate.from_samples(vals)


def moment_record(N: int, d: int, n: int, mc: MeanEstimate, series: float, params: dict | None = None) -> str:
    rel = abs(mc.estimate - series) / series if series else float("inf")
    obj = {"kind": "moment", "params": {"N": N, "d": d, "n": n, **(params or {})},
           "mc": mc.estimate, "stderr": mc.standard_error, "series": series, "rel_diff": rel}
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def as_dict(m: MeanEstimate) -> dict:
    return asdict(m)
