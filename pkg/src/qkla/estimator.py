"""Generalised Kozachenko-Leonenko estimator of the non-additive entropy.

For each point the distance ``delta/2`` to its n-th nearest neighbour is found
in the sorted sample. With ``L = <ln_q delta>`` and ``B`` the expected
q-logarithm of the neighbour-window mass (a Gamma-function ratio), the pooled
estimate is ``(L - B) / (1 + (1-q) L)``; at q = 1 this is exactly the
classical ``psi(N) - psi(n) + <ln delta>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSampleError, DomainError, ParameterError, TieError
from .qmath import EntropicIndex, digamma, is_classical, log_gamma, q_log

AGGREGATIONS = ("pooled", "per_point")
JITTER_SCALE = 1e-12


@dataclass(frozen=True)
class SortedSample:
    """Ascending 1-D sample; construct with :meth:`from_values`."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ParameterError("a sample needs at least two values")
        if not np.all(np.isfinite(v)):
            raise DomainError("sample contains non-finite values")
        if np.any(np.diff(v) < 0):
            raise ParameterError("SortedSample values must be non-decreasing")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values, jitter=False, rng=None):
        """Sort arbitrary input; optionally add tiny uniform noise to break ties."""
        v = np.array(values, dtype=float).ravel()
        if jitter and v.size > 1:
            rng = rng if rng is not None else np.random.default_rng(0)
            amp = JITTER_SCALE * (np.std(v) or 1.0)
            v = v + rng.uniform(-amp, amp, size=v.size)
        return cls(np.sort(v))

    @property
    def N(self) -> int:
        return self.values.size

    def __len__(self):
        return self.N


@dataclass(frozen=True)
class DeltaSet:
    deltas: np.ndarray
    n: int

    @property
    def N(self) -> int:
        return self.deltas.size


@dataclass(frozen=True)
class KlaConfig:
    q: float
    n: int = 1
    aggregation: str = "pooled"

    def __post_init__(self):
        EntropicIndex(self.q)
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"neighbour order must be a positive integer, got {self.n}")
        if not self.q < self.n + 1:
            raise DomainError(f"need q < n + 1, got q={self.q}, n={self.n}")
        if self.aggregation not in AGGREGATIONS:
            raise ParameterError(f"aggregation must be one of {AGGREGATIONS}")

    @property
    def index(self) -> EntropicIndex:
        return EntropicIndex(self.q)


@dataclass(frozen=True)
class EstimateResult:
    S_hat: float
    q: float
    n: int
    N: int
    mean_q_log_delta: float
    lnq_pbar: float
    aggregation: str = "pooled"

    @property
    def Q(self) -> float:
        return 2.0 - self.q


def _as_sorted(sample) -> SortedSample:
    if isinstance(sample, SortedSample):
        return sample
    return SortedSample.from_values(sample)


def knn_deltas(sample, n: int) -> DeltaSet:
    """Twice the distance from every point to its n-th nearest neighbour.

    In a sorted array the n nearest neighbours of x[i] are a contiguous run
    x[i-j..i-1] and x[i+1..i+n-j] for some j, so the n-th distance is
    ``min over j of max(x[i] - x[i-j], x[i+n-j] - x[i])``. The scan is
    O(N n) after sorting; edge points get no correction.
    """
    s = _as_sorted(sample)
    x = s.values
    N = x.size
    if int(n) != n or not 1 <= n <= N - 1:
        raise ParameterError(f"neighbour order must satisfy 1 <= n <= N-1 = {N - 1}, got {n}")
    n = int(n)
    idx = np.arange(N)
    best = np.full(N, np.inf)
    for j in range(n + 1):
        # j neighbours on the left, n - j on the right; the n-th is the farther end
        lo = idx - j
        hi = idx + (n - j)
        ok = (lo >= 0) & (hi <= N - 1)
        left = np.where(ok, x - x[np.clip(lo, 0, N - 1)], np.inf)
        right = np.where(ok, x[np.clip(hi, 0, N - 1)] - x, np.inf)
        np.minimum(best, np.maximum(left, right), out=best)
    deltas = 2.0 * best
    if np.any(deltas <= 0):
        k = int(np.count_nonzero(deltas <= 0))
        raise TieError(f"{k} points have a zero n-th neighbour distance (duplicate values)")
    return DeltaSet(deltas, n)


def mean_q_log_delta(deltas, q: float) -> float:
    d = deltas.deltas if isinstance(deltas, DeltaSet) else np.asarray(deltas, dtype=float)
    return float(np.mean(q_log(d, q)))


def expected_q_log_mass(N: int, n: int, q: float) -> float:
    """Expectation of ln_q of the probability mass inside the n-th neighbour window.

    The mass is Beta(n, N-n) distributed, giving
    ``(1 - Gamma(N) Gamma(n+1-q) / (Gamma(n) Gamma(1+N-q))) / (q-1)``,
    evaluated in log-gamma space; the q -> 1 limit is ``psi(n) - psi(N)``.
    """
    if int(N) != N or N < 2:
        raise ParameterError(f"N must be an integer >= 2, got {N}")
    if int(n) != n or not 1 <= n <= N - 1:
        raise ParameterError(f"need 1 <= n <= N-1, got n={n}, N={N}")
    if not (n + 1 - q > 0 and 1 + N - q > 0):
        raise DomainError(f"Gamma arguments must be positive: n+1-q={n + 1 - q}, 1+N-q={1 + N - q}")
    if is_classical(q):
        return digamma(n) - digamma(N)
    g = log_gamma(N) + log_gamma(n + 1 - q) - log_gamma(n) - log_gamma(1 + N - q)
    return -math.expm1(g) / (q - 1.0)


def _estimate_from_deltas(d: np.ndarray, N: int, cfg: KlaConfig) -> EstimateResult:
    q = 1.0 if is_classical(cfg.q) else cfg.q
    lq = q_log(d, q)
    L = float(np.mean(lq))
    B = expected_q_log_mass(N, cfg.n, q)
    if cfg.aggregation == "pooled":
        den = 1.0 + (1.0 - q) * L
        if abs(den) < 1e-12:
            raise DegenerateSampleError("pooled denominator vanishes")
        S = (L - B) / den
    else:
        den = 1.0 + (1.0 - q) * lq
        if np.any(np.abs(den) < 1e-12):
            raise DegenerateSampleError("per-point denominator vanishes")
        S = float(np.mean((lq - B) / den))
    return EstimateResult(
        S_hat=float(S), q=cfg.q, n=cfg.n, N=N, mean_q_log_delta=L, lnq_pbar=B,
        aggregation=cfg.aggregation,
    )


def kla_estimate(sample, config: KlaConfig) -> EstimateResult:
    s = _as_sorted(sample)
    ds = knn_deltas(s, config.n)
    return _estimate_from_deltas(ds.deltas, s.N, config)


def kla_estimate_many(sample, qs, ns, aggregation="pooled") -> np.ndarray:
    """Estimates on a (len(qs), len(ns)) grid sharing the neighbour scans.

    Cells that violate a constraint hold NaN.
    """
    s = _as_sorted(sample)
    out = np.full((len(qs), len(ns)), np.nan)
    for jn, n in enumerate(ns):
        if not 1 <= n <= s.N - 1:
            continue
        d = knn_deltas(s, n).deltas
        for iq, q in enumerate(qs):
            if not q < n + 1:
                continue
            cfg = KlaConfig(q=q, n=n, aggregation=aggregation)
            out[iq, jn] = _estimate_from_deltas(d, s.N, cfg).S_hat
    return out


def binning_estimate(sample, q: float, bins="fd") -> float:
    """Plug-in histogram estimate -sum_j (c_j/N) ln_q(c_j / (N w)).

    ``bins`` is an int, a rule accepted by ``numpy.histogram_bin_edges``
    (default Freedman-Diaconis over [min, max]) or an explicit array of edges.
    Automatic binnings must produce at least two bins.
    """
    s = _as_sorted(sample)
    x = s.values
    if x[-1] == x[0]:
        raise DegenerateSampleError("zero sample range")
    if np.ndim(bins) == 1:
        edges = np.asarray(bins, dtype=float)
    else:
        edges = np.histogram_bin_edges(x, bins=bins, range=(x[0], x[-1]))
        if len(edges) < 3:
            raise DegenerateSampleError("binning estimate needs at least two bins")
    counts, edges = np.histogram(x, bins=edges)
    widths = np.diff(edges)
    keep = counts > 0
    frac = counts[keep] / s.N
    dens = frac / widths[keep]
    return float(-np.sum(frac * q_log(dens, q)))
