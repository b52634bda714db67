"""Ensemble sweeps over (q, N, n) cells.

One sample is drawn per (N, replica) and reused for every q and n, so cells
within a sweep share random numbers. Replica seeds depend only on the base
seed, the sample size and the replica index; results are reduced in replica
order, which makes the output independent of the number of workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .analysis import shuffle
from .errors import NumericError, ParameterError, QklaError
from .estimator import AGGREGATIONS, SortedSample, binning_estimate, kla_estimate_many
from .generators import Seed, raw_values
from .processes import ArchParams, FellerParams, simulate_feller, simulate_qarch, stationary_entropy
from .theory import q_gaussian_beta_for_variance, q_gaussian_entropy, ref_entropy

IID = ("gaussian", "student_t3", "uniform")
PROCESSES = ("feller", "qarch")
ESTIMATORS = ("kla", "binning")
#: Reference law for the q-ARCH marginal: unit-variance (q = 1.54)-Gaussian.
QARCH_REFERENCE_INDEX = 1.54
SHUFFLE_TAG = 0x5348


@dataclass(frozen=True)
class SweepSpec:
    dist: str
    q_grid: tuple
    N_list: tuple
    n_list: tuple = (1,)
    replicas: int = 1000
    seed: int = 42
    aggregation: str = "pooled"
    out: str | None = None
    fig: str = "sweep"
    estimator: str = "kla"
    shuffle: bool = False
    workers: int = 1
    process: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("q_grid", "N_list", "n_list"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "N_list", tuple(int(N) for N in self.N_list))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if self.dist not in IID + PROCESSES:
            raise ParameterError(f"unknown dist {self.dist!r}")
        if not self.q_grid or not self.N_list or not self.n_list:
            raise ParameterError("q_grid, N_list and n_list must be non-empty")
        if self.replicas < 1:
            raise ParameterError("replicas must be >= 1")
        if self.aggregation not in AGGREGATIONS:
            raise ParameterError(f"aggregation must be one of {AGGREGATIONS}")
        if self.estimator not in ESTIMATORS:
            raise ParameterError(f"estimator must be one of {ESTIMATORS}")
        if self.shuffle and self.dist not in PROCESSES:
            raise ParameterError("shuffle applies to process series only")
        if any(N < 2 for N in self.N_list):
            raise ParameterError("every N must be >= 2")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ParameterError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_mapping(cls, m: dict) -> "SweepSpec":
        names = {f.name for f in fields(cls)}
        unknown = set(m) - names
        if unknown:
            raise ParameterError(f"unknown sweep keys: {sorted(unknown)}")
        return cls(**m)


@dataclass(frozen=True)
class EnsembleResult:
    q: float
    N: int
    n: int
    S_star: float = math.nan
    S_hat_mean: float = math.nan
    S_hat_std: float = math.nan
    ratio_mean: float = math.nan
    ratio_std: float = math.nan
    replicas: int = 0
    seed: int = 0
    status: str = "ok"

    @property
    def Q(self) -> float:
        return 2.0 - self.q

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def reference_entropy(spec: SweepSpec, q: float) -> float:
    if spec.dist in IID:
        return ref_entropy(spec.dist, q)
    if spec.dist == "feller":
        return stationary_entropy(q, _feller_params(spec, 2, 0))
    beta = q_gaussian_beta_for_variance(QARCH_REFERENCE_INDEX, 1.0)
    return q_gaussian_entropy(q, QARCH_REFERENCE_INDEX, beta)


def _feller_params(spec, N, r):
    kw = dict(spec.process)
    base = FellerParams.standard() if not kw else None
    seed = Seed(spec.seed, r).child(N)
    if base is not None:
        return replace(base, length=N, seed=seed)
    return FellerParams(length=N, seed=seed, **kw)


def _arch_params(spec, N, r):
    kw = dict(spec.process)
    seed = Seed(spec.seed, r).child(N)
    if not kw:
        return ArchParams.standard(length=N, seed=seed)
    return ArchParams(length=N, seed=seed, **kw)


def generate_series(spec: SweepSpec, N: int, r: int) -> np.ndarray:
    """Replica ``r`` of size ``N`` (generation order, unsorted)."""
    if spec.dist in IID:
        return raw_values(spec.dist, N, Seed(spec.seed, r).child(N))
    if spec.dist == "feller":
        return simulate_feller(_feller_params(spec, N, r))
    return simulate_qarch(_arch_params(spec, N, r))


def estimate_series(values, spec: SweepSpec):
    """(len(q_grid), len(n_list)) estimates plus per-cell error names."""
    qs, ns = spec.q_grid, spec.n_list
    errs = {}
    try:
        sample = SortedSample.from_values(values)
    except QklaError as e:
        return np.full((len(qs), len(ns)), np.nan), {"*": type(e).__name__}
    if spec.estimator == "binning":
        out = np.full((len(qs), len(ns)), np.nan)
        for i, q in enumerate(qs):
            try:
                out[i, :] = binning_estimate(sample, q)
            except NumericError as e:
                errs[(i, None)] = type(e).__name__
        return out, errs
    try:
        return kla_estimate_many(sample, qs, ns, spec.aggregation), errs
    except NumericError as e:
        return np.full((len(qs), len(ns)), np.nan), {"*": type(e).__name__}


def _replica_task(args):
    spec, N, r = args
    return estimate_series(generate_series(spec, N, r), spec)


def _series_task(args):
    spec, N, r = args
    return generate_series(spec, N, r)


def _estimate_task(args):
    spec, values = args
    return estimate_series(values, spec)


def _map(fn, items, workers):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def pooled_shuffle(series_list, seed: Seed):
    """Pool equal-length series, permute the pool, deal it back out.

    The 1-D estimator only sees sorted values, so permuting a single series
    cannot change its estimate; mixing the replicas of one stationary process
    is what removes the within-set dependence while keeping the marginal.
    """
    lengths = {len(s) for s in series_list}
    if len(lengths) != 1:
        raise ParameterError("pooled shuffle needs equal-length series")
    pool = shuffle(np.concatenate(series_list), seed)
    return list(pool.reshape(len(series_list), -1))


def _cell_stats(vals, S_star):
    k = vals.size
    mean = float(np.mean(vals))
    std = float(np.std(vals, ddof=1)) if k > 1 else 0.0
    ratio_mean = mean / S_star
    ratio_std = std / abs(S_star)
    return mean, std, ratio_mean, ratio_std


def replica_estimates(spec: SweepSpec, N: int):
    """Per-replica estimates, shape (replicas, len(q_grid), len(n_list)), and per-replica errors."""
    R = spec.replicas
    if spec.shuffle:
        series = _map(_series_task, [(spec, N, r) for r in range(R)], spec.workers)
        series = pooled_shuffle(series, Seed(spec.seed).child(N, SHUFFLE_TAG))
        per_rep = _map(_estimate_task, [(spec, s) for s in series], spec.workers)
    else:
        per_rep = _map(_replica_task, [(spec, N, r) for r in range(R)], spec.workers)
    return np.stack([p[0] for p in per_rep]), [p[1] for p in per_rep]


def run_sweep(spec: SweepSpec) -> list[EnsembleResult]:
    qs, ns = spec.q_grid, spec.n_list
    results = []
    for N in spec.N_list:
        est, errors = replica_estimates(spec, N)
        for i, q in enumerate(qs):
            for j, n in enumerate(ns):
                results.append(_aggregate_cell(spec, q, N, n, est[:, i, j], errors, i, j))
    return results


def _skip(spec, q, N, n, reason):
    return EnsembleResult(q=q, N=N, n=n, replicas=spec.replicas, seed=spec.seed,
                          status=f"skipped:{reason}")


def _aggregate_cell(spec, q, N, n, vals, errors, i, j):
    if spec.estimator == "kla":
        if not 1 <= n <= N - 1:
            return _skip(spec, q, N, n, "n_out_of_range")
        if not q < n + 1:
            return _skip(spec, q, N, n, "q_ge_n_plus_1")
    try:
        S_star = reference_entropy(spec, q)
    except NumericError:
        return _skip(spec, q, N, n, "outside_validity")
    if S_star == 0.0 or not math.isfinite(S_star):
        return _skip(spec, q, N, n, "zero_reference")
    if np.any(np.isnan(vals)):
        names = sorted({e for err in errors for k, e in err.items()
                        if k == "*" or k == (i, j) or k == (i, None)})
        return _skip(spec, q, N, n, "estimate_failed" + (":" + "+".join(names) if names else ""))
    mean, std, rmean, rstd = _cell_stats(vals, S_star)
    return EnsembleResult(q=q, N=N, n=n, S_star=S_star, S_hat_mean=mean, S_hat_std=std,
                          ratio_mean=rmean, ratio_std=rstd, replicas=spec.replicas,
                          seed=spec.seed)
