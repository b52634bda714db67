"""Series diagnostics: shuffling, autocorrelation, histograms and q-Gaussian fits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

from .errors import DegenerateSampleError, FitError, ParameterError
from .generators import Seed
from .qmath import is_classical

Q_GRID = np.round(np.arange(1.0, 1.9 + 1e-9, 0.02), 10)


def shuffle(series, seed: Seed) -> np.ndarray:
    """Uniform random permutation (Fisher-Yates via numpy)."""
    x = np.asarray(series, dtype=float)
    if x.size == 0:
        raise ParameterError("cannot shuffle an empty series")
    return seed.generator().permutation(x)


def autocorrelation(series, max_lag: int) -> np.ndarray:
    """rho(tau) = sum_t d_t d_{t+tau} / sum_t d_t^2 for tau = 0..max_lag."""
    x = np.asarray(series, dtype=float)
    if max_lag < 0 or x.size <= max_lag:
        raise ParameterError("series must be longer than max_lag")
    d = x - x.mean()
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise DegenerateSampleError("zero-variance series has no autocorrelation")
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    for k in range(1, max_lag + 1):
        rho[k] = np.dot(d[:-k], d[k:]) / denom
    return rho


def histogram(series, bins: int = 100, span: float = 6.0):
    """Density histogram on [-span*std, span*std] clipped to the data range.

    Returns (centers, density, counts, width).
    """
    x = np.asarray(series, dtype=float)
    if bins < 1:
        raise ParameterError("bins must be positive")
    sd = float(np.std(x))
    if sd == 0.0:
        raise DegenerateSampleError("zero-variance series")
    lim = min(span * sd, float(np.max(np.abs(x))))
    counts, edges = np.histogram(x, bins=bins, range=(-lim, lim))
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[1:] + edges[:-1])
    density = counts / (x.size * width)
    return centers, density, counts, width


def log_q_gaussian(x, q, beta, log_amp):
    """ln(A exp_q(-beta x^2)) for q >= 1."""
    x2 = np.asarray(x, dtype=float) ** 2
    if is_classical(q):
        return log_amp - beta * x2
    return log_amp - np.log1p((q - 1.0) * beta * x2) / (q - 1.0)


@dataclass(frozen=True)
class FitResult:
    q_fit: float
    beta_fit: float
    amplitude: float
    r_squared: float
    chi2_yates: float
    chi2_pvalue: float
    dof: int = 0
    bins_used: int = 0


def _profile(xs, ys, q):
    """Best (sse, log_beta, log_amp) at fixed q; log_amp is closed-form."""

    def sse(lb):
        f = log_q_gaussian(xs, q, np.exp(lb), 0.0)
        return float(np.sum((ys - np.mean(ys - f) - f) ** 2))

    res = optimize.minimize_scalar(sse, bounds=(-12.0, 8.0), method="bounded",
                                   options={"xatol": 1e-10})
    f = log_q_gaussian(xs, q, np.exp(res.x), 0.0)
    return res.fun, float(res.x), float(np.mean(ys - f))


def fit_log_density(xs, ys, q_bounds=(1.0, 1.9)):
    """Least-squares fit of ln(A exp_q(-beta x^2)) to log-density points.

    Returns (q, beta, amplitude, r_squared).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 5:
        raise FitError("need at least 5 usable bins")
    grid = Q_GRID[(Q_GRID >= q_bounds[0]) & (Q_GRID <= q_bounds[1])]
    prof = [_profile(xs, ys, q) for q in grid]
    best = int(np.argmin([p[0] for p in prof]))
    x0 = np.array([grid[best], prof[best][1], prof[best][2]])

    def resid(p):
        return log_q_gaussian(xs, p[0], np.exp(p[1]), p[2]) - ys

    lo = np.array([q_bounds[0], -12.0, -np.inf])
    hi = np.array([q_bounds[1], 8.0, np.inf])
    x0 = np.clip(x0, lo + 1e-12, hi - 1e-12)
    sol = optimize.least_squares(resid, x0, bounds=(lo, hi), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    q, lb, la = sol.x
    ss_res = float(np.sum(sol.fun ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(q), float(np.exp(lb)), float(np.exp(la)), r2


def fit_q_gaussian(series, bins: int = 100, span: float = 6.0, min_count: int = 5) -> FitResult:
    """Fit A exp_q(-beta x^2) to the histogram of ``series`` on the log scale.

    Only bins holding at least ``min_count`` points enter the fit: the log of
    a count of one or two is mostly Poisson noise and, being conditioned on a
    non-empty bin, biased upward, which pulls thin-tailed fits toward q > 1.
    R^2 refers to the log-density. The goodness of fit uses Yates'
    continuity-corrected chi^2 over bins whose expected count is at least 5.
    """
    x = np.asarray(series, dtype=float)
    if bins < 20:
        raise ParameterError("use at least 20 bins")
    centers, density, counts, width = histogram(x, bins=bins, span=span)
    if min_count < 1:
        raise ParameterError("min_count must be >= 1")
    keep = counts >= min_count
    if np.count_nonzero(keep) < 5:
        raise FitError(f"fewer than 5 bins with at least {min_count} points")
    q, beta, amp, r2 = fit_log_density(centers[keep], np.log(density[keep]))
    expected = x.size * width * np.exp(log_q_gaussian(centers, q, beta, np.log(amp)))
    usable = expected >= 5.0
    k = int(np.count_nonzero(usable))
    if k < 5:
        raise FitError("fewer than 5 bins with expected count >= 5")
    O, E = counts[usable], expected[usable]
    chi2 = float(np.sum((np.abs(O - E) - 0.5) ** 2 / E))
    dof = max(k - 1 - 3, 1)
    pval = float(stats.chi2.sf(chi2, dof))
    return FitResult(q_fit=q, beta_fit=beta, amplitude=amp, r_squared=r2,
                     chi2_yates=chi2, chi2_pvalue=pval, dof=dof, bins_used=k)


def fit_qc_exponential(rho, floor: float = 0.02):
    """Fit A exp_qc(-lambda tau) to rho[1:] up to the first lag where rho < floor.

    Returns (q_c, lambda, A). Meant for the squared-return autocorrelation,
    where the decay is slower than exponential.
    """
    r = np.asarray(rho, dtype=float)[1:]
    below = np.nonzero(r < floor)[0]
    stop = int(below[0]) if below.size else r.size
    if stop < 5:
        raise FitError("autocorrelation drops below the floor within 5 lags")
    tau = np.arange(1, stop + 1, dtype=float)
    r = r[:stop]

    def resid(p):
        qc, lam, amp = p
        return amp * np.power(1.0 + (qc - 1.0) * lam * tau, -1.0 / (qc - 1.0)) - r

    sol = optimize.least_squares(resid, [1.5, 0.5, r[0]],
                                 bounds=([1.0 + 1e-6, 1e-6, 1e-6], [5.0, 50.0, 50.0]))
    qc, lam, amp = sol.x
    return float(qc), float(lam), float(amp)
