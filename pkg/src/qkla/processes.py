"""Dependent series: the Feller-like nonlinear diffusion and the kernel q-ARCH process.

Both recursions are sequential, so the inner loops are compiled with numba.
Gaussian innovations are drawn from the numpy generator of a :class:`Seed`
in fixed-size chunks; output depends only on the parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import DomainError, IntegrationError, ParameterError
from .generators import Seed
from .qmath import EPS_BRANCH, q_exp
from .theory import q_gaussian_entropy, q_gaussian_norm

CHUNK = 1 << 20


# --------------------------------------------------------------------------
# Feller-like SDE  dx = -gamma x dt + sqrt(theta) p_s(x)^{nu/2} dW


@dataclass(frozen=True)
class FellerParams:
    gamma: float = 0.01
    theta: float = 0.01 * math.sqrt(2.0 / math.pi)
    nu: float = -0.5
    dt: float | None = None
    burn_in: int | None = None
    stride: int | None = None
    length: int = 10_000
    seed: Seed = field(default_factory=lambda: Seed(0))
    x0: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0 or not self.theta > 0:
            raise ParameterError("gamma and theta must be positive")
        if not -2.0 < self.nu < 1.0:
            raise ParameterError("nu must lie in (-2, 1) for a normalisable density")
        if self.dt is None:
            object.__setattr__(self, "dt", 0.001 / self.gamma)
        if not 0 < self.dt <= 0.01 / self.gamma * (1 + 1e-12):
            raise ParameterError("dt must satisfy 0 < dt <= 0.01/gamma")
        if self.stride is None:
            object.__setattr__(self, "stride", max(1, round(1.0 / self.gamma)))
        if self.burn_in is None:
            # ten relaxation times
            object.__setattr__(self, "burn_in", int(math.ceil(10.0 / (self.gamma * self.dt))))
        if self.stride < 1 or self.burn_in < 0 or self.length < 1:
            raise ParameterError("stride >= 1, burn_in >= 0 and length >= 1 required")

    @property
    def q(self) -> float:
        """Index of the stationary q-Gaussian, q = 1 - nu."""
        return 1.0 - self.nu

    @classmethod
    def standard(cls, **kw) -> "FellerParams":
        """gamma = 1/100, theta = gamma sqrt(2/pi), nu = -1/2."""
        g = kw.pop("gamma", 0.01)
        return cls(gamma=g, theta=g * math.sqrt(2.0 / math.pi), nu=-0.5, **kw)


def stationary_constants(p: FellerParams) -> tuple[float, float]:
    """(Z, beta) of p_s(x) = exp_q(-beta x^2) / Z with beta = gamma Z^nu / ((1+nu) theta).

    Normalisation Z = C_q / sqrt(beta) closes to
    ``Z = (C_q sqrt((1+nu) theta / gamma))^{2/(2+nu)}`` with C_q the integral of
    exp_q(-x^2).
    """
    if abs(p.nu) <= EPS_BRANCH:
        beta = p.gamma / p.theta
        return math.sqrt(math.pi / beta), beta
    if p.nu <= -1.0:
        # beta would be non-positive: the stationary form exists only for nu > -1
        raise DomainError(f"stationary q-Gaussian needs nu > -1, got {p.nu}")
    c_q = q_gaussian_norm(p.q, 1.0)
    Z = (c_q * math.sqrt((1.0 + p.nu) * p.theta / p.gamma)) ** (2.0 / (2.0 + p.nu))
    beta = p.gamma * Z ** p.nu / ((1.0 + p.nu) * p.theta)
    return Z, beta


def stationary_density(x, p: FellerParams):
    Z, beta = stationary_constants(p)
    xa = np.asarray(x, dtype=float)
    val = q_exp(-beta * xa * xa, p.q) / Z
    return float(val) if np.ndim(x) == 0 else val


def stationary_entropy(q: float, p: FellerParams) -> float:
    """S*_{2-q} of the stationary law."""
    _, beta = stationary_constants(p)
    return q_gaussian_entropy(q, p.q, beta)


@numba.njit(cache=True)
def _feller_chunk(x, z, gamma, dt, sq, Z, beta, qs, nu, start, burn_in, stride, out, k):
    """Advance the Euler scheme over len(z) steps; returns (x, k, bad_step)."""
    one_mq = 1.0 - qs
    classical = abs(nu) <= 1e-8
    for i in range(z.size):
        if classical:
            g = 1.0
        else:
            base = 1.0 - one_mq * beta * x * x
            if base <= 0.0:
                g = 0.0
            else:
                # p_s(x)^{nu/2}
                g = math.exp(0.5 * nu * (math.log(base) / one_mq - math.log(Z)))
        x = x - gamma * x * dt + sq * g * z[i]
        if not math.isfinite(x) or abs(x) > 1e150:
            return x, k, start + i
        step = start + i
        if step >= burn_in and (step - burn_in) % stride == stride - 1:
            if k < out.size:
                out[k] = x
                k += 1
    return x, k, -1


def simulate_feller(p: FellerParams) -> np.ndarray:
    """Euler-Maruyama path sampled every ``stride`` steps after ``burn_in``."""
    Z, beta = stationary_constants(p)
    rng = p.seed.generator()
    total = p.burn_in + p.length * p.stride
    out = np.empty(p.length)
    x, k, done = float(p.x0), 0, 0
    sq = math.sqrt(p.theta * p.dt)
    while done < total:
        m = min(CHUNK, total - done)
        z = rng.standard_normal(m)
        x, k, bad = _feller_chunk(x, z, p.gamma, p.dt, sq, Z, beta, p.q, p.nu,
                                  done, p.burn_in, p.stride, out, k)
        if bad >= 0:
            raise IntegrationError(f"Feller trajectory diverged at step {bad}", step=bad)
        done += m
    return out


@dataclass(frozen=True)
class Relaxation:
    Z_t: float
    beta_t: float
    K: float
    tau: float


def relaxation_diagnostics(p: FellerParams, t: float, Z0: float, beta0: float) -> Relaxation:
    """Time-dependent normalisation Z_q(t), beta(t) = beta0 (Z0/Z_q(t))^2, K and tau.

    tau is the relaxation time 1/(gamma (2+nu)), of order 1/gamma.
    """
    if t < 0 or not Z0 > 0 or not beta0 > 0:
        raise ParameterError("need t >= 0, Z0 > 0, beta0 > 0")
    if 1.0 + p.nu == 0.0:
        raise DomainError("1 + nu = 0")
    K = p.gamma * Z0 ** p.nu / (beta0 * p.theta * (1.0 + p.nu))
    bracket = (1.0 - 1.0 / K) * math.exp(-p.gamma * t) + 1.0 / K
    Z_t = Z0 * bracket ** (1.0 / (2.0 + p.nu))
    beta_t = beta0 * (Z0 / Z_t) ** 2
    tau = 1.0 / (p.gamma * (2.0 + p.nu))
    return Relaxation(Z_t=Z_t, beta_t=beta_t, K=K, tau=tau)


# --------------------------------------------------------------------------
# kernel q-ARCH  x_t = sigma_t w_t,  sigma_t^2 = a + b sum_j K_j x_{t-j}^2

#: Kernel time scale in steps. With zeta = 1.375, b = 0.9375 the marginal fits a
#: q close to 1.54; scripts/calibrate_qarch_T.py scans other values.
DEFAULT_T = 1.0
MAX_WINDOW = 10_000
WINDOW_TOL = 1e-8


@dataclass(frozen=True)
class ArchParams:
    a: float = 0.0625
    b: float = 0.9375
    zeta: float = 1.375
    T: float = DEFAULT_T
    window: int | None = None
    length: int = 10_000
    seed: Seed = field(default_factory=lambda: Seed(0))

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ParameterError("a and b must be non-negative")
        if not self.zeta < 2.0:
            raise ParameterError("kernel index zeta must be < 2")
        if not self.T > 0:
            raise ParameterError("kernel time scale T must be positive")
        if self.length < 1:
            raise ParameterError("length must be >= 1")
        if self.window is None:
            object.__setattr__(self, "window", default_window(self.zeta, self.T, self.length))
        if self.window < 1:
            raise ParameterError("window must be >= 1")

    @classmethod
    def standard(cls, **kw) -> "ArchParams":
        b = kw.pop("b", 0.9375)
        return cls(a=1.0 - b, b=b, zeta=kw.pop("zeta", 1.375), **kw)

    @property
    def unconditional_variance(self) -> float:
        return self.a / (1.0 - self.b) if self.b < 1 else math.inf


def _raw_kernel(zeta, T, lags):
    # lag j enters with t' = 1 - j, so the most recent square has weight exp_zeta(0) = 1
    return q_exp(-(np.asarray(lags, dtype=float) - 1.0) / T, zeta)


def default_window(zeta: float, T: float, length: int) -> int:
    """Lag where the kernel falls below WINDOW_TOL of its head, capped."""
    cap = min(MAX_WINDOW, max(int(length), 1))
    w = _raw_kernel(zeta, T, np.arange(1, cap + 1))
    small = np.nonzero(w < WINDOW_TOL * w[0])[0]
    return int(small[0]) if small.size else cap


def arch_kernel(p: ArchParams) -> np.ndarray:
    """Weights K_1..K_L normalised to sum to one."""
    w = _raw_kernel(p.zeta, p.T, np.arange(1, p.window + 1))
    total = w.sum()
    if not total > 0:
        raise ParameterError("all kernel weights vanish")
    return w / total


@numba.njit(cache=True)
def _qarch_loop(w, z, a, b, init_sq):
    L = w.size
    n = z.size
    hist = np.empty(L + n)
    hist[:L] = init_sq
    out = np.empty(n)
    for t in range(n):
        s = 0.0
        base = L + t
        for j in range(L):
            s += w[j] * hist[base - 1 - j]
        x = math.sqrt(a + b * s) * z[t]
        hist[base] = x * x
        out[t] = x
    return out


def simulate_qarch(p: ArchParams) -> np.ndarray:
    """x_t = sigma_t w_t with the kernel-weighted volatility; warm-up of one window dropped."""
    w = arch_kernel(p)
    rng = p.seed.generator()
    z = rng.standard_normal(p.window + p.length)
    init = p.unconditional_variance if p.b < 1 else p.a
    x = _qarch_loop(w, z, p.a, p.b, init)
    if not np.all(np.isfinite(x)):
        bad = int(np.argmin(np.isfinite(x)))
        raise IntegrationError(f"q-ARCH recursion overflowed at step {bad}", step=bad)
    return x[p.window:]


def arch_covariance_targets(p_or_zeta) -> tuple[float, float]:
    """(q_c, lambda) of the squared-series covariance, q_c = 1/(2 - zeta), lambda = 1/q_c."""
    zeta = p_or_zeta.zeta if isinstance(p_or_zeta, ArchParams) else float(p_or_zeta)
    if zeta == 2.0:
        raise DomainError("zeta = 2 makes q_c infinite")
    if zeta > 2.0:
        raise DomainError("zeta must be < 2")
    qc = 1.0 / (2.0 - zeta)
    return qc, 1.0 / qc
