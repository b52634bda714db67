"""q-deformed logarithm/exponential and the special functions used elsewhere.

All functions accept scalars or numpy arrays for ``x``; ``q`` is a scalar.
Scalars in give Python floats out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

#: Distance from q = 1 below which q-deformed functions use their ln/exp limit.
EPS_BRANCH = 1e-8


def is_classical(q: float) -> bool:
    """True when ``q`` is close enough to 1 to use the natural-log limit."""
    # slack covers 1 - (1 - EPS_BRANCH) rounding just above EPS_BRANCH
    return abs(1.0 - q) <= EPS_BRANCH * (1.0 + 1e-6)


@dataclass(frozen=True)
class EntropicIndex:
    """Estimator-side index ``q`` together with its dual ``Q = 2 - q``."""

    q: float

    def __post_init__(self):
        if not math.isfinite(self.q):
            raise DomainError(f"entropic index must be finite, got {self.q!r}")

    @property
    def Q(self) -> float:
        return 2.0 - self.q


def _out(x, value):
    return float(value) if np.ndim(x) == 0 else value


def q_log(x, q: float):
    """ln_q x = (x**(1-q) - 1) / (1 - q), with ln x as the q -> 1 limit.

    Evaluated as ``expm1((1-q) ln x) / (1-q)`` so there is no cancellation
    near q = 1.
    """
    if not math.isfinite(q):
        raise DomainError(f"q must be finite, got {q!r}")
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("q_log requires x > 0")
    lx = np.log(xa)
    if is_classical(q):
        return _out(x, lx)
    k = 1.0 - q
    with np.errstate(over="ignore"):
        val = np.expm1(k * lx) / k
    return _out(x, val)


def q_exp(x, q: float):
    """Inverse of :func:`q_log`: [1 + (1-q) x]**(1/(1-q)).

    For q < 1 the result is 0 where the bracket is non-positive. For q > 1 a
    non-positive bracket has no finite value and raises :class:`DomainError`.
    """
    if not math.isfinite(q):
        raise DomainError(f"q must be finite, got {q!r}")
    xa = np.asarray(x, dtype=float)
    if is_classical(q):
        return _out(x, np.exp(xa))
    k = 1.0 - q
    base = k * xa
    inside = base > -1.0
    if q > 1.0 and not np.all(inside):
        raise DomainError("q_exp diverges: 1 + (1-q) x <= 0 with q > 1")
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        val = np.where(inside, np.exp(np.log1p(np.where(inside, base, 0.0)) / k), 0.0)
    return _out(x, val)


def q_product_expand(u, v, q: float):
    """Right-hand side of ln_q(uv) = ln_q u + ln_q v + (1-q) ln_q u ln_q v."""
    lu = q_log(u, q)
    lv = q_log(v, q)
    return lu + lv + (1.0 - q) * lu * lv


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("log_gamma requires x > 0")
    if np.ndim(x) == 0:
        return math.lgamma(float(xa))
    return special.gammaln(xa)


def digamma(x):
    """psi(x) = d/dx ln Gamma(x) for x > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("digamma requires x > 0")
    return _out(x, special.digamma(xa))
