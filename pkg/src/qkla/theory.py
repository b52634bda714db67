"""Closed-form non-additive entropies S*_{2-q} of the reference distributions.

Every function takes the estimator-side index ``q``; the entropic index of
the functional is ``Q = 2 - q`` so that ``S = -<ln_q p>``.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError
from .qmath import digamma, is_classical, log_gamma, q_log

LN_SQRT_PI = 0.5 * math.log(math.pi)


class ReferenceDistribution(enum.Enum):
    GAUSSIAN = "gaussian"
    STUDENT_T3 = "student_t3"
    UNIFORM = "uniform"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        aliases = {"normal": "gaussian", "t3": "student_t3", "student": "student_t3"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown reference distribution {name!r}") from None

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self is ReferenceDistribution.GAUSSIAN:
            return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        if self is ReferenceDistribution.STUDENT_T3:
            return 2.0 / (math.pi * math.sqrt(3.0)) * (1.0 + x * x / 3.0) ** -2
        return np.where(np.abs(x) <= 1.0, 0.5, 0.0)


def validity_domain(dist, q: float) -> bool:
    dist = ReferenceDistribution.parse(dist)
    if not math.isfinite(q):
        return False
    if dist is ReferenceDistribution.GAUSSIAN:
        return q < 2.0
    if dist is ReferenceDistribution.STUDENT_T3:
        return q < 1.75
    return True


def _gaussian(q):
    if is_classical(q):
        return 0.5 * math.log(2.0 * math.pi * math.e)
    k = 1.0 - q
    # (1 - (2 pi)^{(q-1)/2} / sqrt(2-q)) / (1-q), written with expm1
    log_int = -0.5 * k * math.log(2.0 * math.pi) - 0.5 * math.log(2.0 - q)
    return -math.expm1(log_int) / k


def _student_t3(q):
    if is_classical(q):
        return _t3_shannon()
    k = 1.0 - q
    # int p^{2-q} = 2^{2-q} 3^{(q-1)/2} pi^{q-3/2} Gamma(7/2-2q) / Gamma(4-2q)
    log_int = (
        (2.0 - q) * math.log(2.0)
        + 0.5 * (q - 1.0) * math.log(3.0)
        + (q - 1.5) * math.log(math.pi)
        + log_gamma(3.5 - 2.0 * q)
        - log_gamma(4.0 - 2.0 * q)
    )
    return -math.expm1(log_int) / k


def _t3_shannon():
    # Student-t entropy: (m+1)/2 [psi((m+1)/2) - psi(m/2)] + ln(sqrt(m) B(m/2, 1/2)), m = 3
    # psi(2) - psi(3/2) = 2 ln 2 - 1; B(3/2, 1/2) = pi/2
    return 2.0 * (2.0 * math.log(2.0) - 1.0) + math.log(math.sqrt(3.0) * math.pi / 2.0)


def _uniform(q):
    return -q_log(0.5, q)


def ref_entropy(dist, q: float) -> float:
    """S*_{2-q} of one of the three fixed reference densities."""
    dist = ReferenceDistribution.parse(dist)
    if not validity_domain(dist, q):
        limits = {
            ReferenceDistribution.GAUSSIAN: "q < 2",
            ReferenceDistribution.STUDENT_T3: "q < 7/4",
            ReferenceDistribution.UNIFORM: "finite q",
        }
        raise DomainError(f"{dist.value} entropy requires {limits[dist]}, got q={q}")
    if dist is ReferenceDistribution.GAUSSIAN:
        return _gaussian(q)
    if dist is ReferenceDistribution.STUDENT_T3:
        return _student_t3(q)
    return _uniform(q)


def _log_q_gaussian_integral(index: float, beta: float, power: float) -> float:
    """ln of int [exp_index(-beta x^2)]^power dx."""
    if is_classical(index):
        return LN_SQRT_PI - 0.5 * math.log(power * beta)
    if index > 1.0:
        s = power / (index - 1.0)
        if s <= 0.5:
            raise DomainError("q-Gaussian power integral diverges")
        return (
            LN_SQRT_PI
            - 0.5 * math.log((index - 1.0) * beta)
            + log_gamma(s - 0.5)
            - log_gamma(s)
        )
    s = power / (1.0 - index)
    if s <= -1.0:
        raise DomainError("q-Gaussian power integral diverges")
    return (
        LN_SQRT_PI
        - 0.5 * math.log((1.0 - index) * beta)
        + log_gamma(s + 1.0)
        - log_gamma(s + 1.5)
    )


def q_gaussian_norm(index: float, beta: float) -> float:
    """Normalisation Z of exp_index(-beta x^2); requires index < 3, beta > 0."""
    if not index < 3.0 or not beta > 0:
        raise DomainError("q-Gaussian needs index < 3 and beta > 0")
    return math.exp(_log_q_gaussian_integral(index, beta, 1.0))


def q_gaussian_beta_for_variance(index: float, variance: float = 1.0) -> float:
    """beta giving the requested variance; finite variance needs index < 5/3."""
    if not index < 5.0 / 3.0:
        raise DomainError("q-Gaussian variance is infinite for index >= 5/3")
    return 1.0 / (variance * (5.0 - 3.0 * index))


def q_gaussian_entropy(q: float, index: float, beta: float) -> float:
    """S*_{2-q} of the normalised q-Gaussian exp_index(-beta x^2) / Z.

    The StudentT3 reference is the special case index = 3/2, beta = 2/3 and
    the Gaussian is index = 1, beta = 1/2.
    """
    log_z = math.log(q_gaussian_norm(index, beta))
    if is_classical(q):
        return _q_gaussian_shannon(index, beta, log_z)
    Q = 2.0 - q
    log_int = _log_q_gaussian_integral(index, beta, Q) - Q * log_z
    return -math.expm1(log_int) / (1.0 - q)


def _q_gaussian_shannon(index, beta, log_z):
    # -<ln p> = ln Z - <ln exp_index(-beta x^2)>; the expectation is a digamma difference
    if is_classical(index):
        return log_z + 0.5
    if index > 1.0:
        s = 1.0 / (index - 1.0)
        # ln exp_index(-b x^2) = -s ln(1 + (index-1) b x^2); E[ln(1+u)] for the t-like law
        return log_z + s * (digamma(s) - digamma(s - 0.5))
    s = 1.0 / (1.0 - index)
    return log_z - s * (digamma(s + 1.0) - digamma(s + 1.5))


def scaled_entropy(base_entropy: float, scale: float, q: float) -> float:
    """Entropy of a*X given the entropy of X.

    int p_a^Q = a^{q-1} int p^Q, hence S(aX) = (1 - a^{q-1})/(1-q) + a^{q-1} S(X).
    """
    if not scale > 0:
        raise DomainError("scale must be positive")
    if is_classical(q):
        return base_entropy + math.log(scale)
    la = math.log(scale)
    return -math.expm1((q - 1.0) * la) / (1.0 - q) + math.exp((q - 1.0) * la) * base_entropy
