"""Seedable i.i.d. samplers for the three reference distributions.

Streams come from PCG64 (period 2**128). A replica's stream is keyed by
``(base, replica_index)`` through the SplitMix64 finaliser, so neighbouring
replica indices give unrelated seeds.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .estimator import SortedSample

MASK64 = (1 << 64) - 1


def splitmix64(z: int) -> int:
    """SplitMix64 output function (Steele, Lea & Flood 2014)."""
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64(*words: int) -> int:
    """Fold any number of integers into one 64-bit value."""
    h = 0
    for w in words:
        h = splitmix64(h ^ (int(w) & MASK64))
    return h


@dataclass(frozen=True)
class Seed:
    base: int
    replica_index: int = 0

    def __post_init__(self):
        if not 0 <= self.base <= MASK64 or self.replica_index < 0:
            raise ParameterError("seed base must be a 64-bit unsigned int and replica_index >= 0")

    @property
    def key(self) -> int:
        return mix64(self.base, self.replica_index)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.key))

    def child(self, *tags: int) -> "Seed":
        """Independent seed for a sub-task (e.g. one sample size in a sweep)."""
        return Seed(mix64(self.base, *tags), self.replica_index)


def _check_n(N):
    if int(N) != N or N < 2:
        raise ParameterError(f"sample size must be an integer >= 2, got {N}")
    return int(N)


def uniform_values(N, rng):
    return rng.uniform(-1.0, 1.0, size=N)


def gaussian_values(N, rng):
    return rng.standard_normal(N)


def student_t_polar(N, m, rng):
    """Bailey's polar method for Student-t variates with ``m`` degrees of freedom.

    Draw (u, v) uniform in the unit disc, w = u^2 + v^2, then
    ``t = u * sqrt(m (w^{-2/m} - 1) / w)`` is exactly t_m distributed.
    """
    out = np.empty(N)
    filled = 0
    while filled < N:
        need = N - filled
        batch = int(need / (np.pi / 4)) + 16
        u = rng.uniform(-1.0, 1.0, size=batch)
        v = rng.uniform(-1.0, 1.0, size=batch)
        w = u * u + v * v
        ok = (w <= 1.0) & (w > 0.0)
        u, w = u[ok][:need], w[ok][:need]
        out[filled:filled + u.size] = u * np.sqrt(m * (w ** (-2.0 / m) - 1.0) / w)
        filled += u.size
    return out


def student_t3_values(N, rng):
    return student_t_polar(N, 3.0, rng)


_SAMPLERS = {
    "uniform": uniform_values,
    "gaussian": gaussian_values,
    "student_t3": student_t3_values,
}


def raw_values(dist: str, N: int, seed: Seed) -> np.ndarray:
    """Unsorted draws in generation order."""
    try:
        fn = _SAMPLERS[dist]
    except KeyError:
        raise ParameterError(f"unknown distribution {dist!r}; choose from {sorted(_SAMPLERS)}") from None
    return fn(_check_n(N), seed.generator())


def sample_uniform(N: int, seed: Seed) -> SortedSample:
    return SortedSample.from_values(raw_values("uniform", N, seed))


def sample_gaussian(N: int, seed: Seed) -> SortedSample:
    return SortedSample.from_values(raw_values("gaussian", N, seed))


def sample_student_t3(N: int, seed: Seed) -> SortedSample:
    return SortedSample.from_values(raw_values("student_t3", N, seed))
