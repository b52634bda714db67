"""Independent reference computations shared by several test modules."""
import numpy as np


def _lnq(x, q):
    return np.log(x) if q == 1 else (x ** (1.0 - q) - 1.0) / (1.0 - q)


def order_statistic_oracle(N, n, q, draws, rng, chunk=20_000):
    """Mean ln_q of the window mass, sampled directly from N-1 uniform neighbours.

    On the probability scale each neighbour lies at a uniform 'mass distance';
    the window reaching the n-th neighbour holds the n-th smallest of N-1
    uniforms.
    """
    total, done = 0.0, 0
    while done < draws:
        m = min(chunk, draws - done)
        u = rng.random((m, N - 1))
        mass = np.partition(u, n - 1, axis=1)[:, n - 1]
        total += float(np.sum(_lnq(mass, q)))
        done += m
    return total / draws
