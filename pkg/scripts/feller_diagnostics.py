"""Marginal fit and correlation decay of the Feller-like diffusion.

Prints the q-Gaussian fit of the sampled marginal, the exponential decay rate
of the linear autocorrelation against gamma (2 + nu) (the relaxation rate),
and the same quantities after a shuffle.
"""
import argparse

import numpy as np

from qkla.analysis import autocorrelation, fit_q_gaussian, shuffle
from qkla.generators import Seed
from qkla.processes import FellerParams, simulate_feller


def decay_rate(x, lags, dt_eff):
    rho = autocorrelation(x, lags)
    k = np.arange(1, lags + 1)
    ok = rho[1:] > 0
    return -np.polyfit(k[ok] * dt_eff, np.log(rho[1:][ok]), 1)[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--length", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--nu", type=float, default=-0.5)
    ap.add_argument("--lags", type=int, default=15)
    args = ap.parse_args()
    p = FellerParams.standard(length=args.length, seed=Seed(args.seed))
    if args.nu != p.nu:
        p = FellerParams(gamma=p.gamma, theta=p.theta, nu=args.nu, length=args.length, seed=p.seed)
    x = simulate_feller(p)
    dt_eff = p.dt * p.stride
    fit = fit_q_gaussian(x)
    print(f"target q = {p.q}, fitted q = {fit.q_fit:.4f}, R2 = {fit.r_squared:.5f}, "
          f"chi2 p = {fit.chi2_pvalue:.3g}")
    print(f"decay rate = {decay_rate(x, args.lags, dt_eff):.5f}, gamma(2+nu) = {p.gamma * (2 + p.nu):.5f}, "
          f"gamma = {p.gamma}")
    y = shuffle(x, Seed(args.seed, 1))
    print(f"lag-1 rho: series {autocorrelation(x, 1)[1]:.4f}, shuffled {autocorrelation(y, 1)[1]:.4f}")


if __name__ == "__main__":
    main()
