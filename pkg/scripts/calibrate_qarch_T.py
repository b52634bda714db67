"""Scan the q-ARCH kernel time scale T and report the fitted marginal index.

    python scripts/calibrate_qarch_T.py --length 1000000 --T 0.5 1 2 5 10
"""
import argparse

import numpy as np

from qkla.analysis import autocorrelation, fit_q_gaussian
from qkla.generators import Seed
from qkla.processes import ArchParams, simulate_qarch


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--T", type=float, nargs="+", default=[0.5, 1.0, 2.0, 5.0, 10.0])
    ap.add_argument("--length", type=int, default=1_000_000)
    ap.add_argument("--seeds", type=int, nargs="+", default=[42, 43, 44])
    args = ap.parse_args()
    print("T,seed,window,q_fit,r2,var,rho2_50")
    for T in args.T:
        for s in args.seeds:
            p = ArchParams.standard(T=T, length=args.length, seed=Seed(s))
            x = simulate_qarch(p)
            fit = fit_q_gaussian(x)
            rho2 = autocorrelation(x * x, 50)
            print(f"{T},{s},{p.window},{fit.q_fit:.4f},{fit.r_squared:.5f},{np.var(x):.4f},{rho2[50]:.4f}")


if __name__ == "__main__":
    main()
