"""Regenerate the data behind all five figures.

    python scripts/reproduce_all.py --scale 1.0 --workers 8 --out results

Full scale is 1000 replicas per cell. Each figure gets one CSV per panel and
a gnuplot script next to it.
"""
import argparse
import time

from qkla.figures import FIGURES, reproduce_figure


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scale", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results")
    ap.add_argument("--figs", type=int, nargs="+", default=sorted(FIGURES))
    args = ap.parse_args()
    for fig in args.figs:
        t0 = time.perf_counter()
        paths = reproduce_figure(fig, scale=args.scale, seed=args.seed, out_dir=args.out, workers=args.workers)
        print(f"fig {fig}: {time.perf_counter() - t0:.1f}s -> {', '.join(str(p) for p in paths)}")


if __name__ == "__main__":
    main()
