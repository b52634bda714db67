"""Command-line entry point ``qkla``.

Exit codes: 0 success, 2 invalid parameters, 3 numeric/domain failure,
4 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, fields

import numpy as np

from . import analysis, io
from .errors import NumericError, ParameterError
from .estimator import KlaConfig, SortedSample, binning_estimate, kla_estimate
from .figures import reproduce_figure
from .generators import Seed, raw_values
from .processes import ArchParams, FellerParams, simulate_feller, simulate_qarch
from .sweep import SweepSpec, run_sweep
from .theory import ref_entropy

log = logging.getLogger("qkla")

EXIT_OK, EXIT_PARAM, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _kv_pairs(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ParameterError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = io.parse_value(v)
    return out


def cmd_gen(args):
    values = raw_values(args.dist, args.N, Seed(args.seed, args.replica))
    if args.sorted:
        values = np.sort(values)
    text = io.format_series(values, [f"dist={args.dist} N={args.N} seed={args.seed} replica={args.replica}"])
    _emit(text, args.out)


def cmd_process(args):
    params = _kv_pairs(args.param)
    seed = Seed(args.seed, args.replica)
    if args.kind == "feller":
        base = {f.name for f in fields(FellerParams)}
        bad = set(params) - base
        if bad:
            raise ParameterError(f"unknown Feller parameters: {sorted(bad)}")
        if params:
            p = FellerParams(length=args.length, seed=seed, **params)
        else:
            p = FellerParams.standard(length=args.length, seed=seed)
        values = simulate_feller(p)
    else:
        base = {f.name for f in fields(ArchParams)}
        bad = set(params) - base
        if bad:
            raise ParameterError(f"unknown q-ARCH parameters: {sorted(bad)}")
        p = ArchParams(length=args.length, seed=seed, **params) if params else \
            ArchParams.standard(length=args.length, seed=seed)
        values = simulate_qarch(p)
    desc = {k: v for k, v in asdict(p).items() if k != "seed"}
    _emit(io.format_series(values, [f"{args.kind} {desc} seed={args.seed} replica={args.replica}"]), args.out)


def cmd_estimate(args):
    values = io.read_series(args.infile)
    sample = SortedSample.from_values(values, jitter=args.jitter)
    if args.binning:
        out = {"estimator": "binning", "q": args.q, "Q": 2 - args.q, "N": sample.N,
               "S_hat": binning_estimate(sample, args.q, bins=args.bins)}
    else:
        res = kla_estimate(sample, KlaConfig(q=args.q, n=args.n, aggregation=args.mode))
        out = {"estimator": "kla", **asdict(res), "Q": res.Q}
    print(json.dumps(out))


def cmd_theory(args):
    print(repr(ref_entropy(args.dist, args.q)))


SWEEP_FLAGS = ("replicas", "seed", "out", "workers", "aggregation", "fig")


def cmd_sweep(args):
    cfg = io.read_config(args.spec_file)
    for key in ("q_grid", "N_list", "n_list"):
        if key in cfg and not isinstance(cfg[key], list):
            cfg[key] = [cfg[key]]
    process = {k[len("process."):]: v for k, v in cfg.items() if k.startswith("process.")}
    cfg = {k: v for k, v in cfg.items() if not k.startswith("process.")}
    if process:
        cfg["process"] = process
    for flag in SWEEP_FLAGS:
        v = getattr(args, flag)
        if v is not None:
            cfg[flag] = v
    spec = SweepSpec.from_mapping(cfg)
    results = run_sweep(spec)
    text = io.format_results_csv(results, spec.fig, spec.dist)
    _emit(text, spec.out)


def cmd_reproduce(args):
    paths = reproduce_figure(args.fig, scale=args.scale, seed=args.seed, out_dir=args.out,
                             workers=args.workers)
    for p in paths:
        print(p)


def cmd_stats(args):
    x = io.read_series(args.infile)
    if args.what == "autocorr":
        rho = analysis.autocorrelation(x, args.max_lag)
        print("lag,rho")
        for k, r in enumerate(rho):
            print(f"{k},{float(r)!r}")
    elif args.what == "hist":
        c, d, counts, _ = analysis.histogram(x, bins=args.bins, span=args.span)
        print("center,density,count")
        for ci, di, ni in zip(c, d, counts):
            print(f"{float(ci)!r},{float(di)!r},{int(ni)}")
    else:
        fit = analysis.fit_q_gaussian(x, bins=args.bins, span=args.span, min_count=args.min_count)
        print(json.dumps(asdict(fit)))


def build_parser():
    p = _Parser(prog="qkla", description="Generalised Kozachenko-Leonenko estimator of S_Q.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="draw an i.i.d. sample")
    g.add_argument("dist", choices=["gaussian", "student_t3", "uniform"])
    g.add_argument("N", type=int)
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--replica", type=int, default=0)
    g.add_argument("--sorted", action="store_true")
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen)

    pr = sub.add_parser("process", help="simulate a dependent series")
    pr.add_argument("kind", choices=["feller", "qarch"])
    pr.add_argument("--param", action="append", metavar="KEY=VALUE",
                    help="override a process parameter (repeatable); default: standard values")
    pr.add_argument("--length", type=int, default=10_000)
    pr.add_argument("--seed", type=int, default=42)
    pr.add_argument("--replica", type=int, default=0)
    pr.add_argument("--out", default="-")
    pr.set_defaults(func=cmd_process)

    e = sub.add_parser("estimate", help="estimate S_Q of a series file")
    e.add_argument("infile")
    e.add_argument("--q", type=float, required=True)
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--mode", choices=["pooled", "per_point"], default="pooled")
    e.add_argument("--jitter", action="store_true", help="break ties with 1e-12*std noise")
    e.add_argument("--binning", action="store_true", help="plug-in histogram estimate instead")
    e.add_argument("--bins", default="fd")
    e.set_defaults(func=cmd_estimate)

    t = sub.add_parser("theory", help="closed-form S*_{2-q}")
    t.add_argument("dist", choices=["gaussian", "student_t3", "uniform"])
    t.add_argument("q", type=float)
    t.set_defaults(func=cmd_theory)

    s = sub.add_parser("sweep", help="run an ensemble sweep from a key = value file")
    s.add_argument("spec_file")
    s.add_argument("--replicas", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.add_argument("--workers", type=int)
    s.add_argument("--aggregation", choices=["pooled", "per_point"])
    s.add_argument("--fig")
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("reproduce-fig", help="regenerate the data behind a figure")
    r.add_argument("fig", type=int, choices=[1, 2, 3, 4, 5])
    r.add_argument("--scale", type=float, default=1.0)
    r.add_argument("--seed", type=int, default=42)
    r.add_argument("--out", default="results")
    r.add_argument("--workers", type=int, default=1)
    r.set_defaults(func=cmd_reproduce)

    st = sub.add_parser("stats", help="series diagnostics")
    st.add_argument("what", choices=["autocorr", "hist", "fit"])
    st.add_argument("infile")
    st.add_argument("--max-lag", type=int, default=50)
    st.add_argument("--bins", type=int, default=100)
    st.add_argument("--span", type=float, default=6.0)
    st.add_argument("--min-count", type=int, default=5, help="fit only bins with this many points")
    st.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if getattr(args, "bins", None) is not None and args.command == "estimate":
            args.bins = int(args.bins) if str(args.bins).isdigit() else args.bins
        args.func(args)
    except ParameterError as e:
        log.error("%s", e)
        return EXIT_PARAM
    except NumericError as e:
        log.error("%s", e)
        return EXIT_NUMERIC
    except OSError as e:
        log.error("%s", e)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
