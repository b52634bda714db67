"""Panel definitions for the five reference figures and their CSV/gnuplot output."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .io import write_results_csv
from .sweep import SweepSpec, run_sweep

FULL_REPLICAS = 1000


def q_grid(lo, hi, step=0.1):
    return tuple(float(v) for v in np.round(np.arange(lo, hi + step / 2, step), 10))


@dataclass(frozen=True)
class Panel:
    name: str
    dist: str
    q_grid: tuple
    N_list: tuple
    n_list: tuple = (1,)
    estimator: str = "kla"
    shuffle: bool = False
    x_column: str = "q"


FIGURES = {
    1: (
        Panel("main", "gaussian", q_grid(0.1, 1.9), (1000, 5000, 10000)),
        Panel("inset", "gaussian", (0.5, 1.0, 1.5), (100, 250, 500, 1000, 2500, 5000, 10000),
              x_column="N"),
    ),
    2: (
        Panel("upper", "student_t3", q_grid(0.1, 1.7), (1000, 5000, 10000)),
        Panel("lower", "student_t3", q_grid(0.1, 1.7), (5000,), (1, 2, 5, 10, 50, 100)),
    ),
    3: (
        Panel("upper", "uniform", q_grid(0.1, 1.9), (100,), (2, 5, 10)),
        Panel("lower", "uniform", q_grid(0.1, 1.9), (5000,), (1, 2, 5, 10, 50)),
        Panel("binning", "uniform", q_grid(0.1, 1.9), (100, 5000), (0,), estimator="binning"),
    ),
    4: (
        Panel("dependent", "feller", q_grid(0.1, 1.7), (10000,)),
        Panel("shuffled", "feller", q_grid(0.1, 1.7), (10000,), shuffle=True),
    ),
    5: (
        Panel("main", "qarch", q_grid(0.1, 1.7), (10000,)),
    ),
}


def replicas_for(scale: float) -> int:
    if not scale > 0:
        raise ParameterError("scale must be positive")
    return max(2, int(round(FULL_REPLICAS * scale)))


def panel_spec(panel: Panel, replicas: int, seed: int, workers: int = 1, fig: str = "") -> SweepSpec:
    return SweepSpec(dist=panel.dist, q_grid=panel.q_grid, N_list=panel.N_list,
                     n_list=panel.n_list, replicas=replicas, seed=seed, fig=fig,
                     estimator=panel.estimator, shuffle=panel.shuffle, workers=workers)


def gnuplot_script(fig_id: int, csv_paths: dict) -> str:
    """Stand-alone gnuplot script plotting ratio_mean from each panel CSV."""
    lines = [
        f"# fig {fig_id}: ratio S_Q / S*_Q; run with `gnuplot fig{fig_id}.gp`",
        'set datafile separator ","',
        "set key autotitle columnhead",
        "set terminal pngcairo size 900,600",
        "set ylabel 'S_Q / S*_Q'",
    ]
    for name, (panel, path) in csv_paths.items():
        col = "3" if panel.x_column == "q" else "5"
        lines.append(f"set output 'fig{fig_id}_{name}.png'")
        lines.append(f"set xlabel '{panel.x_column}'")
        if panel.x_column == "N":
            lines.append("set logscale x")
        else:
            lines.append("unset logscale x")
        curves = []
        if panel.x_column == "N":
            for q in panel.q_grid:
                curves.append(f"'{path.name}' using {col}:(($3=={q!r}) && strcol(14) eq 'ok' ? $11 : 1/0)"
                              f" with linespoints title 'q={q}'")
        else:
            for N in panel.N_list:
                for n in panel.n_list:
                    curves.append(f"'{path.name}' using {col}:(($5=={N}) && ($6=={n})"
                                  f" && strcol(14) eq 'ok' ? $11 : 1/0)"
                                  f" with linespoints title 'N={N} n={n}'")
        lines.append("plot " + ", \\\n     ".join(curves))
    return "\n".join(lines) + "\n"


def reproduce_figure(fig_id: int, scale: float = 1.0, seed: int = 42, out_dir=".",
                     workers: int = 1) -> list[Path]:
    """Run every panel of a figure; returns the written CSV and script paths."""
    if fig_id not in FIGURES:
        raise ParameterError(f"figure id must be one of {sorted(FIGURES)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reps = replicas_for(scale)
    written = {}
    for panel in FIGURES[fig_id]:
        spec = panel_spec(panel, reps, seed, workers, fig=str(fig_id))
        results = run_sweep(spec)
        path = out / f"fig{fig_id}_{panel.name}.csv"
        write_results_csv(path, results, str(fig_id), panel.dist)
        written[panel.name] = (panel, path)
    script = out / f"fig{fig_id}.gp"
    script.write_text(gnuplot_script(fig_id, written), encoding="utf-8")
    return [p for _, p in written.values()] + [script]
