"""Plain-text file formats: series files, key = value configs, result CSVs."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .errors import ParameterError

CSV_HEADER = ("fig", "dist", "q", "Q", "N", "n", "replicas", "S_star", "S_hat_mean",
              "S_hat_std", "ratio_mean", "ratio_std", "seed", "status")


def read_series(path) -> np.ndarray:
    """One decimal value per line; lines starting with '#' and blank lines are ignored."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                values.append(float(s))
            except ValueError:
                raise ParameterError(f"{path}:{lineno}: not a number: {s!r}") from None
    return np.asarray(values, dtype=float)


def format_series(values, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    for v in np.asarray(values, dtype=float):
        buf.write(f"{float(v)!r}\n")
    return buf.getvalue()


def write_series(path, values, comments=()) -> None:
    Path(path).write_text(format_series(values, comments), encoding="utf-8")


def _parse_scalar(text):
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_value(text: str):
    """Scalar, or a comma-separated list of scalars."""
    text = text.strip()
    if "," in text:
        return [_parse_scalar(t.strip()) for t in text.split(",") if t.strip()]
    return _parse_scalar(text)


def read_config(path) -> dict:
    """``key = value`` lines; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.split("#", 1)[0].strip()
            if not s:
                continue
            if "=" not in s:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
            key, value = s.split("=", 1)
            out[key.strip()] = parse_value(value)
    return out


def _num(x) -> str:
    if isinstance(x, float) and not math.isfinite(x):
        return ""
    return repr(float(x)) if isinstance(x, float) else str(x)


def result_rows(results, fig, dist):
    for r in results:
        ok = r.ok
        yield (
            fig, dist, repr(float(r.q)), repr(float(r.Q)), str(r.N), str(r.n), str(r.replicas),
            _num(r.S_star) if ok else "", _num(r.S_hat_mean) if ok else "",
            _num(r.S_hat_std) if ok else "", _num(r.ratio_mean) if ok else "",
            _num(r.ratio_std) if ok else "", str(r.seed), r.status,
        )


def format_results_csv(results, fig, dist) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(result_rows(results, fig, dist))
    return buf.getvalue()


def write_results_csv(path, results, fig, dist) -> None:
    Path(path).write_text(format_results_csv(results, fig, dist), encoding="utf-8")


def read_results_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
