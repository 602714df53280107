"""Ensemble sweeps pairing entropy per node with Betti numbers.

Each row draws one graph, computes ``beta_0, beta_1`` of its clique complex
and ``S/n``.  Row seeds are derived from the master seed and the row's grid
position, so results do not depend on execution order or worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields, replace

import numpy as np

from . import __version__
from .complex import clique_complex
from .entropy import IntegrationConfig, mc_volume
from .errors import RetryExhaustedError
from .graph import Graph, generate_gnk, generate_power_law, in_window
from .homology import betti_numbers
from .rng import derive_seed

CSV_COLUMNS = ("x", "rep", "seed", "S_over_n", "stderr", "beta0", "beta1",
               "realized_k_over_n", "n_samples", "n_overflow_excluded")

SWEEP_DEFAULTS = IntegrationConfig(mode="numerical", sampler="metropolis", samples=10_000)
GNK_KN_GRID = (0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0)
POWERLAW_WINDOW = (0.7, 0.85)


@dataclass(frozen=True)
class SweepRow:
    x: float
    rep: int
    seed: int
    S_over_n: float
    stderr: float
    beta0: int
    beta1: int
    realized_k_over_n: float
    n_samples: int
    n_overflow_excluded: int


def measure(g: Graph, x: float, rep: int, seed: int, cfg: IntegrationConfig) -> SweepRow:
    """Betti numbers and entropy per node of one graph.

    The Monte Carlo seed is derived from ``seed``; ``cfg.seed`` is ignored.
    """
    beta = betti_numbers(clique_complex(g, 2), 1).beta
    est = mc_volume(g, replace(cfg, seed=derive_seed(seed, 1)))
    return SweepRow(
        x=float(x), rep=rep, seed=seed,
        S_over_n=est.S_over_n, stderr=est.stderr_S / g.n,
        beta0=beta[0], beta1=beta[1],
        realized_k_over_n=g.num_edges / g.n,
        n_samples=est.n_samples, n_overflow_excluded=est.n_overflow_excluded,
    )


def _gnk_task(args):
    n, k, rep, row_seed, cfg = args
    return measure(generate_gnk(n, k, row_seed), k / n, rep, row_seed, cfg)


def _run(fn, tasks, workers):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def sweep_gnk(n: int, k_values, reps: int, cfg: IntegrationConfig = SWEEP_DEFAULTS,
              seed: int = 0, workers: int = 1) -> list[SweepRow]:
    """Rows for ``reps`` uniform G(n, k) graphs at each ``k`` in ``k_values``."""
    tasks = [(n, int(k), rep, derive_seed(seed, ki, rep), cfg)
             for ki, k in enumerate(k_values) for rep in range(reps)]
    rows = _run(_gnk_task, tasks, workers)
    return sorted(rows, key=lambda r: (r.x, r.rep))


def kn_to_k(n: int, kn_values) -> list[int]:
    return [math.floor(kn * n + 0.5) for kn in kn_values]


def _powerlaw_task(args):
    g, gamma, rep, row_seed, cfg = args
    return measure(g, gamma, rep, row_seed, cfg)


def sweep_powerlaw(n: int, gammas, reps: int, cfg: IntegrationConfig = SWEEP_DEFAULTS,
                   seed: int = 0, alpha: float = 0.0, window=POWERLAW_WINDOW,
                   max_attempts: int = 500, workers: int = 1) -> list[SweepRow]:
    """Rows for ``reps`` power-law graphs per exponent, all inside the k/n window.

    Realizations are drawn with seeds ``derive_seed(seed, gamma_index,
    attempt)`` until ``reps`` of them land in ``window``.

    Raises
    ------
    RetryExhaustedError
        If some exponent yields fewer than ``reps`` in-window graphs within
        ``max_attempts`` draws; ``diagnostics`` holds the observed k/n range.
    """
    tasks = []
    for gi, gamma in enumerate(gammas):
        accepted, seen = 0, []
        for attempt in range(max_attempts):
            row_seed = derive_seed(seed, gi, attempt)
            g = generate_power_law(n, gamma, alpha, row_seed).graph
            kn = g.num_edges / n
            seen.append(kn)
            if in_window(kn, window):
                tasks.append((g, float(gamma), accepted, row_seed, cfg))
                accepted += 1
                if accepted == reps:
                    break
        else:
            raise RetryExhaustedError(
                f"gamma={gamma}: {accepted}/{reps} realizations with k/n in "
                f"{list(window)} after {max_attempts} attempts "
                f"(observed k/n {min(seen):.3f}..{max(seen):.3f}, mean {np.mean(seen):.3f})",
                {"gamma": gamma, "accepted": accepted, "attempts": max_attempts,
                 "k_over_n_min": min(seen), "k_over_n_max": max(seen),
                 "k_over_n_mean": float(np.mean(seen))})
    rows = _run(_powerlaw_task, tasks, workers)
    return sorted(rows, key=lambda r: (r.x, r.rep))


def aggregate(rows) -> list[dict]:
    """Per-``x`` mean, sample sd and standard error of the mean."""
    out = []
    for x in sorted({r.x for r in rows}):
        group = [r for r in rows if r.x == x]
        rec = {"x": x, "count": len(group)}
        for name in ("S_over_n", "beta0", "beta1", "realized_k_over_n"):
            vals = np.array([getattr(r, name) for r in group], dtype=float)
            sd = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
            rec[f"{name}_mean"] = float(vals.mean())
            rec[f"{name}_sd"] = sd
            rec[f"{name}_sem"] = sd / math.sqrt(vals.size)
        out.append(rec)
    return out


def _fmt(v):
    return repr(float(v)) if isinstance(v, float) else str(v)


def rows_to_csv(rows, provenance: dict | None = None) -> str:
    buf = io.StringIO()
    if provenance is not None:
        buf.write(f"# homent {__version__}\n")
        buf.write("# config: " + json.dumps(provenance, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in astuple(r)])
    return buf.getvalue()


def aggregate_to_csv(records, provenance: dict | None = None) -> str:
    buf = io.StringIO()
    if provenance is not None:
        buf.write(f"# homent {__version__}\n")
        buf.write("# config: " + json.dumps(provenance, sort_keys=True) + "\n")
    if records:
        w = csv.writer(buf, lineterminator="\n")
        keys = list(records[0])
        w.writerow(keys)
        for rec in records:
            w.writerow([_fmt(rec[k]) for k in keys])
    return buf.getvalue()


def gnuplot_script(csv_path: str, xlabel: str) -> str:
    """Gnuplot commands plotting S/n and beta_1 per row of a sweep CSV."""
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{xlabel}'\n"
        "set ylabel 'S/n'\n"
        "set y2label 'beta_1'\n"
        "set y2tics\n"
        f"plot '{csv_path}' using 1:4:5 with yerrorbars title 'S/n', \\\n"
        f"     '{csv_path}' using 1:7 axes x1y2 with points title 'beta_1'\n"
    )


def read_rows_csv(text: str) -> list[SweepRow]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    types = {f.name: f.type for f in fields(SweepRow)}
    out = []
    for rec in reader:
        out.append(SweepRow(**{k: (int(v) if types[k] in (int, "int") else float(v))
                               for k, v in rec.items()}))
    return out
