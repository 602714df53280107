"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 numerical degeneracy, 4 retry
exhaustion.  Every file written embeds a ``provenance`` record holding the
argument vector, so ``homent rerun FILE`` regenerates it byte for byte.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import __version__
from .complex import clique_complex, summarize
from .entropy import IntegrationConfig, mc_volume
from .errors import (DegenerateEstimateError, DegreeSequenceError, DomainError,
                     EdgeListError, NumericalError, RetryExhaustedError)
from .graph import generate_gnk, generate_power_law, read_edge_list, serialize_edge_list
from .homology import betti_numbers
from .infogeo import fisher_metric
from .sweeps import (GNK_KN_GRID, POWERLAW_WINDOW, SWEEP_DEFAULTS, aggregate,
                     aggregate_to_csv, gnuplot_script, kn_to_k, rows_to_csv, sweep_gnk,
                     sweep_powerlaw)

EXIT_INPUT, EXIT_NUMERIC, EXIT_RETRY = 2, 3, 4


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# argument helpers

def _floats(text, count=None):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) not in count:
        raise argparse.ArgumentTypeError(f"expected {' or '.join(map(str, count))} values")
    return vals


def _count(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if v != int(v) or v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(v)


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", metavar="PATH", help="edge-list file")
    src.add_argument("--gnk", type=lambda s: _floats(s, (2,)), metavar="N,K",
                     help="uniform random graph with N vertices and K edges")
    src.add_argument("--powerlaw", type=lambda s: _floats(s, (2, 3)), metavar="N,GAMMA[,ALPHA]",
                     help="power-law degree random graph")
    p.add_argument("--seed", type=int, default=None,
                   help="64-bit seed (default: $HOMENT_SEED, else 0)")


def _add_mc(p, defaults: IntegrationConfig):
    p.add_argument("--samples", type=_count, default=defaults.samples)
    p.add_argument("--h", type=float, default=None, help="trace threshold (default 10*n)")
    p.add_argument("--box", type=lambda s: _floats(s, (2,)), metavar="LO,HI",
                   default=[defaults.box_lo, defaults.box_hi])
    p.add_argument("--mode", choices=["analytic", "numerical"], default=defaults.mode)
    p.add_argument("--sampler", choices=["uniform", "metropolis"], default=defaults.sampler)
    p.add_argument("--exponent", type=int, default=None,
                   help="regularizer exponent m in log(1 + det^m) (default n)")
    p.add_argument("--cap", type=float, default=defaults.overflow_cap,
                   help="sqrt(det g) cutoff in numerical mode")
    p.add_argument("--workers", type=int, default=1)


def _add_output(p, formats=("json",)):
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--format", choices=list(formats), default=formats[0])
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock fields (breaks byte-for-byte reruns)")


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("HOMENT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"HOMENT_SEED is not an integer: {env!r}") from None
    return 0


def _config(args, seed) -> IntegrationConfig:
    return IntegrationConfig(
        mode=args.mode, sampler=args.sampler, samples=args.samples, seed=seed,
        h=args.h, box_lo=args.box[0], box_hi=args.box[1],
        regularizer_exponent=args.exponent, overflow_cap=args.cap)


def _load_graph(args, seed):
    if args.edges:
        try:
            return read_edge_list(args.edges), {"source": "edges", "path": args.edges}
        except OSError as exc:
            raise InputError(str(exc)) from None
    if args.gnk:
        n, k = args.gnk
        if n != int(n) or k != int(k):
            raise InputError("--gnk takes integers N,K")
        return generate_gnk(int(n), int(k), seed), {"source": "gnk", "n": int(n), "k": int(k)}
    n, gamma, *rest = args.powerlaw
    alpha = rest[0] if rest else 0.0
    res = generate_power_law(int(n), gamma, alpha, seed)
    return res.graph, {"source": "powerlaw", "n": int(n), "gamma": gamma, "alpha": alpha,
                       "realized_k_over_n": res.realized_k_over_n, "erased": res.erased}


def _provenance(argv, seed):
    clean, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("--out", "--aggregate-out", "--gnuplot"):
            skip = True
            continue
        if a.startswith(("--out=", "--aggregate-out=", "--gnuplot=")):
            continue
        clean.append(a)
    if not any(a == "--seed" or a.startswith("--seed=") for a in clean):
        clean += ["--seed", str(seed)]
    return {"version": __version__, "argv": clean, "seed": seed}


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands

def cmd_betti(args, argv):
    seed = _seed(args)
    t0 = time.perf_counter()
    g, source = _load_graph(args, seed)
    s = clique_complex(g, args.max_dim + 1)
    summary = summarize(s)
    betti = betti_numbers(s, args.max_dim, exact=args.exact)
    record = {"n": g.n, "nu": list(summary.nu), "beta": list(betti.beta), "dim": summary.dim,
              "field_char": betti.field_char, "input": source,
              "provenance": _provenance(argv, seed)}
    if summary.chi is not None:
        record["chi"] = summary.chi
    if args.timing:
        record["elapsed_ms"] = 1000 * (time.perf_counter() - t0)
    if args.dump_complex:
        with open(args.dump_complex, "w", encoding="utf-8") as fh:
            fh.write(s.to_json())
    if args.format == "json":
        text = json.dumps(record, sort_keys=True) + "\n"
    else:
        cols = ["n", "dim", "chi", "field_char"] + [f"nu{p}" for p in range(len(summary.nu))] \
            + [f"beta{p}" for p in range(len(betti.beta))]
        vals = [g.n, summary.dim, "" if summary.chi is None else summary.chi, betti.field_char] \
            + list(summary.nu) + list(betti.beta)
        text = ("# config: " + json.dumps(record["provenance"], sort_keys=True) + "\n"
                + ",".join(cols) + "\n" + ",".join(map(str, vals)) + "\n")
    _emit(text, args.out)


def cmd_entropy(args, argv):
    seed = _seed(args)
    g, source = _load_graph(args, seed)
    if args.dump_metric is not None:
        theta = np.array(args.dump_metric)
        if theta.shape != (g.n,):
            raise InputError(f"--dump-metric needs {g.n} values, got {theta.size}")
        _emit(fisher_metric(theta, g, args.cap).to_json() + "\n", args.out)
        return
    cfg = _config(args, seed)
    est = mc_volume(g, cfg, workers=args.workers)
    record = est.to_dict(timing=args.timing)
    record["input"] = source
    record["provenance"] = _provenance(argv, seed)
    _emit(json.dumps(record, sort_keys=True) + "\n", args.out)


def _sweep_outputs(args, argv, seed, rows, xlabel):
    prov = _provenance(argv, seed)
    _emit(rows_to_csv(rows, prov), args.out)
    if args.aggregate_out:
        with open(args.aggregate_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(aggregate_to_csv(aggregate(rows), prov))
    if args.gnuplot:
        with open(args.gnuplot, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(gnuplot_script(args.out, xlabel))


def _check_sweep_args(args):
    if args.gnuplot and not args.out:
        raise InputError("--gnuplot needs --out for the data file it plots")


def cmd_sweep_gnk(args, argv):
    _check_sweep_args(args)
    seed = _seed(args)
    if args.k:
        ks = [int(k) for k in args.k]
    else:
        ks = kn_to_k(args.n, args.kn)
    rows = sweep_gnk(args.n, ks, args.reps, _config(args, seed), seed=seed,
                     workers=args.workers)
    _sweep_outputs(args, argv, seed, rows, "k/n")


def cmd_sweep_powerlaw(args, argv):
    _check_sweep_args(args)
    seed = _seed(args)
    rows = sweep_powerlaw(args.n, args.gammas, args.reps, _config(args, seed), seed=seed,
                          alpha=args.alpha, window=tuple(args.window),
                          max_attempts=args.max_attempts, workers=args.workers)
    _sweep_outputs(args, argv, seed, rows, "gamma")


def cmd_generate(args, argv):
    seed = _seed(args)
    g, _ = _load_graph(args, seed)
    header = "# " + json.dumps(_provenance(argv, seed), sort_keys=True) + "\n"
    _emit(header + serialize_edge_list(g), args.out)


def cmd_rerun(args, argv):
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None
    prov = _find_provenance(text)
    if prov is None:
        raise InputError(f"{args.file}: no embedded provenance record")
    replay = list(prov["argv"])
    if args.out:
        replay += ["--out", args.out]
    return main(replay)


def _find_provenance(text):
    for line in text.splitlines():
        if line.startswith("# config: "):
            return json.loads(line[len("# config: "):])
        if line.startswith("# {"):
            return json.loads(line[2:])
    try:
        return json.loads(text).get("provenance")
    except (json.JSONDecodeError, AttributeError):
        return None


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"homent {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", help="clique-complex simplex counts and Betti numbers")
    _add_input(p)
    p.add_argument("--max-dim", type=int, default=2, help="highest Betti number (default 2)")
    p.add_argument("--exact", action="store_true", help="exact rational ranks")
    p.add_argument("--dump-complex", metavar="PATH", help="write the complex as JSON")
    _add_output(p, ("json", "csv"))
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("entropy", help="geometric entropy S = ln V")
    _add_input(p)
    _add_mc(p, IntegrationConfig())
    p.add_argument("--dump-metric", type=_floats, metavar="THETA",
                   help="print the metric evaluation at THETA instead of integrating")
    _add_output(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("sweep-gnk", help="S/n and Betti numbers over G(n, k)")
    p.add_argument("--n", type=int, default=50)
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--kn", type=_floats, default=list(GNK_KN_GRID), metavar="LIST")
    grid.add_argument("--k", type=_floats, metavar="LIST", help="explicit edge counts")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=None)
    _add_mc(p, SWEEP_DEFAULTS)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--aggregate-out", metavar="PATH", help="per-x mean/sd table")
    p.add_argument("--gnuplot", metavar="PATH", help="write a gnuplot script for --out")
    p.set_defaults(func=cmd_sweep_gnk)

    p = sub.add_parser("sweep-powerlaw", help="S/n and Betti numbers over power-law graphs")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--gammas", type=_floats, default=[2.4, 2.6, 2.8, 3.0, 3.2], metavar="LIST")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--window", type=lambda s: _floats(s, (2,)), default=list(POWERLAW_WINDOW),
                   metavar="LO,HI", help="accepted k/n range")
    p.add_argument("--max-attempts", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    _add_mc(p, SWEEP_DEFAULTS)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--aggregate-out", metavar="PATH")
    p.add_argument("--gnuplot", metavar="PATH")
    p.set_defaults(func=cmd_sweep_powerlaw)

    p = sub.add_parser("generate", help="write a generated graph as an edge list")
    _add_input(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("rerun", help="regenerate a file from its embedded provenance")
    p.add_argument("file")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_rerun)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        result = args.func(args, argv)
    except (DegenerateEstimateError, NumericalError, DomainError) as exc:
        print(f"homent: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (RetryExhaustedError, DegreeSequenceError) as exc:
        print(f"homent: retries exhausted: {exc}", file=sys.stderr)
        return EXIT_RETRY
    except (InputError, EdgeListError, ValueError) as exc:
        print(f"homent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return int(result or 0)


if __name__ == "__main__":
    sys.exit(main())
