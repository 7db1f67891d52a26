"""Command-line entry points.

Subcommands:
  experiment    run a Monte-Carlo grid from a JSON config file
  simulate      dump a batch of simulated paths to a binary file
  bootstrap-ci  simultaneous confidence half-width for one data table
  metrics       Kolmogorov and Wasserstein-1 distance between two samples
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bootstrap import (confidence_region, covariance_blocks, precision_blocks,
                        quantile, resolve_block_length)
from .estimate import sample_covariance, sample_precision
from .harness import ExperimentConfig, parse_block_rule, parse_structure, run_grid
from .metrics import distance_report
from .pipeline import ingest
from .simulate import SimulationPlan, save_batch, simulate_multidimensional


def _load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        raw = json.load(fh)
    known = {"grid_n", "grid_p", "betas", "structure", "replicates",
             "block_rule", "targets", "seed", "output_dir"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "block_rule" in raw:
        raw["block_rule"] = parse_block_rule(raw["block_rule"])
    if "targets" in raw:
        raw["targets"] = tuple(raw["targets"])
    return ExperimentConfig(**raw)


def _cmd_experiment(args) -> int:
    config = _load_config(args.config)
    results = run_grid(config, workers=args.workers)
    print(f"wrote {len(results)} result rows to {config.output_dir}/results.csv")
    return 0


def _cmd_simulate(args) -> int:
    build = parse_structure(args.structure)
    truncation = args.N if args.N is not None else args.n * args.n
    spec = build(args.beta, args.p, truncation)
    plan = SimulationPlan(spec, args.n, seed=args.seed, N=args.N,
                          copies_requested=args.copies)
    batch = simulate_multidimensional(plan)
    save_batch(batch, args.out)
    print(f"wrote {batch.copies} copies of a {args.n} x {args.p} path to {args.out}")
    return 0


def _cmd_bootstrap_ci(args) -> int:
    subject = ingest(args.data)
    n, p = subject.data.shape
    l = resolve_block_length(parse_block_rule(args.block_rule), n, p, args.beta)
    est = sample_covariance(subject.data)
    if args.kind == "prec":
        center = sample_precision(est)
        dist = precision_blocks(subject.data, l, omega=center)
    else:
        center = est.sigma_hat
        dist = covariance_blocks(subject.data, l)
    q_hat = quantile(dist, 1.0 - args.alpha)
    region = confidence_region(center, dist, n, args.alpha)
    print(json.dumps({
        "n": n, "p": p, "l": l, "kind": args.kind, "alpha": args.alpha,
        "quantile": q_hat,
        "half_width": region.half_width,
    }))
    return 0


def _cmd_metrics(args) -> int:
    a = np.loadtxt(args.a, ndmin=1)
    b = np.loadtxt(args.b, ndmin=1)
    report = distance_report(a, b)
    print(json.dumps({
        "kolmogorov": report.kolmogorov, "wasserstein1": report.wasserstein1,
        "n1": report.n1, "n2": report.n2,
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrdcov", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("experiment", help="run a Monte-Carlo grid")
    p_exp.add_argument("--config", required=True, help="JSON config file")
    p_exp.add_argument("--workers", type=int, default=1)
    p_exp.set_defaults(func=_cmd_experiment)

    p_sim = sub.add_parser("simulate", help="simulate and dump a sample batch")
    p_sim.add_argument("--beta", type=float, required=True)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--p", type=int, required=True)
    p_sim.add_argument("--structure", default="toeplitz",
                       help="'toeplitz' or 'banded:<bandwidth>'")
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--copies", type=int, default=1)
    p_sim.add_argument("--N", type=int, default=None,
                       help="truncation length (default n^2)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_ci = sub.add_parser("bootstrap-ci", help="simultaneous confidence band")
    p_ci.add_argument("--data", required=True, help="CSV with a label header row")
    p_ci.add_argument("--alpha", type=float, default=0.1)
    p_ci.add_argument("--block-rule", default="default",
                      help="'default', 'fixed:<l>' or 'theoretical:<eps>[:scale]'")
    p_ci.add_argument("--kind", choices=("cov", "prec"), default="cov")
    p_ci.add_argument("--beta", type=float, default=None,
                      help="decay exponent, needed by the theoretical rule")
    p_ci.set_defaults(func=_cmd_bootstrap_ci)

    p_met = sub.add_parser("metrics", help="two-sample distances")
    p_met.add_argument("--a", required=True, help="one value per line")
    p_met.add_argument("--b", required=True)
    p_met.set_defaults(func=_cmd_metrics)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
