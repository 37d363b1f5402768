"""Command-line interface.

Subcommands:
  rates     evaluate rate curves / thresholds to CSV
  simulate  one Monte-Carlo error estimate to JSON
  sweep     grid of estimates from a JSON spec to CSV
  validate  run the numerical self-checks (exit 0 iff all pass)
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .channel import ChannelParams
from .codebook import MODES, ExperimentConfig
from .experiments import (
    SweepSpec,
    estimate_pe,
    rate_rows,
    run_sweep,
    run_validate,
    write_rates_csv,
)
from .rates import rate_point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partition-mac", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_rates = sub.add_parser("rates", help="evaluate C/D/Cg rates and thresholds")
    p_rates.add_argument("--q10", type=float, default=None)
    p_rates.add_argument("--q01", type=float, default=None)
    p_rates.add_argument("--qgrid", type=int, default=None,
                         help="evaluate a symmetric grid q10=q01=q at this many q values in (0, 0.5)")
    p_rates.add_argument("--pgrid", type=int, default=512, help="scan resolution of the p-optimizer")
    p_rates.add_argument("--out", required=True, help="output CSV path")

    p_sim = sub.add_parser("simulate", help="Monte-Carlo error estimate at one configuration")
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--t", type=int, required=True)
    p_sim.add_argument("--p", type=float, required=True)
    p_sim.add_argument("--epsilon", type=float, required=True)
    p_sim.add_argument("--q10", type=float, required=True)
    p_sim.add_argument("--q01", type=float, required=True)
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--mode", choices=MODES, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out", default=None, help="output JSON path (default: stdout)")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep from a JSON spec")
    p_sweep.add_argument("--spec", required=True, help="JSON file with arrays per parameter")
    p_sweep.add_argument("--out", required=True, help="output CSV path")

    p_val = sub.add_parser("validate", help="numerical self-checks")
    p_val.add_argument("--json", default=None, help="write the machine-readable report here")
    return parser


def _cmd_rates(args) -> int:
    if args.qgrid is not None:
        qs = [0.5 * i / (args.qgrid + 1) for i in range(1, args.qgrid + 1)]
        points = [rate_point(q, q, n_scan=args.pgrid) for q in qs]
    else:
        if args.q10 is None or args.q01 is None:
            print("rates: provide --qgrid or both --q10 and --q01", file=sys.stderr)
            return 2
        points = [rate_point(args.q10, args.q01, n_scan=args.pgrid)]
    write_rates_csv(rate_rows(points), args.out)
    return 0


def _cmd_simulate(args) -> int:
    cfg = ExperimentConfig(n_users=args.n, n_rounds=args.t, design_p=args.p,
                           epsilon=args.epsilon, seed=args.seed, mode=args.mode)
    ch = ChannelParams(q10=args.q10, q01=args.q01)
    est = estimate_pe(cfg, ch, trials=args.trials, mode=args.mode)
    payload = {
        "config": {
            "n": args.n, "t": args.t, "p": args.p, "epsilon": args.epsilon,
            "q10": args.q10, "q01": args.q01, "trials": args.trials,
            "mode": args.mode, "seed": args.seed,
        },
        "estimate": {
            "trials": est.trials, "failures": est.failures, "p_hat": est.p_hat,
            "ci95_lo": est.ci95_lo, "ci95_hi": est.ci95_hi,
            "budget_exceeded": est.budget_exceeded,
        },
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_sweep(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = SweepSpec.from_json(fh.read())
    run_sweep(spec, out_path=args.out)
    return 0


def _cmd_validate(args) -> int:
    report = run_validate()
    for check in report.checks:
        print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}: {check.detail}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    return 0 if report.passed else 1


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")
    args = _build_parser().parse_args(argv)
    np.seterr(all="raise", under="ignore")
    handler = {
        "rates": _cmd_rates,
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "validate": _cmd_validate,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
