#!/usr/bin/env python3
"""Scaled point mass n^{(2r+1)/(2(r+1))} P(X_n = n) of the tilted ensemble.

Besides the Monte Carlo estimate each row carries the closed-form value
p_r(n) q^n prod(1 - q^s) and the sd-normalised value sd(X_n) P(X_n = n).
A note on stderr gives 1/sqrt(2 pi K_r), the limit of the power-normalised
quantity.

    python3 scripts/local_clt.py --r 1 --n-grid 100,400,1600 --trials 1000000
"""
import argparse
import sys

from rdiff.asymptotics import point_mass_limit
from rdiff.cli import parse_int_list
from rdiff.experiments import LOCAL_CLT_COLUMNS, ExperimentConfig, emit, render, run_local_clt


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--n-grid", type=parse_int_list, default=[100, 400, 1600])
    ap.add_argument("--trials", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)
    config = ExperimentConfig(r=args.r, n_grid=tuple(args.n_grid), trials=args.trials,
                              seed=args.seed, output=args.out, format=args.format, jobs=args.jobs)
    rows = run_local_clt(config)
    emit(render(rows, LOCAL_CLT_COLUMNS, config.format), config.output, sys.stdout)
    print(f"# power-normalised limit 1/sqrt(2 pi K_{args.r}) = {point_mass_limit(args.r):.6f}",
          file=sys.stderr)


if __name__ == "__main__":
    main()
