#!/usr/bin/env python3
"""Mean of D_{n,r,m} / D_{n,r} over uniform P_r(n) against m^{-1/r}.

    python3 scripts/ratio_limit.py --r 1 --n-grid 125,500,2000 --trials 10000 --seed 2024
"""
import argparse
import sys

from rdiff.cli import parse_int_list
from rdiff.experiments import METHODS, THEOREM3_COLUMNS, ExperimentConfig, emit, render, run_theorem3

DEFAULT_GRIDS = {1: "125,500,2000", 2: "32,125,500"}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--n-grid", type=parse_int_list, default=None)
    ap.add_argument("--m", type=parse_int_list, default=[2, 3, 4])
    ap.add_argument("--trials", type=int, default=10**4)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--method", choices=METHODS, default="rejection-sampler")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)
    grid = args.n_grid or parse_int_list(DEFAULT_GRIDS.get(args.r, "20,40,80"))
    config = ExperimentConfig(r=args.r, n_grid=tuple(grid), m_values=tuple(args.m),
                              trials=args.trials, seed=args.seed, method=args.method,
                              output=args.out, format=args.format, jobs=args.jobs)
    emit(render(run_theorem3(config), THEOREM3_COLUMNS, config.format), config.output, sys.stdout)


if __name__ == "__main__":
    main()
