#!/usr/bin/env python3
"""Exact against leading-order p_r(n) and delta_{r,m}(n) along a grid of n.

    python3 scripts/convergence_tables.py --r 2 --n-grid 1000,4000,16000
"""
import argparse
import sys

from rdiff.cli import parse_int_list
from rdiff.experiments import CONVERGENCE_COLUMNS, ExperimentConfig, emit, render, run_convergence_tables

DEFAULT_GRIDS = {1: "200,400,800,1600", 2: "1000,4000,16000", 3: "4000,16000,64000"}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--n-grid", type=parse_int_list, default=None)
    ap.add_argument("--m", type=parse_int_list, default=[1, 2, 3, 4])
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)
    grid = args.n_grid or parse_int_list(DEFAULT_GRIDS.get(args.r, "1000,4000"))
    config = ExperimentConfig(r=args.r, n_grid=tuple(grid), m_values=tuple(args.m),
                              output=args.out, format=args.format)
    rows = run_convergence_tables(config)
    emit(render(rows, CONVERGENCE_COLUMNS, config.format), config.output, sys.stdout)


if __name__ == "__main__":
    main()
