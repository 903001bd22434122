"""Command-line interface.

Exit status: 0 on success, 1 on usage or input errors, 2 when a resource cap
or rejection budget refuses the request.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from ._caps import ENUM_CAP_ENV, COUNT_CAP_ENV, CapExceededError
from .asymptotics import asym_delta, log_asym_pr, ratio_to_exact
from .core import (
    bijection_forward,
    bijection_inverse,
    format_multiplicity,
    format_partition,
    parse_multiplicity,
    parse_partition,
    rth_differences,
)
from .counting import count_table, delta_exact
from .experiments import (
    CONVERGENCE_COLUMNS,
    LOCAL_CLT_COLUMNS,
    METHODS,
    THEOREM3_COLUMNS,
    ExperimentConfig,
    emit,
    render,
    run_convergence_tables,
    run_local_clt,
    run_theorem3,
)
from .sampling import (
    GeometricEnsembleSpec,
    RejectionBudgetExceeded,
    ZeroAcceptanceError,
    sample_conditioned_many,
    sample_exact_many,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_int_list(text: str) -> list[int]:
    """``5``, ``1,2,8`` or inclusive ranges ``0-10``, mixed freely."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        lo, sep, hi = tok.partition("-")
        try:
            if sep and lo:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(float(tok)) if "e" in tok.lower() else int(tok))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def _inputs(args):
    if args.items:
        return args.items
    return [line for line in sys.stdin.read().splitlines() if line.strip()]


def cmd_count(args, out):
    ns = args.n
    table = count_table(args.r, max(ns))
    fmt = args.format or ("plain" if len(ns) == 1 else "csv")
    if fmt == "plain":
        for n in ns:
            out.write(f"{table.counts[n]}\n")
        return
    rows = [{"n": n, "r": args.r, "p_r_exact": table.counts[n]} for n in ns]
    emit(render(rows, ("n", "r", "p_r_exact"), fmt), args.out, out)


def cmd_delta(args, out):
    table = count_table(args.r, max(args.n))
    rows = []
    for n in args.n:
        for m in args.m:
            st = delta_exact(n, args.r, m, table)
            rows.append({"n": n, "r": args.r, "m": m, "numerator": st.numerator,
                         "denominator": st.denominator, "value": st.as_float})
    emit(render(rows, ("n", "r", "m", "numerator", "denominator", "value"), args.format),
         args.out, out)


def cmd_map(args, out):
    for item in _inputs(args):
        if "^" in item:
            out.write(format_partition(bijection_inverse(parse_multiplicity(item, args.r))) + "\n")
        else:
            out.write(format_multiplicity(bijection_forward(parse_partition(item), args.r)) + "\n")


def cmd_diff(args, out):
    for item in _inputs(args):
        out.write(",".join(str(d) for d in rth_differences(parse_partition(item), args.r)) + "\n")


def cmd_sample(args, out):
    if args.method == "exact":
        samples = sample_exact_many(args.n, args.r, args.count, args.seed)
        mean_attempts = None
    else:
        spec = GeometricEnsembleSpec(args.r, args.n)
        recs = sample_conditioned_many(spec, args.count, args.seed, args.max_attempts)
        samples = [rec.multiplicities for rec in recs]
        mean_attempts = sum(rec.attempts for rec in recs) / len(recs) if recs else None
    lines = [format_multiplicity(mu) for mu in samples]
    summary = {"n": args.n, "r": args.r, "method": args.method, "seed": args.seed,
               "samples": len(samples), "mean_attempts": mean_attempts}
    emit("".join(line + "\n" for line in lines) + json.dumps(summary) + "\n", args.out, out)


def cmd_asym(args, out):
    ns = args.n_grid
    table = count_table(args.r, max(ns))
    rows = []
    for n in ns:
        p = table.counts[n]
        log_est = log_asym_pr(n, args.r)
        row = {"n": n, "exact": p,
               "estimate": math.exp(log_est) if log_est < 709 else math.inf,
               "log_estimate": log_est, "ratio": ratio_to_exact(log_est, p)}
        if args.m:
            st = delta_exact(n, args.r, args.m, table)
            est = asym_delta(n, args.r, args.m)
            row.update(m=args.m, delta_exact=st.as_float, delta_estimate=est,
                       delta_ratio=est / st.as_float)
        rows.append(row)
    cols = ("n", "exact", "estimate", "log_estimate", "ratio")
    if args.m:
        cols += ("m", "delta_exact", "delta_estimate", "delta_ratio")
    emit(render(rows, cols, args.format), args.out, out)


def cmd_experiment(args, out):
    config = ExperimentConfig(
        r=args.r, n_grid=tuple(args.n_grid), m_values=tuple(args.m), trials=args.trials,
        seed=args.seed, method=args.method, output=args.out, format=args.format,
        jobs=args.jobs, max_attempts=args.max_attempts)
    if args.kind == "theorem3":
        rows, cols = run_theorem3(config), THEOREM3_COLUMNS
    elif args.kind == "convergence":
        rows, cols = run_convergence_tables(config), CONVERGENCE_COLUMNS
    else:
        rows, cols = run_local_clt(config), LOCAL_CLT_COLUMNS
    emit(render(rows, cols, config.format), config.output, out)


def build_parser():
    p = _Parser(prog="rdiff", description="Partitions with nonnegative r-th differences.",
                epilog=f"Environment: {ENUM_CAP_ENV} overrides the enumeration cap, "
                       f"{COUNT_CAP_ENV} the count-table cap.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("csv", "json"), default="csv"):
        sp.add_argument("--r", type=int, required=True, help="difference order r >= 1")
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("count", help="exact p_r(n)")
    common(sp, ("plain", "csv", "json"), None)
    sp.add_argument("--n", type=parse_int_list, required=True, help="n, list or range a-b")
    sp.set_defaults(fn=cmd_count)

    sp = sub.add_parser("delta", help="exact average number of differences >= m")
    common(sp)
    sp.add_argument("--n", type=parse_int_list, required=True)
    sp.add_argument("--m", type=parse_int_list, default=[1])
    sp.set_defaults(fn=cmd_delta)

    sp = sub.add_parser("map", help="apply f (a,b,c) or f^-1 (s^k+...) to partitions")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("items", nargs="*", help="partitions; read from stdin when absent")
    sp.set_defaults(fn=cmd_map)

    sp = sub.add_parser("diff", help="print the r-th differences")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("items", nargs="*")
    sp.set_defaults(fn=cmd_diff)

    sp = sub.add_parser("sample", help="uniform random elements of P_r(n), image form")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=("reject", "exact"), default="reject")
    sp.add_argument("--max-attempts", type=int, default=10**9)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("asym", help="exact vs leading-order asymptotic counts")
    common(sp)
    sp.add_argument("--n-grid", type=parse_int_list, required=True)
    sp.add_argument("--m", type=int, default=None, help="also compare delta_{r,m}")
    sp.set_defaults(fn=cmd_asym)

    sp = sub.add_parser("experiment", help="run an experiment driver")
    sp.add_argument("kind", choices=("theorem3", "convergence", "clt"))
    common(sp)
    sp.add_argument("--n-grid", type=parse_int_list, required=True)
    sp.add_argument("--m", type=parse_int_list, default=[2, 3, 4])
    sp.add_argument("--trials", type=int, default=10**4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=METHODS, default="rejection-sampler")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--max-attempts", type=int, default=10**9)
    sp.set_defaults(fn=cmd_experiment)
    return p


def cli_main(argv=None, stdout=None) -> int:
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.fn(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (CapExceededError, RejectionBudgetExceeded, ZeroAcceptanceError) as exc:
        print(f"rdiff: refused: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"rdiff: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(cli_main())
