"""Experiment drivers: ratio limit, convergence tables and the point-mass limit.

Every driver takes an ``ExperimentConfig`` and returns rows ordered by (n, m).
Per-n cells draw from ``derive_seed(config.seed, n)``, so results do not depend
on ``jobs`` or on completion order.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np

from ._caps import CapExceededError
from .asymptotics import asym_delta, log_asym_pr, ratio_to_exact
from .counting import count_table, delta_exact, exact_mean_ratio
from .sampling import (
    DEFAULT_MAX_ATTEMPTS,
    GeometricEnsembleSpec,
    RejectionBudgetExceeded,
    ZeroAcceptanceError,
    derive_seed,
    difference_statistics,
    point_mass_exact,
    point_mass_scaling,
    sample_conditioned_many,
    sample_exact_many,
)

METHODS = ("exact-enumeration", "exact-sampler", "rejection-sampler")
LOCAL_CLT_TARGET = 1 / math.sqrt(2 * math.pi)

THEOREM3_COLUMNS = ("n", "r", "m", "method", "trials", "estimate", "stderr", "target", "note")
CONVERGENCE_COLUMNS = ("n", "m", "p_exact", "p_asym", "ratio", "delta_exact", "delta_asym",
                       "delta_ratio", "prop3_ratio", "prop3_target")
LOCAL_CLT_COLUMNS = ("n", "r", "trials", "accepted", "estimate", "stderr", "target",
                     "exact_scaled", "sigma_scaled", "sigma_stderr")


@dataclass(frozen=True)
class ExperimentConfig:
    r: int
    n_grid: tuple[int, ...]
    m_values: tuple[int, ...] = (2, 3, 4)
    trials: int = 10**4
    seed: int = 0
    method: str = "rejection-sampler"
    output: str | None = None
    format: str = "csv"
    jobs: int = 1
    max_attempts: int = DEFAULT_MAX_ATTEMPTS

    def __post_init__(self):
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if not self.n_grid or list(self.n_grid) != sorted(set(self.n_grid)):
            raise ValueError(f"n_grid must be nonempty and strictly ascending: {self.n_grid}")
        if self.n_grid[0] < 1:
            raise ValueError("n_grid entries must be >= 1")
        if not self.m_values or min(self.m_values) < 1:
            raise ValueError("m_values must be nonempty and >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass(frozen=True)
class RatioEstimate:
    n: int
    r: int
    m: int
    estimate: float
    stderr: float
    target: float
    trials: int
    method: str = ""
    note: str = field(default="", compare=False)

    def as_row(self):
        return asdict(self)


def _map_cells(fn, grid, jobs):
    if jobs == 1 or len(grid) == 1:
        return [fn(n) for n in grid]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, grid))


def _theorem3_cell(config: ExperimentConfig, n: int) -> list[RatioEstimate]:
    r = config.r
    targets = {m: m ** (-1 / r) for m in config.m_values}

    def failed(msg):
        return [RatioEstimate(n, r, m, math.nan, math.nan, targets[m], 0, config.method, msg)
                for m in config.m_values]

    try:
        if config.method == "exact-enumeration":
            return [RatioEstimate(n, r, m, float(exact_mean_ratio(n, r, m)), 0.0,
                                  targets[m], 1, config.method)
                    for m in config.m_values]
        seed = derive_seed(config.seed, n)
        if config.method == "exact-sampler":
            samples = sample_exact_many(n, r, config.trials, seed)
        else:
            spec = GeometricEnsembleSpec(r, n)
            samples = [rec.multiplicities for rec in
                       sample_conditioned_many(spec, config.trials, seed, config.max_attempts)]
    except (CapExceededError, RejectionBudgetExceeded) as exc:
        return failed(str(exc))
    out = []
    d = np.array([mu.distinct_sizes() for mu in samples], dtype=np.float64)
    for m in config.m_values:
        dm = np.array([difference_statistics(mu, m)[1] for mu in samples], dtype=np.float64)
        ratios = dm / d
        se = float(ratios.std(ddof=1) / math.sqrt(len(ratios))) if len(ratios) > 1 else math.nan
        out.append(RatioEstimate(n, r, m, float(ratios.mean()), se, targets[m],
                                 len(ratios), config.method))
    return out


def run_theorem3(config: ExperimentConfig) -> list[RatioEstimate]:
    """Estimate E[D_{n,r,m} / D_{n,r}] along the grid against m^{-1/r}."""
    cells = _map_cells(partial(_theorem3_cell, config), config.n_grid, config.jobs)
    rows = [est for cell in cells for est in cell]
    return sorted(rows, key=lambda e: (e.n, e.m))


def run_convergence_tables(config: ExperimentConfig) -> list[dict]:
    """Exact vs asymptotic p_r(n) and delta_{r,m}(n), plus the ratio of deltas."""
    r = config.r
    table = count_table(r, config.n_grid[-1])
    rows = []
    for n in config.n_grid:
        p = table.counts[n]
        log_est = log_asym_pr(n, r)
        d1 = delta_exact(n, r, 1, table)
        for m in config.m_values:
            dm = delta_exact(n, r, m, table)
            d_asym = asym_delta(n, r, m)
            rows.append({
                "n": n, "m": m, "p_exact": p,
                "p_asym": math.exp(log_est) if log_est < 709 else math.inf,
                "ratio": ratio_to_exact(log_est, p),
                "delta_exact": dm.as_float, "delta_asym": d_asym,
                "delta_ratio": d_asym / dm.as_float,
                "prop3_ratio": dm.numerator / d1.numerator,
                "prop3_target": m ** (-1 / r),
            })
    return rows


def _clt_cell(config: ExperimentConfig, n: int) -> dict:
    r = config.r
    row = {"n": n, "r": r, "trials": config.trials, "target": LOCAL_CLT_TARGET}
    try:
        est = point_mass_scaling(n, r, config.trials, derive_seed(config.seed, n))
    except ZeroAcceptanceError as exc:
        row.update(accepted=0, estimate=math.nan, stderr=math.nan, exact_scaled=math.nan,
                   sigma_scaled=math.nan, sigma_stderr=math.nan, note=str(exc))
        return row
    row.update(accepted=est.accepted, estimate=est.scaled, stderr=est.scaled_stderr,
               exact_scaled=n ** est.scale_exponent * point_mass_exact(n, r),
               sigma_scaled=est.sigma_scaled, sigma_stderr=est.sigma_scaled_stderr)
    return row


def run_local_clt(config: ExperimentConfig) -> list[dict]:
    """Scaled point mass n^{(2r+1)/(2(r+1))} P(X_n = n) along the grid.

    ``exact_scaled`` uses the closed form p_r(n) q^n prod (1 - q^s);
    ``sigma_scaled`` normalises by sd(X_n) instead of the power of n.
    """
    return list(_map_cells(partial(_clt_cell, config), config.n_grid, config.jobs))


# -- output ------------------------------------------------------------------

def _fmt(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return None if not math.isfinite(value) else float(f"{value:.12g}")
    if isinstance(value, int) and not isinstance(value, bool) and abs(value) >= 2**53:
        return str(value)
    return value


def render(rows, columns, fmt="csv") -> str:
    """Fixed-column CSV (12 significant digits) or the equivalent JSON list."""
    rows = [r.as_row() if hasattr(r, "as_row") else r for r in rows]
    if fmt == "json":
        return json.dumps([{c: _json_value(row.get(c, "")) for c in columns} for row in rows],
                          indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c, "")) for c in columns])
    return buf.getvalue()


def emit(text: str, output: str | None, stream):
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        stream.write(text)
