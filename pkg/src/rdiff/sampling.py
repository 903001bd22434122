"""Random partitions into binomial parts C(l+r, r).

Rejection sampler
-----------------
Let Gamma_l be independent geometric variables with P(Gamma_l >= k) = q^{s_l k},
s_l = C(l+r, r) <= n.  Conditioned on X = sum s_l Gamma_l = n, the
multiplicity vector is uniform over partitions of n into the parts s_l, and
hence (through the bijection) uniform over P_r(n), whatever q is.  The tilt
q = q_n makes E X close to n so that acceptance decays only polynomially.

Parts larger than n are left out: any positive multiplicity would overshoot.

Each full vector is drawn in two exact stages:

* the indicators {Gamma_l >= 1} are the events {N_l >= 1} for independent
  N_l ~ Poisson(-log(1 - q^{s_l})), realised as one Poisson number of points
  per trial scattered over the parts in proportion to the rates;
* for every part that is hit, Gamma_l = 1 + floor(log(U) / (s_l log q)) by
  memorylessness, with U uniform on (0, 1].

Only about (number of distinct parts) random numbers are spent per trial
instead of one per part.  ``draw_weights(..., engine="dense")`` keeps the plain
per-part inverse-CDF draw as an independent cross-check.

RNG
---
All randomness comes from numpy's PCG64 bit generator.  Per-task seeds are
split from a master seed with ``derive_seed``, which feeds
``numpy.random.SeedSequence(master, spawn_key=keys)``.  The same seed gives
the same samples on every platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._caps import CapExceededError
from .asymptotics import tilt_parameter
from .core import MultiplicityPartition, binomial_part_set
from .counting import CountTable, count_pr, log_int

__all__ = [
    "GeometricEnsembleSpec", "SampleRecord", "EnsembleMoments",
    "PointMassEstimate", "RejectionBudgetExceeded", "ZeroAcceptanceError",
    "make_rng", "derive_seed", "ensemble_moments", "draw_weights",
    "sample_conditioned", "sample_conditioned_many", "ExactSampler",
    "sample_exact", "sample_exact_many", "point_mass_scaling",
    "point_mass_exact", "tail_factor", "difference_statistics",
    "exact_sampler_cap",
]

DEFAULT_MAX_ATTEMPTS = 10**9
_POINTS_PER_BATCH = 1 << 21


class RejectionBudgetExceeded(RuntimeError):
    def __init__(self, attempts, accepted, message=None):
        self.attempts = attempts
        self.accepted = accepted
        super().__init__(message or
                         f"rejection budget exhausted after {attempts} attempts "
                         f"({accepted} accepted)")


class ZeroAcceptanceError(RuntimeError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master: int, *keys: int) -> int:
    """Independent 64-bit seed for the task labelled by ``keys``."""
    ss = np.random.SeedSequence(master, spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class GeometricEnsembleSpec:
    r: int
    n: int
    q: float | None = None
    part_sizes: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.q is None:
            object.__setattr__(self, "q", tilt_parameter(self.n, self.r))
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        object.__setattr__(self, "part_sizes", binomial_part_set(self.r, self.n).parts)

    @property
    def part_indices(self) -> range:
        return range(len(self.part_sizes))


@dataclass(frozen=True)
class SampleRecord:
    multiplicities: MultiplicityPartition
    attempts: int
    seed: int


@dataclass(frozen=True)
class EnsembleMoments:
    mean: float
    variance: float
    predicted_point_mass_scale: float


def ensemble_moments(spec: GeometricEnsembleSpec) -> EnsembleMoments:
    """E X and var X of the truncated ensemble; the point-mass scale is the
    Gaussian local-limit prediction 1/sqrt(2 pi var X) for P(X = n)."""
    s = np.asarray(spec.part_sizes, dtype=np.float64)
    qs = np.exp(s * math.log(spec.q))
    one_minus = -np.expm1(s * math.log(spec.q))
    mean = float(np.sum(s * qs / one_minus))
    var = float(np.sum(s * s * qs / one_minus**2))
    return EnsembleMoments(mean, var, 1 / math.sqrt(2 * math.pi * var))


class _SparseEngine:
    def __init__(self, spec):
        self.n = spec.n
        s = np.asarray(spec.part_sizes, dtype=np.float64)
        log_q = math.log(spec.q)
        self.sizes = s
        self.L = len(s)
        rates = -np.log(-np.expm1(s * log_q))
        self.cum = np.cumsum(rates)
        self.total_rate = float(self.cum[-1])
        self.inv_step = 1.0 / (s * log_q)
        self.batch = max(256, int(_POINTS_PER_BATCH / max(self.total_rate, 1.0)))

    def draw(self, rng, size):
        """Return (weights, trial_of_cell, part_of_cell, gamma_of_cell)."""
        counts = rng.poisson(self.total_rate, size)
        trial = np.repeat(np.arange(size, dtype=np.int64), counts)
        u = rng.random(trial.size) * self.total_rate
        part = np.minimum(np.searchsorted(self.cum, u, side="right"), self.L - 1)
        keys = np.unique(trial * self.L + part)
        trial_c = keys // self.L
        part_c = keys % self.L
        # 1 - random() lies in (0, 1]
        excess = np.floor(np.log(1.0 - rng.random(keys.size)) * self.inv_step[part_c])
        gamma = 1 + excess.astype(np.int64)
        weights = np.bincount(trial_c, weights=self.sizes[part_c] * gamma, minlength=size)
        return weights, trial_c, part_c, gamma


def _dense_weights(spec, rng, size):
    s = np.asarray(spec.part_sizes, dtype=np.float64)
    inv_step = 1.0 / (s * math.log(spec.q))
    u = 1.0 - rng.random((size, len(s)))
    gamma = np.floor(np.log(u) * inv_step)
    return gamma @ s


def draw_weights(spec: GeometricEnsembleSpec, trials: int, rng_seed: int,
                 engine: str = "sparse") -> np.ndarray:
    """Unconditioned draws of X = sum s_l Gamma_l (float64, exact integers)."""
    rng = make_rng(rng_seed)
    out = []
    if engine == "sparse":
        eng = _SparseEngine(spec)
        step = eng.batch
        draw = lambda k: eng.draw(rng, k)[0]
    elif engine == "dense":
        step = max(1, (1 << 22) // len(spec.part_sizes))
        draw = lambda k: _dense_weights(spec, rng, k)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    done = 0
    while done < trials:
        k = min(step, trials - done)
        out.append(draw(k))
        done += k
    return np.concatenate(out) if out else np.zeros(0)


def sample_conditioned_many(spec: GeometricEnsembleSpec, count: int, rng_seed: int,
                            max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> list[SampleRecord]:
    """``count`` exact-uniform samples by whole-vector rejection.

    Batches have a fixed size per spec, so the first k samples do not depend on
    ``count``.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    eng = _SparseEngine(spec)
    rng = make_rng(rng_seed)
    records: list[SampleRecord] = []
    used = 0
    last_accept = 0
    while len(records) < count:
        if used >= max_attempts:
            raise RejectionBudgetExceeded(used, len(records))
        size = min(eng.batch, max_attempts - used)
        weights, trial_c, part_c, gamma = eng.draw(rng, size)
        hits = np.flatnonzero(weights == spec.n)
        if hits.size:
            starts = np.searchsorted(trial_c, hits, side="left")
            stops = np.searchsorted(trial_c, hits, side="right")
            for t, a, b in zip(hits.tolist(), starts.tolist(), stops.tolist()):
                mult = dict(zip(part_c[a:b].tolist(), gamma[a:b].tolist()))
                mu = MultiplicityPartition(spec.r, mult)
                assert mu.weight == spec.n
                records.append(SampleRecord(mu, used + t + 1 - last_accept, rng_seed))
                last_accept = used + t + 1
                if len(records) == count:
                    break
        used += size
    return records


def sample_conditioned(spec: GeometricEnsembleSpec, rng_seed: int,
                       max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> SampleRecord:
    return sample_conditioned_many(spec, 1, rng_seed, max_attempts)[0]


def _randbelow(rng, bound):
    """Uniform integer in [0, bound) for arbitrarily large ``bound``."""
    bits = bound.bit_length()
    words = (bits + 63) // 64
    drop = words * 64 - bits
    while True:
        x = 0
        for w in rng.bit_generator.random_raw(words).tolist():
            x = (x << 64) | w
        x >>= drop
        if x < bound:
            return x


def exact_sampler_cap(r: int) -> int:
    return 2000 if r == 1 else 10**4


class ExactSampler:
    """Uniform sampler by unranking over part-restricted count tables.

    Level l of the table counts partitions of w into the parts s_0..s_l.
    """

    def __init__(self, n: int, r: int, cap: int | None = None):
        limit = exact_sampler_cap(r) if cap is None else cap
        if n > limit:
            raise CapExceededError(f"exact sampler supports n <= {limit} for r={r}, got {n}")
        if n < 0:
            raise ValueError("n must be >= 0")
        self.n, self.r = n, r
        self.parts = binomial_part_set(r, n).parts if n else ()
        rows = []
        row = [1] + [0] * n
        for s in self.parts:
            row = row[:]
            for w in range(s, n + 1):
                row[w] += row[w - s]
            rows.append(row)
        self.rows = rows
        self.total = rows[-1][n] if rows else 1

    def unrank(self, u: int) -> MultiplicityPartition:
        if not 0 <= u < self.total:
            raise ValueError("rank out of range")
        w = self.n
        mult = {}
        for ell in range(len(self.parts) - 1, 0, -1):
            s, below = self.parts[ell], self.rows[ell - 1]
            j = 0
            while u >= below[w - j * s]:
                u -= below[w - j * s]
                j += 1
            if j:
                mult[ell] = j
            w -= j * s
        if w:
            mult[0] = w
        return MultiplicityPartition(self.r, mult)

    def sample(self, rng: np.random.Generator) -> MultiplicityPartition:
        if self.n == 0:
            return MultiplicityPartition(self.r, {})
        return self.unrank(_randbelow(rng, self.total))


@lru_cache(maxsize=16)
def _exact_sampler(n, r):
    return ExactSampler(n, r)


def sample_exact(n: int, r: int, table: CountTable | None = None,
                 rng_seed: int = 0) -> MultiplicityPartition:
    return sample_exact_many(n, r, 1, rng_seed, table)[0]


def sample_exact_many(n: int, r: int, count: int, rng_seed: int,
                      table: CountTable | None = None) -> list[MultiplicityPartition]:
    sampler = _exact_sampler(n, r)
    if table is not None:
        if table.r != r or table.n_max < n:
            raise ValueError("count table does not cover (n, r)")
        if table.counts[n] != sampler.total:
            raise ValueError("count table disagrees with the sampler's table")
    rng = make_rng(rng_seed)
    return [sampler.sample(rng) for _ in range(count)]


def tail_factor(r: int, n: int, q: float) -> float:
    """prod over parts s > n of (1 - q^s): P(no part above n in the full ensemble)."""
    log_q = math.log(q)
    ell = len(binomial_part_set(r, n).parts)
    total = 0.0
    while True:
        x = math.comb(ell + r, r) * log_q
        if x < -745:
            break
        total += math.log1p(-math.exp(x))
        ell += 1
    return math.exp(total)


def point_mass_exact(n: int, r: int, q: float | None = None) -> float:
    """P(X = n) for the untruncated ensemble: p_r(n) q^n prod_s (1 - q^s)."""
    if q is None:
        q = tilt_parameter(n, r)
    log_q = math.log(q)
    total = log_int(count_pr(n, r)) + n * log_q
    ell = 0
    while True:
        x = math.comb(ell + r, r) * log_q
        if x < -745:
            break
        total += math.log1p(-math.exp(x))
        ell += 1
    return math.exp(total)


@dataclass(frozen=True)
class PointMassEstimate:
    n: int
    r: int
    q: float
    trials: int
    accepted: int
    tail: float
    probability: float
    stderr: float
    scale_exponent: float
    sigma: float

    @property
    def scaled(self) -> float:
        """n^{(2r+1)/(2(r+1))} P(X_n = n)."""
        return self.n ** self.scale_exponent * self.probability

    @property
    def scaled_stderr(self) -> float:
        return self.n ** self.scale_exponent * self.stderr

    @property
    def sigma_scaled(self) -> float:
        """sd(X_n) P(X_n = n), whose Gaussian limit is 1/sqrt(2 pi)."""
        return self.sigma * self.probability

    @property
    def sigma_scaled_stderr(self) -> float:
        return self.sigma * self.stderr


def point_mass_scaling(n: int, r: int, num_trials: int, rng_seed: int,
                       q: float | None = None) -> PointMassEstimate:
    """Monte Carlo P(X_n = n), from the acceptance frequency of the sampler.

    The frequency is multiplied by ``tail_factor`` so that the estimate refers
    to the full (untruncated) ensemble.
    """
    if num_trials < 10**4:
        raise ValueError(f"need at least 10^4 trials, got {num_trials}")
    spec = GeometricEnsembleSpec(r, n, q)
    weights = draw_weights(spec, num_trials, rng_seed)
    accepted = int(np.count_nonzero(weights == n))
    moments = ensemble_moments(spec)
    if accepted == 0:
        raise ZeroAcceptanceError(
            f"no acceptances in {num_trials} trials at n={n}, r={r}, q={spec.q:.6g}; "
            f"Gaussian prediction {moments.predicted_point_mass_scale:.3g} per trial")
    tail = tail_factor(r, n, spec.q)
    freq = accepted / num_trials
    stderr = math.sqrt(freq * (1 - freq) / num_trials) * tail
    return PointMassEstimate(
        n=n, r=r, q=spec.q, trials=num_trials, accepted=accepted, tail=tail,
        probability=freq * tail, stderr=stderr,
        scale_exponent=(2 * r + 1) / (2 * (r + 1)),
        sigma=math.sqrt(moments.variance))


def difference_statistics(sample: SampleRecord | MultiplicityPartition, m: int) -> tuple[int, int]:
    """(D, D_m): distinct part sizes, and sizes with multiplicity >= m."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    mu = sample.multiplicities if isinstance(sample, SampleRecord) else sample
    return mu.distinct_sizes(), mu.count_at_least(m)
