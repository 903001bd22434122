"""Exact big-integer counts for partitions with nonnegative r-th differences.

Everything here is exact: Python ints throughout, ratios kept as
numerator/denominator pairs until they are rendered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator

from ._caps import CapExceededError, count_cap, enumeration_cap
from .core import (
    MultiplicityPartition,
    Partition,
    binomial_part_set,
    bijection_inverse,
)

__all__ = [
    "CountTable", "ExactStatistic", "count_pr_le", "pr_le_row", "count_pr",
    "count_table", "count_parts", "count_pr_k_m", "refined_counts",
    "delta_exact", "exact_mean_ratio", "enumerate_pr", "enumerate_image",
    "enumerate_partitions", "log_int",
]


@dataclass(frozen=True)
class CountTable:
    r: int
    n_max: int
    counts: tuple[int, ...]

    def __getitem__(self, n):
        if n < 0:
            return 0
        return self.counts[n]

    def __len__(self):
        return len(self.counts)


@dataclass(frozen=True)
class ExactStatistic:
    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")

    @property
    def as_float(self) -> float:
        # int / int is correctly rounded for arbitrarily large operands
        return self.numerator / self.denominator

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def log_int(x: int) -> float:
    """Natural log of a positive int of any size."""
    if x <= 0:
        raise ValueError("log of a nonpositive integer")
    bits = x.bit_length()
    if bits < 1000:
        return math.log(x)
    shift = bits - 60
    return math.log(x >> shift) + shift * math.log(2)


def pr_le_row(n_max: int, k: int, r: int) -> list[int]:
    """[p_{r,<=}(n, k) for n = 0..n_max], tabulating the (n, k) recurrence.

    p(n, k) = p(n - C(r+k-1, r), k) + p(n, k-1), with p(0, 0) = 1 and
    p(n, 0) = 0 for n > 0.  Row k depends only on itself and row k-1.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    row = [1] + [0] * n_max
    for kk in range(1, k + 1):
        s = comb(r + kk - 1, r)
        if s > n_max:
            break
        for n in range(s, n_max + 1):
            row[n] += row[n - s]
    return row


def count_pr_le(n: int, k: int, r: int) -> int:
    """Partitions in P_r(n) with at most k parts."""
    if n < 0:
        return 0
    return pr_le_row(n, k, r)[n]


def count_parts(n_max: int, parts) -> list[int]:
    """Partitions of 0..n_max into the given (distinct) part sizes."""
    t = [1] + [0] * n_max
    for s in sorted(set(parts)):
        if s < 1:
            raise ValueError("part sizes must be positive")
        for w in range(s, n_max + 1):
            t[w] += t[w - s]
    return t


def count_table(r: int, n_max: int, cap: int | None = None) -> CountTable:
    """p_r(n) for n = 0..n_max via the part-set DP."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    limit = count_cap() if cap is None else cap
    if n_max > limit:
        raise CapExceededError(
            f"count table up to n={n_max} exceeds the cap {limit} "
            f"(raise it with RDIFF_COUNT_CAP)")
    return _count_table(r, n_max)


@lru_cache(maxsize=32)
def _count_table(r, n_max):
    parts = binomial_part_set(r, n_max).parts
    return CountTable(r, n_max, tuple(count_parts(n_max, parts)))


def count_pr(n: int, r: int) -> int:
    """p_r(n) = |P_r(n)|."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return count_table(r, n).counts[n]


def _refined_layers(n_max, r, k_max):
    """Yield (k, T) where T[w][j] counts partitions of w into j parts from
    {C(i+r, r) : i < k}; T is updated in place, so consume immediately."""
    T = [[0] * (n_max + 1) for _ in range(n_max + 1)]
    T[0][0] = 1
    for k in range(1, k_max + 1):
        s = comb(k - 1 + r, r)
        if s > n_max:
            return
        for w in range(s, n_max + 1):
            src, dst = T[w - s], T[w]
            for j in range(1, w + 1):
                if src[j - 1]:
                    dst[j] += src[j - 1]
        yield k, s, T


def count_pr_k_m(n: int, k: int, m: int, r: int) -> int:
    """p_r(n, k, m): partitions in P_r(n) with k parts and D^r-sum m.

    Coefficient of q^n y^k x^m in
    1 + sum_k y^k x q^{C(k-1+r, r)} / prod_{i<k} (1 - x q^{C(i+r, r)}).
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if n < 0 or k < 0 or m < 0:
        return 0
    if k == 0:
        return int(n == 0 and m == 0)
    if m == 0 or m > n:
        return 0
    for kk, s, T in _refined_layers(n, r, k):
        if kk == k:
            return T[n - s][m - 1]
    return 0


def refined_counts(n: int, r: int) -> dict[tuple[int, int], int]:
    """{(k, m): p_r(n, k, m)} over all nonzero entries."""
    out = {}
    if n == 0:
        return {(0, 0): 1}
    for k, s, T in _refined_layers(n, r, n):
        for m1, c in enumerate(T[n - s]):
            if c:
                out[(k, m1 + 1)] = c
    return out


def delta_exact(n: int, r: int, m: int = 1, table: CountTable | None = None) -> ExactStatistic:
    """Average number of r-th differences >= m over P_r(n), exactly.

    numerator = sum_{i >= 0, m C(r+i, r) <= n} p_r(n - m C(r+i, r)).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if table is None or table.r != r or table.n_max < n:
        table = count_table(r, n)
    c = table.counts
    num = sum(c[n - m * s] for s in binomial_part_set(r, n // m).parts)
    return ExactStatistic(num, c[n])


def _check_enum_cap(n, r, cap):
    limit = enumeration_cap() if cap is None else cap
    total = count_pr(n, r)
    if total > limit:
        raise CapExceededError(
            f"P_{r}({n}) has {total} elements, above the enumeration cap {limit} "
            f"(raise it with RDIFF_ENUM_CAP)")


def enumerate_image(n: int, r: int, cap: int | None = None) -> Iterator[MultiplicityPartition]:
    """Partitions of n into parts C(l+r, r), largest part descending first."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    _check_enum_cap(n, r, cap)
    parts = binomial_part_set(r, n).parts
    yield from _image_rec(n, len(parts) - 1, parts, {}, r)


def _image_rec(w, idx, parts, acc, r):
    if w == 0:
        yield MultiplicityPartition(r, acc)
        return
    if idx == 0:
        yield MultiplicityPartition(r, {**acc, 0: w})
        return
    s = parts[idx]
    for j in range(w // s, -1, -1):
        nxt = {**acc, idx: j} if j else acc
        yield from _image_rec(w - j * s, idx - 1, parts, nxt, r)


def enumerate_pr(n: int, r: int, cap: int | None = None) -> Iterator[Partition]:
    """Every element of P_r(n) exactly once, via f^{-1} of the image side."""
    for mu in enumerate_image(n, r, cap):
        yield bijection_inverse(mu)


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All ordinary partitions of n (brute-force oracle, small n only)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")

    def rec(w, largest):
        if w == 0:
            yield ()
            return
        for p in range(min(w, largest), 0, -1):
            for rest in rec(w - p, p):
                yield (p,) + rest

    for parts in rec(n, n):
        yield Partition(parts)


def exact_mean_ratio(n: int, r: int, m: int, cap: int | None = None) -> Fraction:
    """E[D_{n,r,m} / D_{n,r}] over uniform P_r(n), by full enumeration."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    total = Fraction(0)
    count = 0
    for mu in enumerate_image(n, r, cap):
        total += Fraction(mu.count_at_least(m), mu.distinct_sizes())
        count += 1
    return total / count
