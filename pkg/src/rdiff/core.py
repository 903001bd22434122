"""Partitions, r-th differences and the bijection onto binomial-part partitions.

A partition lambda = (l_1 >= ... >= l_k >= 1) has r-th differences given by
the recurrence

    D^0_i = l_i,   D^r_k = l_k,   D^r_i = D^{r-1}_i - D^{r-1}_{i+1}  (i < k).

lambda lies in P_r when every D^r_i is nonnegative.  The map f sends lambda to
the partition in which the part C(i-1+r, r) has multiplicity D^r_i; it is a
weight-preserving bijection from P_r(n) onto the partitions of n into parts
C(l+r, r), l >= 0.  For r = 1 it is conjugation.

Image partitions are stored sparsely, keyed by the binomial index l of the part
C(l+r, r), because they have few distinct parts but possibly huge
multiplicities.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping


class NotInPrError(ValueError):
    """The partition has a negative r-th difference."""


def _check_order(r, allow_zero=False):
    if not isinstance(r, int) or isinstance(r, bool):
        raise TypeError(f"order r must be an int, got {type(r).__name__}")
    low = 0 if allow_zero else 1
    if r < low:
        raise ValueError(f"order r must be >= {low}, got {r}")


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...]
    weight: int = field(init=False, compare=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        for p in parts:
            if not isinstance(p, int) or isinstance(p, bool):
                raise TypeError(f"parts must be ints, got {p!r}")
        if parts and parts[-1] < 1:
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "weight", sum(parts))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return format_partition(self)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p >= j)
                               for j in range(1, self.parts[0] + 1)))


@dataclass(frozen=True)
class DifferenceVector:
    """The r-th differences of a partition, one entry per part."""

    diffs: tuple[int, ...]
    order: int

    def __post_init__(self):
        object.__setattr__(self, "diffs", tuple(self.diffs))
        _check_order(self.order, allow_zero=True)

    def __len__(self):
        return len(self.diffs)

    def __iter__(self):
        return iter(self.diffs)

    def is_nonnegative(self):
        return all(d >= 0 for d in self.diffs)

    def reconstruct(self) -> tuple[int, ...]:
        """Recover the parts: l_i = sum_{j>=i} C(j-i+r-1, r-1) * D^r_j."""
        r, d, k = self.order, self.diffs, len(self.diffs)
        if r == 0:
            return d
        return tuple(sum(comb(j - i + r - 1, r - 1) * d[j] for j in range(i, k))
                     for i in range(k))


@dataclass(frozen=True)
class BinomialPartSet:
    """Ascending part sizes C(l+r, r) not exceeding ``cap``."""

    r: int
    cap: int
    parts: tuple[int, ...]

    def __len__(self):
        return len(self.parts)


@lru_cache(maxsize=256)
def binomial_part_set(r: int, cap: int) -> BinomialPartSet:
    _check_order(r)
    if cap < 0:
        raise ValueError(f"cap must be nonnegative, got {cap}")
    parts = []
    ell = 0
    while (s := comb(ell + r, r)) <= cap:
        parts.append(s)
        ell += 1
    return BinomialPartSet(r, cap, tuple(parts))


def binomial_index(size: int, r: int) -> int:
    """Return l with C(l+r, r) == size, or raise ValueError."""
    _check_order(r)
    if size < 1:
        raise ValueError(f"part size must be positive, got {size}")
    if r == 1:
        return size - 1
    lo, hi = 0, 1
    while comb(hi + r, r) < size:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if comb(mid + r, r) < size:
            lo = mid + 1
        else:
            hi = mid
    if comb(lo + r, r) != size:
        raise ValueError(f"{size} is not of the form C(l+{r}, {r})")
    return lo


class MultiplicityPartition:
    """Partition into parts C(l+r, r), stored as {l: multiplicity}.

    Zero multiplicities are dropped on construction.  Instances are immutable
    and hashable.
    """

    __slots__ = ("_order", "_mult", "_weight")

    def __init__(self, order: int, multiplicities: Mapping[int, int] | None = None):
        _check_order(order)
        mult = {}
        for ell, count in (multiplicities or {}).items():
            if not isinstance(ell, int) or ell < 0:
                raise ValueError(f"binomial index must be a nonnegative int, got {ell!r}")
            if not isinstance(count, int) or count < 0:
                raise ValueError(f"multiplicity must be a nonnegative int, got {count!r}")
            if count:
                mult[ell] = count
        self._order = order
        self._mult = dict(sorted(mult.items()))
        self._weight = sum(c * comb(ell + order, order) for ell, c in self._mult.items())

    @classmethod
    def from_part_counts(cls, counts: Mapping[int, int], order: int):
        """Build from {part size: multiplicity}; sizes must be binomial."""
        return cls(order, {binomial_index(size, order): c for size, c in counts.items()})

    @classmethod
    def from_parts(cls, parts: Iterable[int], order: int):
        counts: dict[int, int] = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        return cls.from_part_counts(counts, order)

    @property
    def order(self):
        return self._order

    @property
    def part_set_order(self):
        return self._order

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(self._mult)

    @property
    def weight(self):
        return self._weight

    def part_counts(self) -> dict[int, int]:
        """{part size: multiplicity}, largest part first."""
        r = self._order
        return {comb(ell + r, r): c for ell, c in reversed(self._mult.items())}

    def largest_index(self):
        """Binomial index of the largest part, or -1 for the empty partition."""
        return next(reversed(self._mult), -1)

    def distinct_sizes(self):
        return len(self._mult)

    def count_at_least(self, m):
        return sum(1 for c in self._mult.values() if c >= m)

    def to_partition(self) -> Partition:
        """Expand into a plain decreasing partition (may be long)."""
        out = []
        for size, c in self.part_counts().items():
            out.extend([size] * c)
        return Partition(tuple(out))

    def __eq__(self, other):
        if not isinstance(other, MultiplicityPartition):
            return NotImplemented
        return self._order == other._order and self._mult == other._mult

    def __hash__(self):
        return hash((self._order, tuple(self._mult.items())))

    def __repr__(self):
        return f"MultiplicityPartition(order={self._order}, {self._mult})"

    def __str__(self):
        return format_multiplicity(self)


def rth_differences(lam: Partition, r: int) -> DifferenceVector:
    """r-th differences of ``lam``; r = 0 returns the parts themselves."""
    _check_order(r, allow_zero=True)
    d = list(lam.parts)
    for _ in range(r if d else 0):
        d = [d[i] - d[i + 1] for i in range(len(d) - 1)] + [d[-1]]
    return DifferenceVector(tuple(d), r)


def is_in_pr(lam: Partition, r: int) -> bool:
    """True iff every r-th difference of ``lam`` is nonnegative.

    All indices 1..k are constrained; the empty partition belongs to every P_r.
    """
    _check_order(r)
    return rth_differences(lam, r).is_nonnegative()


def bijection_forward(lam: Partition, r: int) -> MultiplicityPartition:
    """f(lam): the part C(i-1+r, r) gets multiplicity D^r_i, i = 1..k."""
    _check_order(r)
    diffs = rth_differences(lam, r).diffs
    for i, d in enumerate(diffs):
        if d < 0:
            raise NotInPrError(
                f"{format_partition(lam)} is not in P_{r}: difference {i + 1} is {d}")
    return MultiplicityPartition(r, dict(enumerate(diffs)))


def bijection_inverse(mu: MultiplicityPartition) -> Partition:
    """f^{-1}(mu), with k - 1 the binomial index of the largest part of mu."""
    r = mu.order
    k = mu.largest_index() + 1
    mult = mu.multiplicities
    d = [mult.get(i, 0) for i in range(k)]
    # undo the difference operator r times: suffix sums
    for _ in range(r):
        acc = 0
        for i in range(k - 1, -1, -1):
            acc += d[i]
            d[i] = acc
    return Partition(tuple(d))


def positive_difference_count(lam: Partition, r: int) -> int:
    """Number of indices with D^r_i >= 1."""
    return count_at_least(lam, r, 1)


def count_at_least(lam: Partition, r: int, m: int) -> int:
    """Number of indices with D^r_i >= m (lam must lie in P_r)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    diffs = rth_differences(lam, r)
    if not diffs.is_nonnegative():
        raise NotInPrError(f"{format_partition(lam)} is not in P_{r}")
    return sum(1 for d in diffs if d >= m)


# -- text formats ---------------------------------------------------------

def format_partition(lam: Partition | Iterable[int]) -> str:
    """``6,3,1``; the empty partition is the empty string."""
    parts = lam.parts if isinstance(lam, Partition) else tuple(lam)
    return ",".join(str(p) for p in parts)


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if not text:
        return Partition(())
    try:
        parts = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse partition {text!r}") from None
    return Partition(parts)


def format_multiplicity(mu: MultiplicityPartition) -> str:
    """``6^1+3^1+1^1``, largest part first; empty partition is the empty string."""
    return "+".join(f"{size}^{c}" for size, c in mu.part_counts().items())


def parse_multiplicity(text: str, r: int) -> MultiplicityPartition:
    text = text.strip()
    counts: dict[int, int] = {}
    if text:
        for term in text.split("+"):
            size, sep, c = term.strip().partition("^")
            try:
                size_i, c_i = int(size), (int(c) if sep else 1)
            except ValueError:
                raise ValueError(f"cannot parse multiplicity term {term!r}") from None
            counts[size_i] = counts.get(size_i, 0) + c_i
    return MultiplicityPartition.from_part_counts(counts, r)
