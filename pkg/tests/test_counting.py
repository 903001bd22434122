from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rdiff._caps import CapExceededError
from rdiff.core import bijection_forward, is_in_pr, positive_difference_count, rth_differences
from rdiff.counting import (
    count_parts,
    count_pr,
    count_pr_k_m,
    count_pr_le,
    count_table,
    delta_exact,
    enumerate_image,
    enumerate_partitions,
    enumerate_pr,
    exact_mean_ratio,
    log_int,
    pr_le_row,
    refined_counts,
)


def brute_pr(n, r):
    return [lam for lam in enumerate_partitions(n) if is_in_pr(lam, r)]


def pentagonal_p(n_max):
    """Euler's pentagonal-number recurrence, independent of any DP here."""
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        k, total = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


@pytest.fixture(scope="module")
def brute():
    return {(n, r): brute_pr(n, r) for r in (1, 2, 3) for n in range(31)}


def test_examples():
    assert count_pr(10, 2) == 7
    assert count_pr(0, 3) == 1
    assert count_pr(4, 2) == 2
    assert [count_pr(n, 1) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert count_pr(100, 1) == 190569292


def test_classical_partition_numbers():
    assert list(count_table(1, 100).counts) == pentagonal_p(100)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_oracles_agree(brute, r):
    table = count_table(r, 30)
    for n in range(31):
        members = brute[(n, r)]
        assert table.counts[n] == count_pr(n, r) == len(members)
        assert sum(1 for _ in enumerate_pr(n, r)) == len(members)
        assert set(enumerate_pr(n, r)) == set(members)
        by_k = Counter(len(lam) for lam in members)
        assert count_pr_le(n, n, r) == len(members)
        for k in range(0, 6):
            assert count_pr_le(n, k, r) == sum(c for kk, c in by_k.items() if kk <= k)
        refined = refined_counts(n, r)
        assert sum(refined.values()) == len(members)
        by_km = Counter((len(lam), sum(rth_differences(lam, r).diffs)) for lam in members)
        assert refined == dict(by_km)
        for (k, m), c in list(by_km.items())[:5]:
            assert count_pr_k_m(n, k, m, r) == c


@pytest.mark.parametrize("r", [1, 2, 3])
def test_at_most_k_parts_vs_part_dp(r):
    from math import comb
    for k in range(0, 12):
        row = pr_le_row(200, k, r)
        parts = [comb(r + j - 1, r) for j in range(1, k + 1)]
        assert row == count_parts(200, parts)
    assert count_pr_le(200, 200, r) == count_pr(200, r)


@pytest.mark.parametrize("r", [1, 2])
def test_generating_function_marginals(r):
    # summing p_r(n,k,m) over m recovers the exact-k-parts count
    for n in range(0, 61, 7):
        refined = refined_counts(n, r)
        for k in range(0, 8):
            exact_k = count_pr_le(n, k, r) - (count_pr_le(n, k - 1, r) if k else 0)
            assert sum(c for (kk, _), c in refined.items() if kk == k) == exact_k


def test_refined_edge_cases():
    assert count_pr_k_m(0, 0, 0, 2) == 1
    assert count_pr_k_m(5, 0, 0, 2) == 0
    assert count_pr_k_m(5, 2, 0, 2) == 0
    assert count_pr_k_m(-1, 1, 1, 1) == 0
    assert refined_counts(0, 2) == {(0, 0): 1}


@pytest.mark.parametrize("r", [1, 2, 3])
def test_delta_identity(brute, r):
    for n in range(1, 26):
        members = brute[(n, r)]
        for m in (1, 2, 3):
            direct = sum(sum(1 for d in rth_differences(lam, r).diffs if d >= m) for lam in members)
            st = delta_exact(n, r, m)
            assert st.denominator == len(members)
            assert st.numerator == direct
        assert delta_exact(n, r, 1).numerator == sum(positive_difference_count(lam, r)
                                                     for lam in members)


def test_delta_examples():
    assert delta_exact(4, 1).fraction == Fraction(7, 5)
    assert delta_exact(4, 1, 3).fraction == Fraction(1, 5)
    assert delta_exact(4, 1).as_float == pytest.approx(1.4)
    with pytest.raises(ValueError):
        delta_exact(4, 1, 0)
    with pytest.raises(ValueError):
        delta_exact(0, 1)


def test_exact_mean_ratio():
    assert exact_mean_ratio(4, 1, 2) == Fraction(1, 2)
    assert exact_mean_ratio(10, 2, 1) == 1
    brute_val = Fraction(0)
    members = brute_pr(12, 2)
    for lam in members:
        d = rth_differences(lam, 2).diffs
        brute_val += Fraction(sum(x >= 2 for x in d), sum(x >= 1 for x in d))
    assert exact_mean_ratio(12, 2, 2) == brute_val / len(members)


def test_enumerate_image_matches_forward(brute):
    for n in (0, 7, 19):
        assert set(enumerate_image(n, 2)) == {bijection_forward(lam, 2) for lam in brute[(n, 2)]}


def test_count_cap(monkeypatch):
    with pytest.raises(CapExceededError):
        count_table(1, 50, cap=10)
    monkeypatch.setenv("RDIFF_COUNT_CAP", "20")
    with pytest.raises(CapExceededError):
        count_pr(21, 1)
    assert count_pr(20, 1) == 627


def test_enumeration_cap(monkeypatch):
    with pytest.raises(CapExceededError):
        list(enumerate_pr(20, 1, cap=100))
    monkeypatch.setenv("RDIFF_ENUM_CAP", "10")
    with pytest.raises(CapExceededError):
        next(enumerate_image(10, 1))
    assert len(list(enumerate_image(10, 2))) == 7


@given(st.integers(1, 10**400))
def test_log_int(x):
    import math
    assert log_int(x) == pytest.approx(math.log(x), rel=1e-12)
