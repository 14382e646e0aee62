"""Statistical post-processing for repeated-run comparisons.

Provides the two-sided Mann-Whitney U test (exact null distribution for
small tie-free samples, normal approximation with tie and continuity
corrections otherwise) and penalty-aware mean/std summaries.  The 0.05
significance convention is applied by the benchmark layer, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

_EXACT_LIMIT = 20


def _rank_sum_first(a: Sequence[float], b: Sequence[float]) -> tuple[float, list[int]]:
    """Midrank sum of sample a in the pooled ordering, plus tie group sizes."""
    pooled = [(v, 0) for v in a] + [(v, 1) for v in b]
    pooled.sort(key=lambda t: t[0])
    rank_sum = 0.0
    ties = []
    i = 0
    while i < len(pooled):
        j = i
        while j < len(pooled) and pooled[j][0] == pooled[i][0]:
            j += 1
        midrank = (i + j + 1) / 2.0  # ranks are 1-based
        rank_sum += midrank * sum(1 for k in range(i, j) if pooled[k][1] == 0)
        ties.append(j - i)
        i = j
    return rank_sum, ties


def _exact_u_cdf(u_limit: int, m: int, n: int) -> float:
    """P(U <= u_limit) under the tie-free null, by the U-count recurrence.

    counts(i, j)[u] is the number of label arrangements of i 'a' and j 'b'
    observations with statistic u; removing the largest pooled element gives
    counts(i, j) = shift_by_j(counts(i-1, j)) + counts(i, j-1).
    """
    if u_limit < 0:
        return 0.0
    counts: list[list[list[int]]] = [[[1] for _ in range(n + 1)] for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            row = [0] * (i * j + 1)
            for u, cnt in enumerate(counts[i - 1][j]):
                row[u + j] += cnt
            for u, cnt in enumerate(counts[i][j - 1]):
                row[u] += cnt
            counts[i][j] = row
    dist = counts[m][n]
    return sum(dist[: u_limit + 1]) / sum(dist)


def _exact_p(u1: float, u2: float, m: int, n: int) -> float:
    return min(1.0, 2.0 * _exact_u_cdf(int(round(min(u1, u2))), m, n))


def _approx_p(u1: float, u2: float, m: int, n: int, ties: list[int]) -> float:
    big_n = m + n
    tie_term = sum(t ** 3 - t for t in ties)
    sigma_sq = (m * n / 12.0) * ((big_n + 1) - tie_term / (big_n * (big_n - 1)))
    if sigma_sq <= 0.0:
        return 1.0
    z = (max(u1, u2) - m * n / 2.0 - 0.5) / math.sqrt(sigma_sq)
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


def mann_whitney_p(sample_a: Sequence[float], sample_b: Sequence[float]) -> float:
    """Two-sided Mann-Whitney p-value for two independent samples.

    Uses the exact null distribution when both samples have at most 20
    observations and the pooled sample is tie-free; otherwise the normal
    approximation with tie correction and a 0.5 continuity correction.
    Symmetric in its arguments and invariant to within-sample order.
    """
    m, n = len(sample_a), len(sample_b)
    if m == 0 or n == 0:
        raise ValueError("both samples must be non-empty")
    rank_sum_a, ties = _rank_sum_first(sample_a, sample_b)
    u1 = rank_sum_a - m * (m + 1) / 2.0
    u2 = m * n - u1
    if max(m, n) <= _EXACT_LIMIT and not any(t > 1 for t in ties):
        return _exact_p(u1, u2, m, n)
    return _approx_p(u1, u2, m, n, ties)


@dataclass
class SampleSummary:
    """Mean and sample standard deviation of per-run final values."""

    mean: float
    std: float
    count: int
    values: list[float]


def summarize(
    values: Sequence[float], penalty: float, feasible_flags: Sequence[bool]
) -> SampleSummary:
    """Aggregate per-run values, substituting the penalty for infeasible runs."""
    if len(values) != len(feasible_flags):
        raise ValueError("values and feasibility flags must align")
    if not values:
        raise ValueError("need at least one run")
    effective = [v if ok else penalty for v, ok in zip(values, feasible_flags)]
    count = len(effective)
    mean = sum(effective) / count
    if count > 1:
        std = math.sqrt(sum((v - mean) ** 2 for v in effective) / (count - 1))
    else:
        std = 0.0
    return SampleSummary(mean=mean, std=std, count=count, values=effective)
