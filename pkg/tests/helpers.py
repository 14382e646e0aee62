"""Shared independent oracles for the test suite.

These deliberately avoid the code paths they are used to verify: the
quantile oracle is a plain bisection, the front oracles are exhaustive
enumerations over raw bit masks.
"""

from __future__ import annotations

import math

import numpy as np

SQRT2 = math.sqrt(2.0)


def bisect_quantile(p: float, tol: float = 1e-12) -> float:
    """Standard normal quantile by bisection on the erfc-based CDF.

    For p > 1/2 the bisection runs on the survival function against the
    exactly-representable 1 - p, which keeps full precision in both tails.
    """
    if p <= 0.5:
        lo, hi = -40.0, 0.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if 0.5 * math.erfc(-mid / SQRT2) < p:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    target = 1.0 - p
    lo, hi = 0.0, 40.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if 0.5 * math.erfc(mid / SQRT2) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def mask_to_bits(mask: int, n: int) -> np.ndarray:
    return np.array([(mask >> i) & 1 for i in range(n)], dtype=np.float64)


def enumerate_subsets(n: int):
    """Yield (mask, bits) over all 2^n selections."""
    for mask in range(1 << n):
        yield mask, mask_to_bits(mask, n)


def enumeration_mann_whitney_p(a, b) -> float:
    """Two-sided exact p by enumerating every label assignment (tie-free)."""
    from itertools import combinations

    pooled = list(a) + list(b)
    m = len(a)
    mn = m * len(b)

    def u_of(idx):
        chosen = set(idx)
        xs = [pooled[i] for i in idx]
        ys = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        return sum(1 for p in xs for q in ys if p > q)

    u_obs = u_of(tuple(range(m)))
    u_min = min(u_obs, mn - u_obs)
    hits = 0
    total = 0
    for idx in combinations(range(len(pooled)), m):
        u = u_of(idx)
        total += 1
        if u <= u_min or u >= mn - u_min:
            hits += 1
    return min(1.0, hits / total)
