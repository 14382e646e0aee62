"""Independent ground-truth generators for verifying the optimizers.

Two routes: exhaustive enumeration of every subset (tiny instances, any
problem kind), and the weighting-breakpoint greedy characterization of the
uniform-constraint problem, which realizes all optimal trade-offs by
sorting items under finitely many mean/variance weightings and taking
prefixes.  The two must agree on the per-cardinality surrogate optima; the
test suite holds them against each other and against the optimizers.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, NamedTuple

import numpy as np

from .problems import DOMINATING_SET, ProblemInstance, StochasticWeights

_MAX_BRUTE_FORCE_N = 24
_CHUNK = 1 << 16
_MIN_LAMBDA_GAP = 1e-12


class FrontPoint(NamedTuple):
    mu: float
    var: float
    witness: np.ndarray


def _pareto_min2(points: list[tuple[float, float, int]]) -> list[tuple[float, float, int]]:
    """Non-dominated subset for minimization of both coordinates, mu-sorted."""
    points.sort(key=lambda p: (p[0], p[1]))
    front: list[tuple[float, float, int]] = []
    best_v = np.inf
    for p in points:
        if p[1] < best_v:
            front.append(p)
            best_v = p[1]
    return front


def _mask_to_bits(mask: int, n: int) -> np.ndarray:
    return np.array([(mask >> i) & 1 for i in range(n)], dtype=np.float64)


def brute_force_front(inst: ProblemInstance) -> dict[int, list[FrontPoint]]:
    """Exact per-constraint-value Pareto sets of (mu, v) over all 2^n subsets.

    Returns, for every achievable c, the non-dominated (mu, v) pairs with one
    witness solution each, sorted by mu ascending.  Refuses instances with
    more than 24 elements.
    """
    n = inst.n
    if n > _MAX_BRUTE_FORCE_N:
        raise ValueError(f"brute force limited to n <= {_MAX_BRUTE_FORCE_N}, got {n}")
    mu_w = inst.weights.mu
    var_w = inst.weights.var
    if inst.kind == DOMINATING_SET:
        g = inst.graph
        nbhd = np.array(
            [(1 << v) | sum(1 << int(u) for u in g.adjacency[v]) for v in range(n)],
            dtype=np.int64,
        )
    by_c: dict[int, list[tuple[float, float, int]]] = {}
    exps = np.arange(n, dtype=np.int64)
    for start in range(0, 1 << n, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.int64)
        bits = ((masks[:, None] >> exps) & 1).astype(np.float64)
        mus = bits @ mu_w
        vs = bits @ var_w
        if inst.kind == DOMINATING_SET:
            cs = np.zeros(len(masks), dtype=np.int64)
            for v in range(n):
                cs += (masks & nbhd[v]) != 0
        else:
            cs = bits.sum(axis=1).astype(np.int64)
        for i in range(len(masks)):
            by_c.setdefault(int(cs[i]), []).append((float(mus[i]), float(vs[i]), int(masks[i])))
    front: dict[int, list[FrontPoint]] = {}
    for c, pts in by_c.items():
        front[c] = [
            FrontPoint(mu, var, _mask_to_bits(mask, n)) for mu, var, mask in _pareto_min2(pts)
        ]
    return front


@dataclass(frozen=True)
class LambdaBreakpoints:
    """Sorted weighting breakpoints fenced by 0 and 1, with interval midpoints.

    Between consecutive breakpoints the item order under
    f(e_i) = lambda * mu_i + (1 - lambda) * var_i is constant, so the
    midpoints cover every order that can yield an optimal trade-off.
    """

    lambdas: tuple
    midpoints: tuple


def _raw_breakpoints(weights: StochasticWeights, exact: bool) -> list:
    mu, var = weights.mu, weights.var
    n = weights.n
    values = []
    for i in range(n):
        for j in range(n):
            if var[i] < var[j] and mu[i] > mu[j]:
                if exact:
                    num = Fraction(var[j]) - Fraction(var[i])
                    den = (Fraction(mu[i]) - Fraction(mu[j])) + num
                    values.append(num / den)
                else:
                    num = var[j] - var[i]
                    values.append(num / ((mu[i] - mu[j]) + num))
    return values


def compute_breakpoints(weights: StochasticWeights) -> LambdaBreakpoints:
    """All weighting values where the item order can switch, deduplicated.

    Falls back to exact rational arithmetic (and warns) when two distinct
    breakpoints come closer than 1e-12, which would make the float midpoints
    unreliable; the fallback requires integer-valued weights.
    """
    uniq = sorted(set(_raw_breakpoints(weights, exact=False)))
    zero, one = 0.0, 1.0
    if uniq and np.diff([zero, *uniq, one]).min() < _MIN_LAMBDA_GAP:
        warnings.warn(
            "breakpoint gap below 1e-12; switching to exact rational arithmetic",
            stacklevel=2,
        )
        if not (np.equal(np.mod(weights.mu, 1), 0).all() and np.equal(np.mod(weights.var, 1), 0).all()):
            raise ValueError("exact breakpoint fallback requires integer weights")
        uniq = sorted(set(_raw_breakpoints(weights, exact=True)))
        zero, one = Fraction(0), Fraction(1)
    lambdas = (zero, *uniq, one)
    midpoints = tuple((lambdas[i] + lambdas[i + 1]) / 2 for i in range(len(lambdas) - 1))
    return LambdaBreakpoints(lambdas=lambdas, midpoints=midpoints)


def greedy_front(weights: StochasticWeights) -> dict[int, list[tuple[float, float]]]:
    """Per-cardinality optimal (mu, v) pairs from greedy prefixes.

    For each breakpoint midpoint, items are sorted by
    lambda * mu_i + (1 - lambda) * var_i (ties by index) and every prefix
    emits its (mu, v) sums; the union per cardinality k, reduced to its
    non-dominated subset, is returned for k = 0..n.
    """
    n = weights.n
    bps = compute_breakpoints(weights)
    per_k: dict[int, set[tuple[float, float]]] = {k: set() for k in range(n + 1)}
    for lam in bps.midpoints:
        if isinstance(lam, Fraction):
            scores = [lam * Fraction(float(m)) + (1 - lam) * Fraction(float(v))
                      for m, v in zip(weights.mu, weights.var)]
            order = sorted(range(n), key=lambda i: (scores[i], i))
        else:
            scores = lam * weights.mu + (1.0 - lam) * weights.var
            order = np.argsort(scores, kind="stable")
        mu_pref = np.cumsum(weights.mu[order])
        var_pref = np.cumsum(weights.var[order])
        per_k[0].add((0.0, 0.0))
        for k in range(1, n + 1):
            per_k[k].add((float(mu_pref[k - 1]), float(var_pref[k - 1])))
    result: dict[int, list[tuple[float, float]]] = {}
    for k, pairs in per_k.items():
        pts = [(m, v, 0) for m, v in pairs]
        result[k] = [(m, v) for m, v, _ in _pareto_min2(pts)]
    return result


def write_front_csv(front: dict[int, list], stream: IO[str]) -> None:
    """Serialize a per-cardinality front as ``k,mu,var`` rows."""
    writer = csv.writer(stream)
    writer.writerow(["k", "mu", "var"])
    for k in sorted(front):
        for point in front[k]:
            writer.writerow([k, repr(float(point[0])), repr(float(point[1]))])
