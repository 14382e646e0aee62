"""Pareto archive for the 3-objective formulation (minimize mu, v; maximize c).

The population always consists of mutually non-dominating solutions:
insertion rejects offspring that are strictly dominated and evicts every
member the offspring weakly dominates (exact duplicates included).
Objective equality is exact floating-point equality; mu and v are sums over
a shared weight table, so equal selections yield bit-identical objectives.

Internals are sized for millions of insertion attempts: flat arrays carry
the objective vectors and two jitted kernels do the dominance scans, a dict
of per-constraint-value buckets serves window selection, a hash set of
objective vectors resolves re-discovered duplicates without a scan, and
scalar bounds on the population's constraint range short-circuit the rest.

Because no two members share an objective vector, an offspring whose vector
already sits in the archive cannot be strictly dominated (a strict
dominator of it would strictly dominate its twin, violating mutual
non-domination), so the duplicate check alone decides those insertions.
"""

from __future__ import annotations

import csv
from typing import IO, NamedTuple

import numpy as np
from numba import njit


class Objective3(NamedTuple):
    """Objective vector (mu, var, c): expected weight, variance, constraint value."""

    mu: float
    var: float
    c: int


class Individual:
    """A solution bit vector with its cached, never-stale objective vector.

    ``extra`` carries optional per-solution evaluation state (domination
    cover counts) used for incremental offspring evaluation.  Equality is
    identity: two individuals are the same only if they are the same object.
    """

    __slots__ = ("x", "obj", "extra")

    def __init__(self, x: np.ndarray, obj: Objective3, extra: object = None) -> None:
        self.x = x
        self.obj = obj
        self.extra = extra

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Individual(obj={self.obj})"


def dominates_weak_3d(a: Objective3, b: Objective3) -> bool:
    """a weakly dominates b: c(a) >= c(b), mu(a) <= mu(b), v(a) <= v(b)."""
    return a.c >= b.c and a.mu <= b.mu and a.var <= b.var


def dominates_strict_3d(a: Objective3, b: Objective3) -> bool:
    """a strictly dominates b: weak dominance with differing objective vectors."""
    return dominates_weak_3d(a, b) and (a.mu, a.var, a.c) != (b.mu, b.var, b.c)


@njit(cache=True)
def _any_weak_dominator(mus, vs, cs, m, mu, v, c):  # pragma: no cover - jitted
    for i in range(m):
        if cs[i] >= c and mus[i] <= mu and vs[i] <= v:
            return True
    return False


@njit(cache=True)
def _weakly_dominated_by(mus, vs, cs, m, mu, v, c, out):  # pragma: no cover - jitted
    cnt = 0
    for i in range(m):
        if cs[i] <= c and mus[i] >= mu and vs[i] >= v:
            out[cnt] = i
            cnt += 1
    return cnt


@njit(cache=True)
def _any_weak_dominator_2d(g1s, g2s, m, g1, g2):  # pragma: no cover - jitted
    for i in range(m):
        if g1s[i] <= g1 and g2s[i] <= g2:
            return True
    return False


@njit(cache=True)
def _weakly_dominated_by_2d(g1s, g2s, m, g1, g2, out):  # pragma: no cover - jitted
    cnt = 0
    for i in range(m):
        if g1s[i] >= g1 and g2s[i] >= g2:
            out[cnt] = i
            cnt += 1
    return cnt


class ParetoArchive:
    """Mutually non-dominating population with per-c bookkeeping.

    Owned by a single run; not safe to share across threads (parallelism
    lives at the run level in the benchmark harness).
    """

    def __init__(self) -> None:
        cap = 64
        self._mu = np.empty(cap, dtype=np.float64)
        self._v = np.empty(cap, dtype=np.float64)
        self._c = np.empty(cap, dtype=np.int64)
        self._scratch = np.empty(cap, dtype=np.int64)
        self._objset: set[tuple[float, float, int]] = set()
        self.members: list[Individual] = []
        self.buckets: dict[int, list[Individual]] = {}
        self.max_size_by_c: dict[int, int] = {}
        self.max_size_overall = 0
        self._max_c = -1  # exact maximum c among members
        self._min_c_bound = 1 << 62  # lower bound on the minimum c among members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def objective_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Views of (mu, v, c) for the current members, aligned with .members."""
        m = len(self.members)
        return self._mu[:m], self._v[:m], self._c[:m]

    @property
    def size_by_c(self) -> dict[int, int]:
        return {c: len(bucket) for c, bucket in self.buckets.items()}

    def _remove_indices(self, indices: list[int]) -> None:
        """Drop members at the given array positions from all structures."""
        max_bucket_emptied = False
        for idx in indices:
            ind = self.members[idx]
            key = ind.obj
            self._objset.discard((key.mu, key.var, key.c))
            bucket = self.buckets[key.c]
            for pos, other in enumerate(bucket):
                if other is ind:
                    bucket.pop(pos)
                    break
            if not bucket:
                del self.buckets[key.c]
                if key.c == self._max_c:
                    max_bucket_emptied = True
        m = len(self.members)
        if len(indices) == 1:
            idx = indices[0]
            self._mu[idx : m - 1] = self._mu[idx + 1 : m].copy()
            self._v[idx : m - 1] = self._v[idx + 1 : m].copy()
            self._c[idx : m - 1] = self._c[idx + 1 : m].copy()
            self.members.pop(idx)
        else:
            keep = np.ones(m, dtype=bool)
            keep[indices] = False
            k = m - len(indices)
            self._mu[:k] = self._mu[:m][keep]
            self._v[:k] = self._v[:m][keep]
            self._c[:k] = self._c[:m][keep]
            self.members = [ind for ind, kp in zip(self.members, keep) if kp]
        if max_bucket_emptied:
            self._max_c = max(self.buckets, default=-1)

    def _append(self, y: Individual) -> None:
        m = len(self.members)
        if m == len(self._mu):
            cap = 2 * m
            self._mu = np.resize(self._mu, cap)
            self._v = np.resize(self._v, cap)
            self._c = np.resize(self._c, cap)
            self._scratch = np.empty(cap, dtype=np.int64)
        mu, v, c = y.obj
        self._mu[m] = mu
        self._v[m] = v
        self._c[m] = c
        self._objset.add((mu, v, c))
        self.members.append(y)
        bucket = self.buckets.get(c)
        if bucket is None:
            bucket = self.buckets[c] = []
        bucket.append(y)
        if len(bucket) > self.max_size_by_c.get(c, 0):
            self.max_size_by_c[c] = len(bucket)
        if len(self.members) > self.max_size_overall:
            self.max_size_overall = len(self.members)
        if c > self._max_c:
            self._max_c = c
        if c < self._min_c_bound:
            self._min_c_bound = c

    def try_insert(self, y: Individual) -> bool:
        """Insert y unless strictly dominated; evict weakly dominated members.

        Returns True when accepted.  On rejection the archive is unchanged.
        """
        m = len(self.members)
        mu, v, c = y.obj
        if m:
            # a twin of an existing member is never strictly dominated; any
            # weak dominator of a non-twin is a strict one
            if c <= self._max_c and (mu, v, c) not in self._objset:
                if _any_weak_dominator(self._mu, self._v, self._c, m, mu, v, c):
                    return False
            if self._min_c_bound <= c:
                cnt = _weakly_dominated_by(self._mu, self._v, self._c, m, mu, v, c, self._scratch)
                if cnt:
                    self._remove_indices([int(i) for i in self._scratch[:cnt]])
        self._append(y)
        return True

    def select_uniform(self, rng: np.random.Generator) -> Individual:
        """Uniform random member of the whole archive."""
        if not self.members:
            raise ValueError("cannot select from an empty archive")
        return self.members[int(rng.integers(len(self.members)))]

    def select_window(self, lo: int, hi: int, rng: np.random.Generator) -> Individual:
        """Uniform random member with c in [lo, hi]; whole archive if none."""
        if not self.members:
            raise ValueError("cannot select from an empty archive")
        get = self.buckets.get
        window = []
        total = 0
        for cv in range(lo, hi + 1):
            bucket = get(cv)
            if bucket:
                window.append(bucket)
                total += len(bucket)
        if total == 0:
            return self.members[int(rng.integers(len(self.members)))]
        j = int(rng.integers(total))
        for bucket in window:
            if j < len(bucket):
                return bucket[j]
            j -= len(bucket)
        raise AssertionError("unreachable")

    def select_max_c(self, rng: np.random.Generator) -> Individual:
        """Uniform random member among those with the maximum constraint value."""
        if not self.members:
            raise ValueError("cannot select from an empty archive")
        bucket = self.buckets[self._max_c]
        if len(bucket) == 1:
            return bucket[0]
        return bucket[int(rng.integers(len(bucket)))]

    def prune_below(self, lo: int, keep_c: int) -> int:
        """Permanently drop members with c < lo, except those at c == keep_c.

        Disabled entirely when keep_c == -1.  The population is never
        emptied: the size guard is re-checked before each removal, so with
        S members at most S - 1 are removed (the last qualifying member in
        insertion order survives).  Returns the number removed.
        """
        if keep_c == -1 or len(self.members) <= 1:
            return 0
        if self._min_c_bound >= lo:  # nothing below the window
            return 0
        m = len(self.members)
        cs = self._c[:m]
        doomed = np.flatnonzero((cs < lo) & (cs != keep_c))
        if len(doomed) == 0:
            self._min_c_bound = int(cs.min())
            return 0
        budget = len(self.members) - 1
        removal = [int(i) for i in doomed[:budget]]
        self._remove_indices(removal)
        self._min_c_bound = int(self._c[: len(self.members)].min())
        return len(removal)

    def export_csv(self, stream: IO[str]) -> None:
        """Write a snapshot as ``c,mu,var,bits`` rows (bits hex-packed, MSB-first)."""
        writer = csv.writer(stream)
        writer.writerow(["c", "mu", "var", "bits"])
        for ind in sorted(self.members, key=lambda i: (i.obj.c, i.obj.mu)):
            bits = np.packbits(np.asarray(ind.x, dtype=np.uint8)).tobytes().hex()
            writer.writerow([ind.obj.c, repr(ind.obj.mu), repr(ind.obj.var), bits])
