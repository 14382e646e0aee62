"""The algorithm family driven by a shared evaluation-budget loop.

All runners perform exactly t_max objective evaluations (the initial
solution costs one, each mutation offspring costs one) and are fully
determined by (instance, seed, budget, parameters).

The sliding-window runners sweep a window of constraint values from 0 to B
over the budget; before the first zero-expected-weight solution appears
they repeatedly select a minimum-mu parent instead.  The fast variant adds
the heuristic knobs: window half-width, schedule exponent, the t_frac
endgame, and pruning below the window keyed on the best constraint value
seen.  Plain 3D/2D archive optimizers and a penalized single-individual
hillclimber serve as baselines.

Offspring objectives are computed incrementally where that is exact:
integer-valued weight components are updated term by term (bit-identical
to the from-scratch sum, since every partial sum is an integer far below
2^53), fractional ones by a fresh dot product; domination counts always
update incrementally from the parent's cover counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .archive import (
    Individual,
    Objective3,
    ParetoArchive,
    _any_weak_dominator_2d,
    _weakly_dominated_by_2d,
)
from .graph import domination_state, flip_update
from .problems import DOMINATING_SET, ConfidenceLevel, ProblemInstance, surrogate_of

INIT_ZEROS = "zeros"
INIT_RANDOM = "random"


@dataclass(frozen=True)
class SlidingParams:
    """Knobs of the sliding-window schedule.

    t_frac is the fraction of the budget under the schedule, std the window
    half-width, a the schedule exponent (a < 1 moves the window faster early
    and slower near the bound), epsilon the feasibility margin of the fast
    endgame.  c_max_tracking enables the fast variant's best-feasible
    bookkeeping; with it off the window never prunes.
    """

    t_frac: float = 1.0
    std: int = 0
    a: float = 1.0
    epsilon: int = 0
    c_max_tracking: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.t_frac <= 1.0:
            raise ValueError(f"t_frac must lie in [0, 1], got {self.t_frac}")
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"a must lie in (0, 1], got {self.a}")
        if self.std < 0 or self.epsilon < 0:
            raise ValueError("std and epsilon must be non-negative")


#: Parameter set used for the benchmark experiments.
FAST_DEFAULTS = SlidingParams(t_frac=0.9, std=10, a=0.5, epsilon=0)

_PLAIN_SLIDING = SlidingParams(t_frac=1.0, std=0, a=1.0, epsilon=0, c_max_tracking=False)


@dataclass
class RunState:
    """Per-run bookkeeping snapshot passed to iteration observers."""

    t: int
    t0: int
    mu_min: float
    c_max: int
    archive: object
    rng: np.random.Generator
    eval_count: int


@dataclass
class RunResult:
    """Final archive plus the counters the benchmark tables report."""

    archive: object
    t0: int
    eval_count: int
    max_pop_overall: int
    max_size_by_c: dict[int, int] = field(repr=False)

    @property
    def max_pop_window(self) -> int:
        """Largest per-constraint-value sub-population seen during the run."""
        return max(self.max_size_by_c.values(), default=0)


def sliding_window(t: int, t_max: int, B: int, p: SlidingParams) -> tuple[int, int]:
    """Constraint-value window (lo, hi) for iteration t of t_max.

    While t <= t_frac * t_max the window is centred on
    c_hat = (t^a / (t_frac * t_max)^a) * B; afterwards it pins to the bound.
    lo is clamped to 0 and hi to B (c never leaves [0, B]).
    """
    limit = p.t_frac * t_max
    if t <= limit:
        c_hat = 0.0 if t == 0 else (t ** p.a / limit ** p.a) * B
        lo = math.floor(c_hat) - p.std
        hi = math.ceil(c_hat) + p.std
    else:
        lo = B - p.std
        hi = B
    return max(lo, 0), min(hi, B)


class _MutationSampler:
    """Buffered sampler for the duplicate-avoiding standard bit mutation.

    Draws the flip count from Binomial(n, 1/n) skipping zeros (the law of
    per-bit flips conditioned on the offspring differing from the parent)
    and the flip positions as a uniform distinct subset via rejection.
    """

    __slots__ = ("n", "rng", "_counts", "_ci", "_pos", "_pi")
    _BLOCK = 4096

    def __init__(self, n: int, rng: np.random.Generator) -> None:
        self.n = n
        self.rng = rng
        self._counts: list[int] = []
        self._ci = 0
        self._pos: list[int] = []
        self._pi = 0

    def _next_count(self) -> int:
        while True:
            if self._ci >= len(self._counts):
                self._counts = self.rng.binomial(self.n, 1.0 / self.n, size=self._BLOCK).tolist()
                self._ci = 0
            k = self._counts[self._ci]
            self._ci += 1
            if k:
                return k

    def _next_pos(self) -> int:
        if self._pi >= len(self._pos):
            self._pos = self.rng.integers(0, self.n, size=self._BLOCK).tolist()
            self._pi = 0
        p = self._pos[self._pi]
        self._pi += 1
        return p

    def draw(self) -> list[int]:
        """Distinct flip positions; at least one, each subset of size k uniform."""
        k = self._next_count()
        first = self._next_pos()
        if k == 1:
            return [first]
        chosen = {first}
        while len(chosen) < k:
            chosen.add(self._next_pos())
        return list(chosen)


def mutate_plus(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Standard bit mutation (flip probability 1/n) resampled until y != x."""
    n = len(x)
    k = int(rng.binomial(n, 1.0 / n))
    while k == 0:
        k = int(rng.binomial(n, 1.0 / n))
    chosen: set[int] = {int(rng.integers(n))}
    while len(chosen) < k:
        chosen.add(int(rng.integers(n)))
    y = x.copy()
    for i in chosen:
        y[i] = 1.0 - y[i]
    return y


class _Evaluator:
    """Per-run incremental objective evaluation, exact and canonical.

    Values match problems.evaluate bit for bit: integer-valued weight sums
    are updated term by term (exact in float64), fractional mu falls back to
    the same dot product evaluate uses, and constraint values update from
    the parent's state.
    """

    __slots__ = ("inst", "mu_list", "var_list", "mu_integral", "var_integral", "is_domset")

    def __init__(self, inst: ProblemInstance) -> None:
        self.inst = inst
        w = inst.weights
        self.mu_list = w.mu.tolist()
        self.var_list = w.var.tolist()
        self.mu_integral = bool(np.equal(np.mod(w.mu, 1.0), 0).all())
        self.var_integral = bool(np.equal(np.mod(w.var, 1.0), 0).all())
        self.is_domset = inst.kind == DOMINATING_SET

    def fresh(self, x: np.ndarray) -> Individual:
        w = self.inst.weights
        mu = float(w.mu @ x)
        var = float(w.var @ x)
        if self.is_domset:
            state = domination_state(self.inst.graph, x)
            return Individual(x, Objective3(mu, var, state.dominated_total), state)
        return Individual(x, Objective3(mu, var, int(round(float(x.sum())))), None)

    def offspring(self, parent: Individual, flips: list[int]) -> Individual:
        x = parent.x.copy()
        pobj = parent.obj
        mu = pobj.mu if self.mu_integral else 0.0
        var = pobj.var if self.var_integral else 0.0
        delta_ones = 0
        mu_list = self.mu_list
        var_list = self.var_list
        for i in flips:
            if x[i]:
                x[i] = 0.0
                delta_ones -= 1
                if self.mu_integral:
                    mu -= mu_list[i]
                if self.var_integral:
                    var -= var_list[i]
            else:
                x[i] = 1.0
                delta_ones += 1
                if self.mu_integral:
                    mu += mu_list[i]
                if self.var_integral:
                    var += var_list[i]
        w = self.inst.weights
        if not self.mu_integral:
            mu = float(w.mu @ x)
        if not self.var_integral:
            var = float(w.var @ x)
        if self.is_domset:
            state = flip_update(self.inst.graph, parent.extra, flips, x)
            return Individual(x, Objective3(mu, var, state.dominated_total), state)
        return Individual(x, Objective3(mu, var, pobj.c + delta_ones), None)


def _initial_individual(
    inst: ProblemInstance, init: str, rng: np.random.Generator, ev: _Evaluator
) -> Individual:
    if init == INIT_ZEROS:
        x = np.zeros(inst.n, dtype=np.float64)
    elif init == INIT_RANDOM:
        x = rng.integers(0, 2, size=inst.n).astype(np.float64)
    else:
        raise ValueError(f"unknown init {init!r}")
    return ev.fresh(x)


def _pick_min_mu(arch: ParetoArchive, rng: np.random.Generator) -> Individual:
    mus = arch.objective_arrays()[0]
    ties = np.flatnonzero(mus == mus.min())
    if len(ties) == 1:
        return arch.members[int(ties[0])]
    return arch.members[int(ties[int(rng.integers(len(ties)))])]


Observer = Callable[[RunState, "tuple[int, int] | None"], None]


def trace_observer(stream) -> Observer:
    """Observer writing one JSON record per iteration to a text stream.

    Fields: iteration, window lo/hi (null outside sliding selection),
    archive size, c_max, mu_min.  Off by default; wire it up through the
    runners' ``observer`` argument when debugging a run.
    """

    def write(state: RunState, window) -> None:
        lo, hi = window if window is not None else (None, None)
        stream.write(
            json.dumps(
                {
                    "t": state.t,
                    "lo": lo,
                    "hi": hi,
                    "pop": len(state.archive.members),
                    "c_max": state.c_max,
                    "mu_min": state.mu_min,
                }
            )
            + "\n"
        )

    return write


def _run_sliding(
    inst: ProblemInstance,
    t_max: int,
    init: str,
    rng: np.random.Generator,
    params: SlidingParams,
    fast: bool,
    observer: Observer | None = None,
) -> RunResult:
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    B = inst.B
    ev = _Evaluator(inst)
    sampler = _MutationSampler(inst.n, rng)
    arch = ParetoArchive()
    ind = _initial_individual(inst, init, rng, ev)
    arch.try_insert(ind)
    t = 1
    mu_min = ind.obj.mu
    t0 = 1 if mu_min == 0.0 else -1
    c_max = -1
    if fast and params.c_max_tracking and ind.obj.c <= B:
        c_max = ind.obj.c
    limit = params.t_frac * t_max
    while t < t_max:
        window = None
        if t0 == -1 and (not fast or t <= limit):
            parent = _pick_min_mu(arch, rng)
        elif fast and t > limit and c_max < B - params.epsilon:
            parent = arch.select_max_c(rng)
        else:
            window = sliding_window(t - t0, t_max - t0, B, params)
            arch.prune_below(window[0], keep_c=c_max)
            parent = arch.select_window(window[0], window[1], rng)
        child = ev.offspring(parent, sampler.draw())
        cobj = child.obj
        if cobj.mu < mu_min:
            mu_min = cobj.mu
        if t0 == -1 and mu_min == 0.0:
            t0 = t
        if fast and params.c_max_tracking and c_max < cobj.c <= B:
            c_max = cobj.c
        arch.try_insert(child)
        if observer is not None:
            observer(RunState(t, t0, mu_min, c_max, arch, rng, t + 1), window)
        t += 1
    return RunResult(arch, t0, t, arch.max_size_overall, dict(arch.max_size_by_c))


def run_sw_gsemo3d(
    inst: ProblemInstance,
    t_max: int,
    init: str,
    rng: np.random.Generator,
    observer: Observer | None = None,
) -> RunResult:
    """Sliding-window 3-objective optimizer with the plain schedule.

    Phase one selects a minimum-mu parent until a zero-mu solution appears
    at time t0; from then on parents come from the window at the shifted
    clock (t - t0 of t_max - t0) with std=0, t_frac=1, a=1, no pruning.
    """
    return _run_sliding(inst, t_max, init, rng, _PLAIN_SLIDING, fast=False, observer=observer)


def run_fast_sw_gsemo3d(
    inst: ProblemInstance,
    t_max: int,
    params: SlidingParams,
    init: str,
    rng: np.random.Generator,
    observer: Observer | None = None,
) -> RunResult:
    """Sliding-window optimizer with the heuristic extensions.

    Tracks the best constraint value c_max seen (enabling window pruning),
    and after t_frac * t_max steps selects a maximum-c parent while
    c_max < B - epsilon, falling back to the pinned window otherwise.
    """
    return _run_sliding(inst, t_max, init, rng, params, fast=True, observer=observer)


def run_gsemo3d(inst: ProblemInstance, t_max: int, rng: np.random.Generator) -> RunResult:
    """Archive optimizer with uniform parent selection over the whole population."""
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    ev = _Evaluator(inst)
    sampler = _MutationSampler(inst.n, rng)
    arch = ParetoArchive()
    arch.try_insert(_initial_individual(inst, INIT_RANDOM, rng, ev))
    for _ in range(t_max - 1):
        parent = arch.select_uniform(rng)
        arch.try_insert(ev.offspring(parent, sampler.draw()))
    return RunResult(arch, -1, t_max, arch.max_size_overall, dict(arch.max_size_by_c))


class _PenalizedArchive2D:
    """Bi-objective archive over penalty-augmented (mu, v); c buckets kept for reporting.

    Same acceptance rule as the 3D archive with the constraint component
    dropped, including the duplicate shortcut (no two members share a
    penalized pair, so a re-discovered pair is never strictly dominated).
    """

    def __init__(self, penalty_r: float, B: int) -> None:
        self._r = penalty_r
        self._b = B
        cap = 64
        self._g1 = np.empty(cap, dtype=np.float64)
        self._g2 = np.empty(cap, dtype=np.float64)
        self._scratch = np.empty(cap, dtype=np.int64)
        self._pairset: set[tuple[float, float]] = set()
        self.members: list[Individual] = []
        self.size_by_c: dict[int, int] = {}
        self.max_size_by_c: dict[int, int] = {}
        self.max_size_overall = 0

    def __len__(self) -> int:
        return len(self.members)

    def penalized(self, obj: Objective3) -> tuple[float, float]:
        pen = self._r * (self._b - obj.c)
        return obj.mu + pen, obj.var + pen

    def try_insert(self, y: Individual) -> bool:
        g1, g2 = self.penalized(y.obj)
        m = len(self.members)
        if m:
            if (g1, g2) not in self._pairset and _any_weak_dominator_2d(
                self._g1, self._g2, m, g1, g2
            ):
                return False
            cnt = _weakly_dominated_by_2d(self._g1, self._g2, m, g1, g2, self._scratch)
            if cnt:
                doomed = [int(i) for i in self._scratch[:cnt]]
                for idx in doomed:
                    member = self.members[idx]
                    self._pairset.discard(self.penalized(member.obj))
                    c = member.obj.c
                    self.size_by_c[c] -= 1
                    if not self.size_by_c[c]:
                        del self.size_by_c[c]
                keep = np.ones(m, dtype=bool)
                keep[doomed] = False
                k = m - cnt
                self._g1[:k] = self._g1[:m][keep]
                self._g2[:k] = self._g2[:m][keep]
                self.members = [ind for ind, kp in zip(self.members, keep) if kp]
                m = k
        if m == len(self._g1):
            self._g1 = np.resize(self._g1, 2 * m)
            self._g2 = np.resize(self._g2, 2 * m)
            self._scratch = np.empty(2 * m, dtype=np.int64)
        self._g1[m] = g1
        self._g2[m] = g2
        self._pairset.add((g1, g2))
        self.members.append(y)
        c = y.obj.c
        cnt = self.size_by_c.get(c, 0) + 1
        self.size_by_c[c] = cnt
        if cnt > self.max_size_by_c.get(c, 0):
            self.max_size_by_c[c] = cnt
        if len(self.members) > self.max_size_overall:
            self.max_size_overall = len(self.members)
        return True

    def select_uniform(self, rng: np.random.Generator) -> Individual:
        return self.members[int(rng.integers(len(self.members)))]


def default_penalty_r(inst: ProblemInstance, k_max: float) -> float:
    """Penalty factor exceeding any achievable surrogate weight.

    With this factor any constraint improvement dominates any objective
    trade-off in the penalized formulations.
    """
    w = inst.weights
    return float(w.mu.sum()) + k_max * math.sqrt(float(w.var.sum())) + 1.0


def run_gsemo2d(
    inst: ProblemInstance, t_max: int, rng: np.random.Generator, penalty_r: float
) -> RunResult:
    """Bi-objective baseline minimizing (mu + R(B-c), v + R(B-c))."""
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    ev = _Evaluator(inst)
    sampler = _MutationSampler(inst.n, rng)
    arch = _PenalizedArchive2D(penalty_r, inst.B)
    arch.try_insert(_initial_individual(inst, INIT_RANDOM, rng, ev))
    for _ in range(t_max - 1):
        parent = arch.select_uniform(rng)
        arch.try_insert(ev.offspring(parent, sampler.draw()))
    return RunResult(arch, -1, t_max, arch.max_size_overall, dict(arch.max_size_by_c))


@dataclass
class OnePlusOneResult:
    """Final individual of a single-individual run with its penalized fitness."""

    best: Individual
    fitness: float
    eval_count: int


def run_one_plus_one_ea(
    inst: ProblemInstance,
    level: ConfidenceLevel,
    t_max: int,
    rng: np.random.Generator,
    penalty_r: float,
) -> OnePlusOneResult:
    """Hillclimber on w_hat(x) + R(B - c(x)); equal-fitness offspring accepted."""
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    ev = _Evaluator(inst)
    sampler = _MutationSampler(inst.n, rng)
    current = _initial_individual(inst, INIT_RANDOM, rng, ev)
    fit = surrogate_of(current.obj, level) + penalty_r * (inst.B - current.obj.c)
    for _ in range(t_max - 1):
        child = ev.offspring(current, sampler.draw())
        child_fit = surrogate_of(child.obj, level) + penalty_r * (inst.B - child.obj.c)
        if child_fit <= fit:
            current, fit = child, child_fit
    return OnePlusOneResult(current, fit, t_max)
