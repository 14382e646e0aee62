"""Experiment harness: seeded runs, per-confidence extraction, CSV emission.

Run r of an experiment derives everything from ``base_seed + r``: a seed
sequence spawned from it yields one stream for the weight instance and one
for the algorithm, so every algorithm sharing a base seed optimizes the
same set of randomly generated instances.  The single-individual baseline
additionally spawns one algorithm stream per confidence level (in grid
order), since it handles each level in a separate run.

Outputs are a per-run CSV (one row per run per beta), an aggregated summary
CSV (mean/std/feasibility plus pairwise test p-values per beta), and a
population-size CSV.  Reruns reproduce all three byte-for-byte apart from
the timestamp comment line.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from itertools import combinations
from pathlib import Path

import numpy as np

from . import engine
from .engine import FAST_DEFAULTS, RunResult, SlidingParams
from .graph import Graph, graph_from_edges
from .problems import (
    DEFAULT_BETAS,
    UNIFORM,
    ConfidenceLevel,
    ProblemInstance,
    gen_degree_weights,
    gen_uniform_weights,
    surrogate_of,
)
from .stats import SampleSummary, mann_whitney_p, summarize

ALGORITHMS = ("gsemo2d", "gsemo3d", "sw_gsemo3d", "fast_sw_gsemo3d", "one_plus_one_ea")
DEFAULT_PENALTY = 1e10
SIGNIFICANCE_LEVEL = 0.05

PROBLEM_DOMSET = "domset"
PROBLEM_UNIFORM_K = "uniform-k"


class ConfigError(ValueError):
    """Raised for invalid experiment configurations."""


def star_graph(n: int) -> Graph:
    """Star with center 0 and n - 1 leaves."""
    return graph_from_edges(n, ((0, i) for i in range(1, n)))


def path_graph(n: int) -> Graph:
    return graph_from_edges(n, ((i, i + 1) for i in range(n - 1)))


def gnp_graph(n: int, p: float, seed: int = 0) -> Graph:
    """Erdos-Renyi G(n, p) drawn from a fixed seed."""
    rng = np.random.Generator(np.random.PCG64(seed))
    rows, cols = np.triu_indices(n, k=1)
    mask = rng.random(len(rows)) < p
    return graph_from_edges(n, zip(rows[mask].tolist(), cols[mask].tolist()))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines an experiment, and hence its CSVs."""

    algorithms: tuple[str, ...]
    problem: str = PROBLEM_DOMSET
    graph: Graph | None = None
    graph_label: str = ""
    n: int | None = None
    weight_mode: str = "uniform"
    init: str = engine.INIT_RANDOM
    t_max: int = 1_000_000
    runs: int = 30
    base_seed: int = 0
    betas: tuple[float, ...] = DEFAULT_BETAS
    sliding: SlidingParams = FAST_DEFAULTS
    penalty: float = DEFAULT_PENALTY
    threads: int = 1
    target_k: int | None = None

    def validate(self) -> None:
        if not self.algorithms:
            raise ConfigError("at least one algorithm required")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {algo!r}")
        if self.problem not in (PROBLEM_DOMSET, PROBLEM_UNIFORM_K):
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.problem == PROBLEM_DOMSET and self.graph is None:
            raise ConfigError("dominating-set experiments need a graph")
        if self.problem == PROBLEM_UNIFORM_K:
            if self.n is None:
                raise ConfigError("uniform-k experiments need the element count n")
            if self.weight_mode == "degree":
                raise ConfigError("degree-based weights need a graph problem")
            if "one_plus_one_ea" in self.algorithms:
                raise ConfigError("the single-individual baseline targets dominating set only")
        if self.weight_mode not in ("uniform", "degree"):
            raise ConfigError(f"unknown weight mode {self.weight_mode!r}")
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        if self.t_max < 1:
            raise ConfigError("budget must be at least 1")
        if not all(0.0 < b <= 0.5 for b in self.betas):
            raise ConfigError("betas must lie in (0, 1/2]")


@dataclass
class ResultRow:
    """Aggregates for one confidence level across all configured algorithms."""

    beta: float
    summaries: dict[str, SampleSummary]
    feasible_counts: dict[str, int] = field(default_factory=dict)
    p_values: dict[tuple[str, str], float] = field(default_factory=dict)


def _streams_for_run(base_seed: int, r: int) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    instance_ss, algo_ss = np.random.SeedSequence(base_seed + r).spawn(2)
    return instance_ss, algo_ss


def make_run_instance(cfg: ExperimentConfig, r: int) -> ProblemInstance:
    """The weight instance of run r; identical across algorithms and reruns."""
    instance_ss, _ = _streams_for_run(cfg.base_seed, r)
    rng = np.random.Generator(np.random.PCG64(instance_ss))
    if cfg.problem == PROBLEM_DOMSET:
        if cfg.weight_mode == "degree":
            weights = gen_degree_weights(cfg.graph, rng)
        else:
            weights = gen_uniform_weights(cfg.graph.n, rng)
        return ProblemInstance.dominating_set(cfg.graph, weights)
    return ProblemInstance.uniform(gen_uniform_weights(cfg.n, rng))


def extract_final(
    inst: ProblemInstance,
    level: ConfidenceLevel,
    result: RunResult,
    penalty: float,
    target_k: int | None = None,
) -> tuple[float, bool]:
    """Best surrogate weight among constraint-satisfying archive members.

    Dominating-set runs require c == B; uniform-constraint runs require
    c >= target_k (default: the bound B).  Returns (penalty, False) when no
    member qualifies.
    """
    if inst.kind == UNIFORM:
        threshold = inst.B if target_k is None else target_k
        qualifying = [m for m in result.archive.members if m.obj.c >= threshold]
    else:
        qualifying = [m for m in result.archive.members if m.obj.c == inst.B]
    if not qualifying:
        return penalty, False
    return min(surrogate_of(m.obj, level) for m in qualifying), True


def _run_one(cfg: ExperimentConfig, algo: str, r: int) -> list[dict]:
    """Execute run r of one algorithm; returns one record per beta."""
    inst = make_run_instance(cfg, r)
    _, algo_ss = _streams_for_run(cfg.base_seed, r)
    levels = [ConfidenceLevel.from_beta(b) for b in cfg.betas]
    rows = []
    if algo == "one_plus_one_ea":
        k_max = max(level.k_alpha for level in levels)
        penalty_r = engine.default_penalty_r(inst, k_max)
        for level, child_ss in zip(levels, algo_ss.spawn(len(levels))):
            rng = np.random.Generator(np.random.PCG64(child_ss))
            res = engine.run_one_plus_one_ea(inst, level, cfg.t_max, rng, penalty_r)
            assert res.eval_count == cfg.t_max
            feasible = res.best.obj.c == inst.B
            final = surrogate_of(res.best.obj, level) if feasible else cfg.penalty
            rows.append(
                {
                    "beta": level.beta,
                    "algo": algo,
                    "run": r,
                    "final_w": final,
                    "feasible": feasible,
                    "max_pop_overall": 1,
                    "max_pop_window": 1,
                    "evals": res.eval_count,
                }
            )
        return rows
    rng = np.random.Generator(np.random.PCG64(algo_ss))
    if algo == "sw_gsemo3d":
        result = engine.run_sw_gsemo3d(inst, cfg.t_max, cfg.init, rng)
    elif algo == "fast_sw_gsemo3d":
        result = engine.run_fast_sw_gsemo3d(inst, cfg.t_max, cfg.sliding, cfg.init, rng)
    elif algo == "gsemo3d":
        result = engine.run_gsemo3d(inst, cfg.t_max, rng)
    elif algo == "gsemo2d":
        k_max = max(level.k_alpha for level in levels)
        result = engine.run_gsemo2d(inst, cfg.t_max, rng, engine.default_penalty_r(inst, k_max))
    else:
        raise ConfigError(f"unknown algorithm {algo!r}")
    assert result.eval_count == cfg.t_max
    for level in levels:
        final, feasible = extract_final(inst, level, result, cfg.penalty, cfg.target_k)
        rows.append(
            {
                "beta": level.beta,
                "algo": algo,
                "run": r,
                "final_w": final,
                "feasible": feasible,
                "max_pop_overall": result.max_pop_overall,
                "max_pop_window": result.max_pop_window,
                "evals": result.eval_count,
            }
        )
    return rows


def _task(args: tuple[ExperimentConfig, str, int]) -> list[dict]:
    return _run_one(*args)


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path | None = None) -> list[ResultRow]:
    """Execute all configured runs and aggregate per-beta result rows.

    With out_dir set, writes runs.csv, summary.csv and popsize.csv there.
    Rows are sorted by (beta, algorithm, run index), so serial and parallel
    execution produce identical artifacts.
    """
    cfg.validate()
    tasks = [(cfg, algo, r) for algo in cfg.algorithms for r in range(cfg.runs)]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            nested = list(pool.map(_task, tasks))
    else:
        nested = [_task(t) for t in tasks]
    records = [row for rows in nested for row in rows]
    records.sort(key=lambda rec: (rec["beta"], rec["algo"], rec["run"]))

    result_rows: list[ResultRow] = []
    for beta in sorted(cfg.betas):
        summaries: dict[str, SampleSummary] = {}
        feasible_counts: dict[str, int] = {}
        for algo in cfg.algorithms:
            per_run = [rec for rec in records if rec["algo"] == algo and rec["beta"] == beta]
            per_run.sort(key=lambda rec: rec["run"])
            summaries[algo] = summarize(
                [rec["final_w"] for rec in per_run],
                cfg.penalty,
                [rec["feasible"] for rec in per_run],
            )
            feasible_counts[algo] = sum(1 for rec in per_run if rec["feasible"])
        p_values = {
            (a, b): mann_whitney_p(summaries[a].values, summaries[b].values)
            for a, b in combinations(cfg.algorithms, 2)
        }
        result_rows.append(
            ResultRow(beta=beta, summaries=summaries, feasible_counts=feasible_counts, p_values=p_values)
        )

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_runs_csv(out_dir / "runs.csv", records)
        _write_summary_csv(out_dir / "summary.csv", cfg, result_rows)
        _write_popsize_csv(out_dir / "popsize.csv", cfg, records)
    return result_rows


def _timestamp_line() -> str:
    return f"# generated {datetime.now(timezone.utc).isoformat()}"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(_timestamp_line() + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_runs_csv(path: Path, records: list[dict]) -> None:
    header = ["beta", "algo", "run", "final_w", "feasible", "max_pop_overall", "max_pop_window", "evals"]
    _write_csv(path, header, [[rec[col] for col in header] for rec in records])


def _write_summary_csv(path: Path, cfg: ExperimentConfig, rows: list[ResultRow]) -> None:
    pairs = list(combinations(cfg.algorithms, 2))
    header = ["beta", "algo", "mean", "std", "feasible_runs"]
    for a, b in pairs:
        header += [f"p_{a}_vs_{b}", f"sig_{a}_vs_{b}"]
    out = []
    for row in rows:
        for algo in cfg.algorithms:
            s = row.summaries[algo]
            line: list = [row.beta, algo, s.mean, s.std, row.feasible_counts[algo]]
            for a, b in pairs:
                p = row.p_values[(a, b)]
                line += [p, p <= SIGNIFICANCE_LEVEL]
            out.append(line)
    _write_csv(path, header, out)


def _write_popsize_csv(path: Path, cfg: ExperimentConfig, records: list[dict]) -> None:
    header = [
        "algo",
        "max_pop_overall_mean",
        "max_pop_overall_std",
        "max_pop_window_mean",
        "max_pop_window_std",
    ]
    first_beta = min(cfg.betas)
    out = []
    for algo in cfg.algorithms:
        per_run = [
            rec for rec in records if rec["algo"] == algo and rec["beta"] == first_beta
        ]
        per_run.sort(key=lambda rec: rec["run"])
        overall = summarize([float(rec["max_pop_overall"]) for rec in per_run], 0.0, [True] * len(per_run))
        window = summarize([float(rec["max_pop_window"]) for rec in per_run], 0.0, [True] * len(per_run))
        out.append([algo, overall.mean, overall.std, window.mean, window.std])
    _write_csv(path, header, out)
