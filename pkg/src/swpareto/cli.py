"""Command-line benchmark runner.

Examples:
    swpareto --algo fast_sw_gsemo3d --graph star:10 --init zeros \\
        --budget 20000 --runs 5 --seed 1 --out results/
    swpareto --algo fast_sw_gsemo3d,gsemo3d --graph gnp:500:0.01 \\
        --weights degree --budget 200000 --runs 10 --out results/
    swpareto --algo sw_gsemo3d --problem uniform-k --n 12 --k 6 \\
        --budget 70000 --runs 30 --out results/
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, engine
from .bench import ALGORITHMS, ConfigError, ExperimentConfig
from .graph import EdgeListError, load_edge_list
from .problems import DEFAULT_BETAS


def _parse_graph(spec: str):
    """A synthetic descriptor (star:N, path:N, gnp:N:P[:SEED]) or an edge-list path."""
    parts = spec.split(":")
    if parts[0] == "star" and len(parts) == 2:
        return bench.star_graph(int(parts[1])), spec
    if parts[0] == "path" and len(parts) == 2:
        return bench.path_graph(int(parts[1])), spec
    if parts[0] == "gnp" and len(parts) in (3, 4):
        seed = int(parts[3]) if len(parts) == 4 else 0
        return bench.gnp_graph(int(parts[1]), float(parts[2]), seed), spec
    path = Path(spec)
    with open(path) as fh:
        return load_edge_list(fh), path.name


def _parse_betas(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swpareto",
        description="Benchmark sliding-window Pareto optimizers on chance-constrained problems.",
    )
    parser.add_argument("--algo", default="fast_sw_gsemo3d",
                        help=f"comma-separated algorithms from {', '.join(ALGORITHMS)}")
    parser.add_argument("--graph", help="edge-list file, or star:N | path:N | gnp:N:P[:SEED]")
    parser.add_argument("--problem", choices=[bench.PROBLEM_DOMSET, bench.PROBLEM_UNIFORM_K],
                        default=bench.PROBLEM_DOMSET)
    parser.add_argument("--n", type=int, help="element count for uniform-k problems")
    parser.add_argument("--k", type=int, help="target cardinality for uniform-k extraction")
    parser.add_argument("--weights", choices=["uniform", "degree"], default="uniform")
    parser.add_argument("--init", choices=[engine.INIT_ZEROS, engine.INIT_RANDOM],
                        default=engine.INIT_RANDOM)
    parser.add_argument("--budget", type=int, default=1_000_000,
                        help="fitness evaluations per run")
    parser.add_argument("--runs", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0, help="base seed; run r uses seed+r")
    parser.add_argument("--betas", type=_parse_betas,
                        default=DEFAULT_BETAS, metavar="B1,B2,...")
    parser.add_argument("--tfrac", type=float, default=0.9)
    parser.add_argument("--std", type=int, default=10)
    parser.add_argument("--a", type=float, default=0.5)
    parser.add_argument("--eps", type=int, default=0)
    parser.add_argument("--penalty", type=float, default=bench.DEFAULT_PENALTY)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", help="directory for runs.csv, summary.csv, popsize.csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        graph, label = (None, "") if args.graph is None else _parse_graph(args.graph)
        sliding = engine.SlidingParams(t_frac=args.tfrac, std=args.std, a=args.a,
                                       epsilon=args.eps)
        cfg = ExperimentConfig(
            algorithms=tuple(tok.strip() for tok in args.algo.split(",") if tok.strip()),
            problem=args.problem,
            graph=graph,
            graph_label=label,
            n=args.n,
            weight_mode=args.weights,
            init=args.init,
            t_max=args.budget,
            runs=args.runs,
            base_seed=args.seed,
            betas=args.betas,
            sliding=sliding,
            penalty=args.penalty,
            threads=args.threads,
            target_k=args.k,
        )
        rows = bench.run_experiment(cfg, out_dir=args.out)
    except (ConfigError, EdgeListError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1

    for row in rows:
        for algo, summary in row.summaries.items():
            feas = row.feasible_counts[algo]
            print(
                f"beta={row.beta:<8g} {algo:<16} mean={summary.mean:<14.6g} "
                f"std={summary.std:<12.6g} feasible={feas}/{summary.count}"
            )
    if args.out:
        print(f"csv artifacts written to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
