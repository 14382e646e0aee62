import numpy as np
import pytest

from swpareto.archive import Individual, Objective3, ParetoArchive
from swpareto.bench import (
    ConfigError,
    ExperimentConfig,
    extract_final,
    gnp_graph,
    make_run_instance,
    path_graph,
    run_experiment,
    star_graph,
)
from swpareto.cli import main as cli_main
from swpareto.engine import FAST_DEFAULTS, RunResult
from swpareto.problems import ConfidenceLevel, ProblemInstance, StochasticWeights


def archive_result(objs):
    arch = ParetoArchive()
    for mu, var, c in objs:
        arch.try_insert(Individual(np.zeros(2), Objective3(float(mu), float(var), int(c))))
    return RunResult(arch, 1, 10, arch.max_size_overall, dict(arch.max_size_by_c))


def domset_instance(n=4):
    g = star_graph(n)
    w = StochasticWeights(mu=np.ones(n), var=np.ones(n))
    return ProblemInstance.dominating_set(g, w)


class TestSyntheticGraphs:
    def test_star(self):
        g = star_graph(6)
        assert g.n == 6 and g.degrees.tolist() == [5, 1, 1, 1, 1, 1]

    def test_path(self):
        g = path_graph(4)
        assert g.degrees.tolist() == [1, 2, 2, 1]

    def test_gnp_deterministic(self):
        a = gnp_graph(40, 0.1, seed=3)
        b = gnp_graph(40, 0.1, seed=3)
        assert a.degrees.tolist() == b.degrees.tolist()
        assert gnp_graph(40, 0.1, seed=4).degrees.tolist() != a.degrees.tolist()


class TestExtractFinal:
    def test_min_surrogate_over_feasible(self):
        inst = domset_instance(4)
        level = ConfidenceLevel(beta=0.2, alpha=0.8, k_alpha=1.0)
        res = archive_result([(5, 4, 4), (4, 9, 4), (1, 1, 2)])
        value, feasible = extract_final(inst, level, res, 1e10)
        assert feasible and value == pytest.approx(7.0)

    def test_penalty_when_no_feasible_member(self):
        inst = domset_instance(4)
        level = ConfidenceLevel.from_beta(0.2)
        res = archive_result([(1, 1, 2), (2, 2, 3)])
        assert extract_final(inst, level, res, 1e10) == (1e10, False)

    def test_zero_quantile_picks_min_mu(self):
        inst = domset_instance(4)
        level = ConfidenceLevel(beta=0.5, alpha=0.5, k_alpha=0.0)
        res = archive_result([(5, 1, 4), (4, 100, 4)])
        value, _ = extract_final(inst, level, res, 1e10)
        assert value == 4.0

    def test_uniform_target_k_filter(self):
        w = StochasticWeights(mu=np.array([1.0, 2.0]), var=np.array([1.0, 1.0]))
        inst = ProblemInstance.uniform(w)
        level = ConfidenceLevel(beta=0.5, alpha=0.5, k_alpha=0.0)
        res = archive_result([(0, 0, 0), (1, 1, 1), (3, 2, 2)])
        assert extract_final(inst, level, res, 1e10, target_k=1)[0] == 1.0
        assert extract_final(inst, level, res, 1e10, target_k=2)[0] == 3.0


def small_config(**overrides):
    base = dict(
        algorithms=("fast_sw_gsemo3d",),
        problem="domset",
        graph=star_graph(10),
        graph_label="star:10",
        weight_mode="uniform",
        init="zeros",
        t_max=20_000,
        runs=3,
        base_seed=1,
        sliding=FAST_DEFAULTS,
        threads=1,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfigValidation:
    def test_unknown_algorithm(self):
        with pytest.raises(ConfigError):
            small_config(algorithms=("nsga2",)).validate()

    def test_domset_needs_graph(self):
        with pytest.raises(ConfigError):
            small_config(graph=None).validate()

    def test_uniform_k_needs_n(self):
        with pytest.raises(ConfigError):
            small_config(problem="uniform-k", graph=None).validate()

    def test_degree_weights_need_graph_problem(self):
        with pytest.raises(ConfigError):
            small_config(problem="uniform-k", graph=None, n=5, weight_mode="degree").validate()

    def test_ea_is_domset_only(self):
        with pytest.raises(ConfigError):
            small_config(
                problem="uniform-k", graph=None, n=5, algorithms=("one_plus_one_ea",)
            ).validate()

    def test_beta_range(self):
        with pytest.raises(ConfigError):
            small_config(betas=(0.7,)).validate()


class TestSeedDerivation:
    def test_instances_shared_across_algorithm_choice(self):
        cfg_a = small_config(algorithms=("fast_sw_gsemo3d",))
        cfg_b = small_config(algorithms=("gsemo3d", "gsemo2d"))
        for r in range(3):
            ia = make_run_instance(cfg_a, r)
            ib = make_run_instance(cfg_b, r)
            assert np.array_equal(ia.weights.mu, ib.weights.mu)
            assert np.array_equal(ia.weights.var, ib.weights.var)

    def test_distinct_runs_get_distinct_instances(self):
        cfg = small_config()
        a = make_run_instance(cfg, 0)
        b = make_run_instance(cfg, 1)
        assert not np.array_equal(a.weights.mu, b.weights.mu)


class TestRunExperiment:
    def test_star_csv_has_nine_beta_rows_all_feasible(self, tmp_path):
        rows = run_experiment(small_config(), out_dir=tmp_path)
        assert len(rows) == 9
        for row in rows:
            assert row.feasible_counts["fast_sw_gsemo3d"] == 3
        runs_lines = (tmp_path / "runs.csv").read_text().splitlines()
        assert runs_lines[1] == "beta,algo,run,final_w,feasible,max_pop_overall,max_pop_window,evals"
        assert len(runs_lines) == 2 + 9 * 3
        assert (tmp_path / "summary.csv").exists()
        assert (tmp_path / "popsize.csv").exists()

    def test_single_run_has_zero_std(self):
        rows = run_experiment(small_config(runs=1, betas=(0.2,), t_max=5000))
        assert rows[0].summaries["fast_sw_gsemo3d"].std == 0.0

    def test_rerun_reproduces_csv_modulo_timestamp(self, tmp_path):
        cfg = small_config(t_max=5000, betas=(0.2, 0.01))
        run_experiment(cfg, out_dir=tmp_path / "a")
        run_experiment(cfg, out_dir=tmp_path / "b")
        for name in ("runs.csv", "summary.csv", "popsize.csv"):
            a = (tmp_path / "a" / name).read_text().splitlines()
            b = (tmp_path / "b" / name).read_text().splitlines()
            assert a[0].startswith("# generated ")
            assert a[1:] == b[1:]

    def test_parallel_matches_serial(self, tmp_path):
        cfg = small_config(t_max=5000, betas=(0.2, 0.01), runs=4)
        run_experiment(cfg, out_dir=tmp_path / "serial")
        import dataclasses

        cfg2 = dataclasses.replace(cfg, threads=3)
        run_experiment(cfg2, out_dir=tmp_path / "par")
        for name in ("runs.csv", "summary.csv", "popsize.csv"):
            a = (tmp_path / "serial" / name).read_text().splitlines()[1:]
            b = (tmp_path / "par" / name).read_text().splitlines()[1:]
            assert a == b

    def test_pairwise_p_values_present(self):
        cfg = small_config(
            algorithms=("fast_sw_gsemo3d", "gsemo3d"), t_max=4000, betas=(0.2,), runs=3
        )
        rows = run_experiment(cfg)
        assert ("fast_sw_gsemo3d", "gsemo3d") in rows[0].p_values
        assert 0.0 <= rows[0].p_values[("fast_sw_gsemo3d", "gsemo3d")] <= 1.0

    def test_one_plus_one_ea_runs_per_beta(self):
        cfg = small_config(algorithms=("one_plus_one_ea",), t_max=3000, betas=(0.2, 0.01), runs=2)
        rows = run_experiment(cfg)
        assert len(rows) == 2
        for row in rows:
            assert row.summaries["one_plus_one_ea"].count == 2

    def test_uniform_k_problem(self):
        cfg = small_config(
            problem="uniform-k",
            graph=None,
            graph_label="",
            n=8,
            target_k=4,
            algorithms=("sw_gsemo3d",),
            t_max=8000,
            betas=(0.2,),
        )
        rows = run_experiment(cfg)
        assert rows[0].feasible_counts["sw_gsemo3d"] == 3


class TestCli:
    def test_end_to_end_star_run(self, tmp_path, capsys):
        rc = cli_main(
            [
                "--algo", "fast_sw_gsemo3d",
                "--graph", "star:8",
                "--init", "zeros",
                "--budget", "4000",
                "--runs", "2",
                "--seed", "7",
                "--betas", "0.2,0.01",
                "--out", str(tmp_path),
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "beta=0.2" in out and "feasible=2/2" in out
        assert (tmp_path / "runs.csv").exists()

    def test_uniform_k_via_cli(self, capsys):
        rc = cli_main(
            [
                "--algo", "sw_gsemo3d",
                "--problem", "uniform-k",
                "--n", "6",
                "--k", "3",
                "--budget", "4000",
                "--runs", "2",
                "--betas", "0.2",
            ]
        )
        assert rc == 0
        assert "sw_gsemo3d" in capsys.readouterr().out

    def test_bad_config_is_reported(self, capsys):
        rc = cli_main(["--algo", "one_plus_one_ea", "--problem", "uniform-k", "--n", "5"])
        assert rc == 1
        assert "error" in capsys.readouterr().err

    def test_gnp_descriptor_parsing(self, capsys):
        rc = cli_main(
            ["--algo", "gsemo3d", "--graph", "gnp:30:0.2:5", "--budget", "2000",
             "--runs", "1", "--betas", "0.2"]
        )
        assert rc == 0

    def test_edge_list_file(self, tmp_path, capsys):
        path = tmp_path / "g.txt"
        path.write_text("1 2\n2 3\n3 4\n")
        rc = cli_main(
            ["--algo", "gsemo2d", "--graph", str(path), "--budget", "2000",
             "--runs", "1", "--betas", "0.2"]
        )
        assert rc == 0
