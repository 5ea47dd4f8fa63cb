from unittest.mock import patch

import pytest

from src.core.errors import ConfigError
from src.experiments.config import load_experiment_config, parse_experiment_config
from src.experiments.runner import (
    _chunks,
    resolve_threads,
    run_aut_small_experiment,
    run_experiment,
    run_size_concentration,
    run_triple_experiment,
    run_trials,
)
from src.experiments.trials import Estimator, TrialContext
from src.groups.abelian import parse_group_spec

FIXED_TIME = "2024-01-01T00:00:00+00:00"


def make_config(**overrides):
    data = {
        "group": "7",
        "estimators": ["triples", "size_concentration"],
        "p": 0.5,
        "trials": 12,
        "seed": 3,
        "threads": 1,
        "t_grid": [1.0],
    }
    data.update(overrides)
    return parse_experiment_config(data)


class TestExperimentConfig:
    def test_defaults_resolved_from_settings(self):
        config = parse_experiment_config({"group": "7", "estimators": ["triples"], "p": 0.5, "trials": 3})
        assert config.threads is None
        resolved = config.resolved()
        assert resolved.t_grid is not None
        assert resolved.recolor_attempts >= 1
        assert resolved.points == [0.5]

    def test_p_grid(self):
        config = make_config(p=None, p_grid=[0.2, 0.8])
        assert config.points == [0.2, 0.8]

    @pytest.mark.parametrize("overrides", [
        {"p_grid": [0.5]},
        {"p": None},
        {"p": 1.5},
        {"p": None, "p_grid": []},
        {"group": "1"},
        {"group": "a,b"},
        {"estimators": []},
        {"estimators": ["unknown"]},
        {"trials": 0},
        {"caps": {"no_such_cap": 3}},
        {"caps": {"aut_exact": 0}},
        {"t_grid": [0.0]},
        {"extra_field": 1},
    ])
    def test_invalid(self, overrides):
        """非法配置统一报 ConfigError"""
        with pytest.raises(ConfigError):
            make_config(**overrides)

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "exp.json"
        path.write_text('{"group": "25", "estimators": ["triples"], "p": 0.5, "trials": 10}', encoding="utf-8")
        config = load_experiment_config(path)
        assert config.spec.n == 25
        assert config.estimators == [Estimator.TRIPLES]

    def test_load_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            load_experiment_config(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_experiment_config(bad)
        listed = tmp_path / "list.json"
        listed.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_experiment_config(listed)


class TestThreads:
    def test_resolve_threads(self):
        with patch("src.experiments.runner.os.cpu_count", return_value=6):
            assert resolve_threads(0) == 6
            assert resolve_threads(None) == 6
        with patch("src.experiments.runner.os.cpu_count", return_value=None):
            assert resolve_threads(0) == 1
        assert resolve_threads(3) == 3

    def test_chunks(self):
        assert _chunks(10, 4) == [[0, 1, 2], [3, 4, 5], [6, 7, 8], [9]]
        assert _chunks(3, 8) == [[0], [1], [2]]
        assert _chunks(0, 4) == []

    def test_parallel_matches_serial(self):
        """进程数不影响记录"""
        ctx = TrialContext(spec=parse_group_spec("7"), p=0.5, seed=9)
        serial = run_trials(ctx, Estimator.TRIPLES, 10, threads=1)
        parallel = run_trials(ctx, Estimator.TRIPLES, 10, threads=2)
        assert serial == parallel
        assert [r["trial"] for r in parallel] == list(range(10))


class TestRunExperiment:
    def test_deterministic(self):
        """报告只依赖配置与种子"""
        first = run_experiment(make_config(), FIXED_TIME)
        second = run_experiment(make_config(), FIXED_TIME)
        assert first.to_dict() == second.to_dict()
        assert first.generated_at == FIXED_TIME
        assert len(first.trials) == 24

    def test_seed_changes_trials(self):
        first = run_experiment(make_config(seed=1), FIXED_TIME)
        second = run_experiment(make_config(seed=2), FIXED_TIME)
        assert first.trials != second.trials

    def test_record_order(self):
        report = run_experiment(make_config(p=None, p_grid=[0.2, 0.8], trials=3), FIXED_TIME)
        keys = [(r["p"], r["estimator"], r["trial"]) for r in report.trials]
        assert keys[:3] == [(0.2, "triples", 0), (0.2, "triples", 1), (0.2, "triples", 2)]
        assert keys[3] == (0.2, "size_concentration", 0)
        assert keys[6] == (0.8, "triples", 0)
        assert [r["p"] for r in report.ranges] == [0.2, 0.8]

    def test_triples_need_coprime_order(self):
        with pytest.raises(ConfigError):
            run_experiment(make_config(group="6"))

    def test_named_entry_points(self):
        """命名入口只运行对应估计量"""
        config = make_config(trials=4)
        triples = run_triple_experiment(config, FIXED_TIME)
        assert {r["estimator"] for r in triples.trials} == {"triples"}
        assert triples.config["estimators"] == ["triples"]
        sizes = run_size_concentration(config, FIXED_TIME)
        assert {r["estimator"] for r in sizes.trials} == {"size_concentration"}
        aut = run_aut_small_experiment(config, FIXED_TIME)
        assert {r["estimator"] for r in aut.trials} == {"aut_small"}
        assert triples.trials == run_experiment(config, FIXED_TIME).records_for("triples", 0.5)
