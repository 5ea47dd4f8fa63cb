"""
桌面规模验收

慢测试：固定种子的端到端检查，用 pytest -m "not slow" 跳过。
"""

import pytest

from src.experiments.config import parse_experiment_config
from src.experiments.runner import (
    run_aut_small_experiment,
    run_chi_d_experiment,
    run_experiment,
    run_size_concentration,
    run_structure_event_experiment,
)
from src.graphs.cayley import build
from src.graphs.coloring import chromatic_number_exact, is_proper
from src.graphs.distinguishing import distinguishing_chromatic_number_exact, is_distinguishing
from src.graphs.motion import motion_bound, motion_recolor
from src.graphs.symmetry import compute_automorphism_group, stabilizer_of_partition
from src.groups.abelian import parse_group_spec
from src.groups.sampler import ConnectionSet, RandomStream, sample_connection_set
from src.theory.bounds import admissible_p_range, in_range, lemma21_core
from src.theory.events import good_pair_probability
from tests.oracles import brute_force_automorphisms, brute_force_distinguishing_chromatic_number

FIXED_TIME = "2024-01-01T00:00:00+00:00"

# 阶不超过 8 的全部阿贝尔群（同构类各取一个）
SMALL_GROUPS = ["2", "3", "4", "2,2", "5", "6", "7", "8", "2,4", "2,2,2"]

# 每个群 2 个 p × 10 个种子 = 20 个连接集
CORPUS_SEEDS = range(10)
CORPUS_P = (0.3, 0.7)

MOTION_GROUPS = ["7", "8", "9", "3,3", "2,4", "11", "13", "15", "17", "19"]
MOTION_CASES = 100


def config(**data):
    data.setdefault("threads", 1)
    data.setdefault("seed", 20240601)
    return parse_experiment_config(data)


def sampled_graphs(groups, seeds, p_values=CORPUS_P):
    for group in groups:
        spec = parse_group_spec(group)
        for p in p_values:
            for seed in seeds:
                yield build(spec, sample_connection_set(spec, p, RandomStream(seed)))


class TestLemmaNumerics:
    @pytest.mark.parametrize("c1, c2", [(2, 10), (10, 10)])
    def test_core_grid(self, c1, c2):
        """99 点网格：p = ½ 处最小，在可取区间内两端最大"""
        grid = [k / 100 for k in range(1, 100)]
        values = {p: lemma21_core(p, c1, c2) for p in grid}
        assert min(values, key=values.get) == 0.5
        inside = [p for p in grid if in_range(p, admissible_p_range(10 ** 4))]
        assert inside
        peak = max(values[p] for p in inside)
        assert max(values[inside[0]], values[inside[-1]]) == peak


@pytest.mark.slow
class TestOracleEquivalence:
    def test_corpus_size(self):
        graphs = list(sampled_graphs(SMALL_GROUPS, CORPUS_SEEDS))
        assert len(graphs) == 20 * len(SMALL_GROUPS)

    def test_automorphisms(self):
        """与 n! 穷举一致"""
        for graph in sampled_graphs(SMALL_GROUPS, CORPUS_SEEDS):
            expected = brute_force_automorphisms(graph)
            assert [g.images for g in compute_automorphism_group(graph)] == expected

    def test_distinguishing_chromatic_number(self):
        for graph in sampled_graphs(SMALL_GROUPS, CORPUS_SEEDS):
            aut = compute_automorphism_group(graph)
            chi, _ = chromatic_number_exact(graph)
            chi_d, _ = distinguishing_chromatic_number_exact(graph, aut)
            assert chi <= chi_d
            assert chi_d == brute_force_distinguishing_chromatic_number(graph, [g.images for g in aut])


@pytest.mark.slow
class TestExperiments:
    def test_type1_pipeline(self):
        """Z_25，p = 0.3：合格试验给出恰好 χ+1 色的区分着色（除非三元组占满一个颜色类）"""
        report = run_chi_d_experiment(config(group="25", estimators=["chi_d"], p=0.3, trials=50), FIXED_TIME)
        spec = parse_group_spec("25")
        qualifying = [r for r in report.trials if r["is_small"] and r.get("triple_found")]
        assert qualifying
        for record in qualifying:
            assert record["failure"] is None
            assert record["success"]
            graph = build(spec, ConnectionSet.from_indices(spec, record["connection"]))
            chi, base = chromatic_number_exact(graph)
            assert chi == record["chi"]
            triple = set(record["triple"])
            emptied = sum(1 for members in base.classes() if members <= triple)
            assert record["colors_used"] == chi + 1 - emptied
            if not emptied:
                assert record["colors_used"] == chi + 1
        assert report.aggregate("chi_d", 0.3, "qualifying_fraction")["value"] >= 0.8

    def test_size_concentration(self):
        report = run_size_concentration(
            config(group="2,2,3,3", estimators=["size_concentration"], p=0.2, trials=5000), FIXED_TIME
        )
        identity = report.aggregate("size_concentration", 0.2, "identity_holds")
        assert identity["successes"] == identity["trials"] == 5000
        assert report.bounds[0]["name"] == "expected_size"
        assert report.bounds[0]["bound"] == pytest.approx(7.0)
        assert report.violations() == []

    def test_small_automorphism_frequency(self):
        report = run_aut_small_experiment(config(group="29", estimators=["aut_small"], p=0.5, trials=100), FIXED_TIME)
        assert report.aggregate("aut_small", 0.5, "contains_semidirect")["value"] == 1.0
        assert report.aggregate("aut_small", 0.5, "is_small")["value"] >= 0.9

    def test_structure_events(self):
        zero = run_structure_event_experiment(
            config(group="25", estimators=["structure_events"], p=0.0, trials=3), FIXED_TIME
        )
        for event in ("coset_event", "normalizer_event", "good_pair_event"):
            assert zero.aggregate("structure_events", 0.0, event)["value"] == 1.0

        prime = run_structure_event_experiment(
            config(group="29", estimators=["structure_events"], p=0.5, trials=50), FIXED_TIME
        )
        assert prime.aggregate("structure_events", 0.5, "coset_event")["successes"] == 0

        z35 = run_structure_event_experiment(
            config(group="35", estimators=["structure_events"], p=0.5, trials=500), FIXED_TIME
        )
        assert z35.aggregate("structure_events", 0.5, "good_pair_event")["successes"] == 0
        row = next(b for b in z35.bounds if b["name"] == "good_pair_probability")
        assert row["bound"] == pytest.approx(float(good_pair_probability("35", 0.5)))
        assert row["bound"] == pytest.approx(2 * 0.5 ** 17)


@pytest.mark.slow
class TestDeterminism:
    @pytest.mark.parametrize("settings", [
        {"group": "25", "estimators": ["chi_d"], "p": 0.3, "trials": 50},
        {"group": "25", "estimators": ["triples"], "p": 0.5, "trials": 2000},
        {"group": "2,2,3,3", "estimators": ["size_concentration"], "p": 0.2, "trials": 5000},
        {"group": "29", "estimators": ["aut_small"], "p": 0.5, "trials": 100},
    ])
    def test_reports_are_byte_identical(self, settings):
        """相同种子逐字节相同（时间戳固定）"""
        cfg = config(**settings)
        assert run_experiment(cfg, FIXED_TIME).to_json() == run_experiment(cfg, FIXED_TIME).to_json()


@pytest.mark.slow
class TestMotionLemma:
    def collect_cases(self):
        cases = []
        for graph in sampled_graphs(MOTION_GROUPS, range(20), (0.3, 0.5)):
            aut = compute_automorphism_group(graph)
            chi, base = chromatic_number_exact(graph)
            color = base.largest_class()
            members = base.color_class(color)
            if len(members) < 2:
                continue
            bound = motion_bound(stabilizer_of_partition(aut, base, [color]), members, 2)
            if bound.f < 2:
                cases.append((graph, aut, chi, base, color))
            if len(cases) == MOTION_CASES:
                break
        return cases

    def test_recolor_when_f_below_two(self):
        """f < 2 时 t = 2 重着色在 1000 次内成功"""
        cases = self.collect_cases()
        assert len(cases) == MOTION_CASES

        successes = 0
        for index, (graph, aut, chi, base, color) in enumerate(cases):
            result = motion_recolor(graph, base, color, 2, aut, RandomStream(7, index), max_attempts=1000)
            if result is None:
                continue
            successes += 1
            assert is_proper(graph, result)
            assert is_distinguishing(result, aut)
            assert result.k <= chi + 1
            if graph.n <= 9:
                chi_d, _ = distinguishing_chromatic_number_exact(graph, aut)
                assert chi_d <= chi + 1
        assert successes >= 0.99 * MOTION_CASES
