import json

import pytest

from src.core.errors import ConfigError
from src.experiments.config import parse_experiment_config
from src.experiments.report import (
    CSV_FIXED_COLUMNS,
    build_report,
    load_report,
    parameter_ranges,
    summarize,
    write_csv,
    write_report,
)
from src.experiments.runner import run_experiment
from src.groups.abelian import parse_group_spec

FIXED_TIME = "2024-01-01T00:00:00+00:00"


def small_report(**overrides):
    data = {
        "group": "7",
        "estimators": ["triples", "size_concentration", "structure_events"],
        "p": 0.5,
        "trials": 10,
        "seed": 5,
        "threads": 1,
        "t_grid": [1.0, 2.0],
    }
    data.update(overrides)
    return run_experiment(parse_experiment_config(data), FIXED_TIME)


class TestReportFiles:
    def setup_method(self):
        self.report = small_report()

    def test_round_trip(self, tmp_path):
        """写入后读取并通过自检"""
        path = write_report(self.report, tmp_path / "out" / "report.json")
        loaded = load_report(path)
        assert loaded.to_dict() == json.loads(self.report.to_json())
        assert loaded.generated_at == FIXED_TIME

    def test_tampered_trials(self, tmp_path):
        """篡改逐次记录后汇总不再一致"""
        data = self.report.to_dict()
        record = next(r for r in data["trials"] if r["estimator"] == "triples")
        record["no_triple"] = not record["no_triple"]
        path = tmp_path / "tampered.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(ConfigError):
            load_report(path)

    def test_tampered_bounds(self, tmp_path):
        data = self.report.to_dict()
        data["bounds"][0]["bound"] = 0.123
        path = tmp_path / "tampered.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(ConfigError):
            load_report(path)

    def test_missing_sections(self, tmp_path):
        path = tmp_path / "partial.json"
        path.write_text(json.dumps({"config": self.report.config}), encoding="utf-8")
        with pytest.raises(ConfigError):
            load_report(path)

    def test_unreadable(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_report(path)
        with pytest.raises(ConfigError):
            load_report(tmp_path / "absent.json")

    def test_csv(self, tmp_path):
        path = write_csv(self.report, tmp_path / "summary.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        header = lines[0].split(",")
        assert header[:len(CSV_FIXED_COLUMNS)] == CSV_FIXED_COLUMNS
        assert "no_triple" in header
        assert "tail_t=1.0" in header
        assert len(lines) == 4


class TestSummaries:
    def test_bound_rows(self):
        report = small_report()
        names = [(b["estimator"], b["name"]) for b in report.bounds]
        assert names == [
            ("triples", "janson_tail"),
            ("triples", "janson_tail_simplified"),
            ("triples", "janson_mu"),
            ("size_concentration", "expected_size"),
            ("size_concentration", "chernoff_size_tail"),
            ("size_concentration", "chernoff_size_tail"),
            ("structure_events", "good_pair_probability"),
        ]
        assert [b["point"] for b in report.bounds if b["name"] == "chernoff_size_tail"] == [{"t": 1.0}, {"t": 2.0}]

    def test_other_family_has_no_good_pair_bound(self):
        report = small_report(group="4", estimators=["structure_events"])
        assert report.bounds == []
        assert report.aggregate("structure_events", 0.5, "good_pair_event")["trials"] == 0

    def test_aggregates(self):
        report = small_report(estimators=["size_concentration"])
        identity = report.aggregate("size_concentration", 0.5, "identity_holds")
        assert identity["successes"] == identity["trials"] == 10
        size = report.aggregate("size_concentration", 0.5, "size")
        assert size["kind"] == "mean"
        assert size["trials"] == 10
        assert report.aggregate("size_concentration", 0.5, "missing") is None

    def test_record_count_mismatch(self):
        config = parse_experiment_config({"group": "7", "estimators": ["triples"], "p": 0.5,
                                          "trials": 10, "t_grid": [1.0]})
        report = small_report(estimators=["triples"])
        with pytest.raises(ConfigError):
            summarize(config, report.trials[:-1])
        with pytest.raises(ConfigError):
            build_report(config, report.trials[:5])

    def test_parameter_ranges(self):
        """n = 25 时可取区间为空，p = ½ 超出 Type II 上界"""
        ranges = parameter_ranges(parse_group_spec("25"), 0.5)
        assert ranges["admissible"] is False
        assert ranges["within_type2"] is False
        assert ranges["type2_p_upper"] == pytest.approx(0.0438, abs=1e-4)


@pytest.mark.slow
class TestAcceptance:
    def test_triples_on_z25(self):
        """Z_25，p = ½，2000 次试验：Janson 界与均值检查全部通过"""
        report = small_report(group="25", estimators=["triples"], trials=2000, seed=20240601)
        assert report.violations() == []
        mean = report.aggregate("triples", 0.5, "independent_triples")
        assert abs(mean["value"] - 10.0) <= 4 * mean["se"]
        no_triple = report.aggregate("triples", 0.5, "no_triple")
        janson = next(b for b in report.bounds if b["name"] == "janson_tail")
        assert janson["applicable"]
        assert no_triple["value"] <= janson["bound"]
