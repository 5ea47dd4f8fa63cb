"""
实验报告模块

报告是 JSON 文档，包含五个部分：
    config      生效配置的回显（已补齐缺省项）
    generated_at 生成时间（唯一不参与确定性约定的字段）
    ranges      每个 p 是否落在各可取区间内
    trials      逐次试验记录，按 (估计量, p, 试验编号) 排列
    aggregates  频率（Wilson 95% 区间）与均值（标准误）
    bounds      经验值与闭式界的比较，通过条件为 经验值 ≤ 界 + 3·SE

aggregates 与 bounds 都只由 config 与 trials 计算，load_report 读取时会重算并核对。

主要功能：
1. summarize：由逐次记录计算汇总与界比较
2. build_report / write_report / write_csv
3. load_report：读取并自检
"""

# ============ 标准库导入 ============
import csv
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

# ============ 本地模块导入 ============
from src.core.errors import ConfigError
from src.core.logger import logger
from src.experiments.config import ExperimentConfig, parse_experiment_config
from src.experiments.stats import frequency, mean_and_se, within_bound, within_mean
from src.experiments.trials import Estimator, expected_size, t_key
from src.groups.abelian import GroupFamily, GroupSpec, classify, involution_count
from src.theory.bounds import (
    admissible_p_range,
    chernoff_size_tail,
    chernoff_t_choice,
    in_range,
    janson_delta_bound,
    janson_mu,
    janson_tail,
    janson_tail_simplified,
    size_event_threshold,
    type1_p_range,
    type2_p_upper,
)
from src.theory.events import good_pair_probability

RecordKey = Tuple[str, float]


@dataclass
class ExperimentReport:
    """实验报告"""
    config: Dict[str, Any]
    generated_at: str
    ranges: List[Dict[str, Any]]
    trials: List[Dict[str, Any]]
    aggregates: List[Dict[str, Any]]
    bounds: List[Dict[str, Any]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "generated_at": self.generated_at,
            "ranges": self.ranges,
            "trials": self.trials,
            "aggregates": self.aggregates,
            "bounds": self.bounds,
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    def violations(self) -> List[Dict[str, Any]]:
        return [b for b in self.bounds if not b["pass"]]

    def records_for(self, estimator: str, p: float) -> List[Dict[str, Any]]:
        return [r for r in self.trials if r["estimator"] == estimator and r["p"] == p]

    def aggregate(self, estimator: str, p: float, metric: str) -> Optional[Dict[str, Any]]:
        for row in self.aggregates:
            if row["estimator"] == estimator and row["p"] == p and row["metric"] == metric:
                return row
        return None


# ============ 汇总 ============

class _Rows:
    """按 (估计量, p) 收集汇总行"""

    def __init__(self, estimator: str, p: float):
        self.estimator = estimator
        self.p = p
        self.rows: List[Dict[str, Any]] = []

    def frequency(self, metric: str, flags):
        self.rows.append({"estimator": self.estimator, "p": self.p, "metric": metric,
                          "kind": "frequency", **frequency(flags).to_dict()})

    def mean(self, metric: str, values):
        values = list(values)
        mean, se = mean_and_se(values)
        self.rows.append({"estimator": self.estimator, "p": self.p, "metric": metric,
                          "kind": "mean", "trials": len(values), "value": mean, "se": se})

    def count(self, metric: str, value: int, trials: int):
        self.rows.append({"estimator": self.estimator, "p": self.p, "metric": metric,
                          "kind": "count", "trials": trials, "value": value})


def _active(records: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    return [r for r in records if not r.get("skipped")]


def _aggregate_aut_small(rows: _Rows, records: List[Dict[str, Any]]):
    active = _active(records)
    rows.frequency("is_small", (r["is_small"] for r in active))
    rows.frequency("not_small", (not r["is_small"] for r in active))
    rows.frequency("contains_semidirect", (r["contains_semidirect"] for r in records))
    rows.count("skipped", len(records) - len(active), len(records))


def _aggregate_triples(rows: _Rows, records: List[Dict[str, Any]]):
    rows.frequency("no_triple", (r["no_triple"] for r in records))
    rows.mean("independent_triples", (r["independent_triples"] for r in records))


def _qualifies(record: Dict[str, Any]) -> bool:
    if record.get("path") == "type1":
        return bool(record.get("is_small")) and bool(record.get("triple_found"))
    return bool(record.get("is_small"))


def _aggregate_chi_d(rows: _Rows, records: List[Dict[str, Any]]):
    active = _active(records)
    qualifying = [r for r in active if _qualifies(r)]
    successes = [r for r in active if r["success"]]
    exact = [r for r in active if r.get("chi_d") is not None]
    rows.frequency("success", (r["success"] for r in active))
    rows.count("qualifying", len(qualifying), len(records))
    rows.frequency("qualifying_fraction", (_qualifies(r) for r in active))
    rows.frequency("success_given_qualifying", (r["success"] for r in qualifying))
    rows.frequency("within_chi_plus_one", (r["within_chi_plus_one"] for r in successes))
    rows.frequency("size_event", (r["size_event"] for r in records))
    rows.frequency("exact_chi_d_at_most_certificate",
                   (r["chi_d"] <= r["colors_used"] for r in exact if r["success"]))
    rows.frequency("exact_chi_d_at_least_chi", (r["chi_d"] >= r["chi"] for r in exact if r["chi_exact"]))
    rows.count("skipped", len(records) - len(active), len(records))


def _aggregate_structure_events(rows: _Rows, records: List[Dict[str, Any]]):
    for event in ("coset_event", "normalizer_event", "good_pair_event"):
        rows.frequency(event, (r[event] for r in records))


def _aggregate_size(rows: _Rows, records: List[Dict[str, Any]], t_grid: List[float]):
    rows.frequency("identity_holds", (r["identity_holds"] for r in records))
    rows.mean("size", (r["size"] for r in records))
    for t in t_grid:
        key = t_key(t)
        rows.frequency(f"tail_t={key}", (r["tail"][key] for r in records))


def aggregate(estimator: str, p: float, records: List[Dict[str, Any]],
              t_grid: List[float]) -> List[Dict[str, Any]]:
    """一个 (估计量, p) 参数点的汇总行"""
    rows = _Rows(estimator, p)
    kind = Estimator(estimator)
    if kind is Estimator.AUT_SMALL:
        _aggregate_aut_small(rows, records)
    elif kind is Estimator.TRIPLES:
        _aggregate_triples(rows, records)
    elif kind is Estimator.CHI_D:
        _aggregate_chi_d(rows, records)
    elif kind is Estimator.STRUCTURE_EVENTS:
        _aggregate_structure_events(rows, records)
    else:
        _aggregate_size(rows, records, t_grid)
    return rows.rows


# ============ 界比较 ============

def _lookup(rows: List[Dict[str, Any]], metric: str) -> Dict[str, Any]:
    return next(r for r in rows if r["metric"] == metric)


def _tail_row(estimator: str, p: float, name: str, empirical: Dict[str, Any], bound,
              applicable: bool = True, point: Optional[Dict[str, Any]] = None,
              complement: bool = False) -> Dict[str, Any]:
    value = 1 - empirical["value"] if complement else empirical["value"]
    bound = float(bound)
    return {
        "estimator": estimator, "p": p, "name": name, "kind": "tail", "point": point or {},
        "empirical": value, "se": empirical["se"], "bound": bound, "applicable": applicable,
        "pass": within_bound(value, bound, empirical["se"]),
    }


def _mean_row(estimator: str, p: float, name: str, empirical: Dict[str, Any], expected: float) -> Dict[str, Any]:
    expected = float(expected)
    return {
        "estimator": estimator, "p": p, "name": name, "kind": "mean", "point": {},
        "empirical": empirical["value"], "se": empirical["se"], "bound": expected, "applicable": True,
        "pass": within_mean(empirical["value"], expected, empirical["se"]),
    }


def compare_bounds(estimator: str, p: float, spec: GroupSpec, rows: List[Dict[str, Any]],
                   t_grid: List[float]) -> List[Dict[str, Any]]:
    """一个参数点上经验值与闭式界的比较"""
    kind = Estimator(estimator)
    n = spec.n
    m = involution_count(spec)
    result: List[Dict[str, Any]] = []

    if kind is Estimator.TRIPLES and math.gcd(n, 6) == 1:
        q = 1 - p
        mu = janson_mu(n, q)
        tail = janson_tail(mu, janson_delta_bound(n, q))
        no_triple = _lookup(rows, "no_triple")
        result.append(_tail_row(estimator, p, "janson_tail", no_triple, tail.value, tail.applicable))
        result.append(_tail_row(estimator, p, "janson_tail_simplified", no_triple,
                                janson_tail_simplified(n, q), tail.applicable))
        result.append(_mean_row(estimator, p, "janson_mu", _lookup(rows, "independent_triples"), mu))

    elif kind is Estimator.CHI_D and n >= 2:
        t = chernoff_t_choice(n, m)
        applicable = size_event_threshold(n, p) >= expected_size(spec, p) + 3 * t
        result.append(_tail_row(estimator, p, "chernoff_size_tail", _lookup(rows, "size_event"),
                                chernoff_size_tail(n, m, p, t), applicable, {"t": t}, complement=True))

    elif kind is Estimator.STRUCTURE_EVENTS and classify(spec) is not GroupFamily.OTHER:
        result.append(_tail_row(estimator, p, "good_pair_probability", _lookup(rows, "good_pair_event"),
                                good_pair_probability(str(spec), p)))

    elif kind is Estimator.SIZE_CONCENTRATION:
        result.append(_mean_row(estimator, p, "expected_size", _lookup(rows, "size"), expected_size(spec, p)))
        for t in t_grid:
            key = t_key(t)
            result.append(_tail_row(estimator, p, "chernoff_size_tail", _lookup(rows, f"tail_t={key}"),
                                    chernoff_size_tail(n, m, p, t), True, {"t": float(t)}))
    return result


def parameter_ranges(spec: GroupSpec, p: float) -> Dict[str, Any]:
    """p 是否落在各可取区间内（n < 2 时区间无定义）"""
    n = spec.n
    if n < 2:
        return {"p": p, "admissible": None, "type1": None, "type2_p_upper": None, "within_type2": None}
    upper = type2_p_upper(n, involution_count(spec))
    return {
        "p": p,
        "admissible": in_range(p, admissible_p_range(n)),
        "type1": in_range(p, type1_p_range(n)),
        "type2_p_upper": upper,
        "within_type2": p <= upper,
    }


# ============ 报告组装 ============

def group_records(trials: List[Dict[str, Any]]) -> Dict[RecordKey, List[Dict[str, Any]]]:
    grouped: Dict[RecordKey, List[Dict[str, Any]]] = {}
    for record in trials:
        grouped.setdefault((record["estimator"], record["p"]), []).append(record)
    return grouped


def summarize(config: ExperimentConfig, trials: List[Dict[str, Any]]) -> Tuple[List[Dict], List[Dict]]:
    """
    由配置与逐次记录计算 aggregates 与 bounds

    异常:
        ConfigError: 某个参数点的记录数与 trials 不符
    """
    spec = config.spec
    t_grid = list(config.t_grid or [])
    grouped = group_records(trials)
    aggregates: List[Dict[str, Any]] = []
    bounds: List[Dict[str, Any]] = []
    for p in config.points:
        for estimator in config.estimators:
            records = grouped.get((estimator.value, p), [])
            if len(records) != config.trials:
                raise ConfigError(
                    f"{estimator.value} at p={p}: {len(records)} trial records, config says {config.trials}"
                )
            rows = aggregate(estimator.value, p, records, t_grid)
            aggregates.extend(rows)
            bounds.extend(compare_bounds(estimator.value, p, spec, rows, t_grid))
    return aggregates, bounds


def build_report(config: ExperimentConfig, trials: List[Dict[str, Any]],
                 generated_at: Optional[str] = None) -> ExperimentReport:
    aggregates, bounds = summarize(config, trials)
    return ExperimentReport(
        config=config.model_dump(mode="json"),
        generated_at=generated_at or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        ranges=[parameter_ranges(config.spec, p) for p in config.points],
        trials=trials,
        aggregates=aggregates,
        bounds=bounds,
    )


def write_report(report: ExperimentReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json() + "\n", encoding="utf-8")
    logger.info(f"Report written to {path} ({len(report.trials)} trial records)")
    return path


CSV_FIXED_COLUMNS = ["group", "estimator", "p", "trials", "skipped", "bounds_checked", "bounds_passed"]


def csv_rows(report: ExperimentReport) -> List[Dict[str, Any]]:
    """CSV 摘要：每个 (估计量, p) 一行，指标各占一列"""
    group = report.config.get("group")
    grouped = group_records(report.trials)
    rows = []
    for (estimator, p), records in grouped.items():
        row: Dict[str, Any] = {
            "group": group,
            "estimator": estimator,
            "p": p,
            "trials": len(records),
            "skipped": sum(1 for r in records if r.get("skipped")),
        }
        checks = [b for b in report.bounds if b["estimator"] == estimator and b["p"] == p]
        row["bounds_checked"] = len(checks)
        row["bounds_passed"] = sum(1 for b in checks if b["pass"])
        for agg in report.aggregates:
            if agg["estimator"] == estimator and agg["p"] == p:
                row[agg["metric"]] = agg["value"]
        rows.append(row)
    return rows


def write_csv(report: ExperimentReport, path: Union[str, Path]) -> Path:
    rows = csv_rows(report)
    metrics = sorted({key for row in rows for key in row} - set(CSV_FIXED_COLUMNS))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIXED_COLUMNS + metrics)
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"CSV summary written to {path} ({len(rows)} rows)")
    return path


def _normalized(value: Any) -> Any:
    return json.loads(json.dumps(value))


def load_report(path: Union[str, Path]) -> ExperimentReport:
    """
    读取报告并重算汇总

    异常:
        ConfigError: 文件不可读、结构缺失，或汇总与逐次记录不一致
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read report {path}: {e}") from e
    missing = [k for k in ("config", "trials", "aggregates", "bounds") if k not in data]
    if missing:
        raise ConfigError(f"report {path} lacks sections {missing}")

    config = parse_experiment_config(data["config"])
    aggregates, bounds = summarize(config, data["trials"])
    if _normalized(aggregates) != data["aggregates"]:
        raise ConfigError(f"report {path}: aggregates do not match the trial records")
    if _normalized(bounds) != data["bounds"]:
        raise ConfigError(f"report {path}: bound comparisons do not match the trial records")
    return ExperimentReport(
        config=data["config"],
        generated_at=data.get("generated_at", ""),
        ranges=data.get("ranges", []),
        trials=data["trials"],
        aggregates=data["aggregates"],
        bounds=data["bounds"],
    )
