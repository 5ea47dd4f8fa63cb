"""
实验运行模块

主要功能：
1. run_experiment：按配置运行全部估计量与参数点
2. 五个命名实验入口（每个只运行对应估计量）
3. 并行：threads ≠ 1 时用进程池分块运行试验，按试验编号合并

报告只依赖 (配置, 主种子)：进程数与分块方式不影响任何记录。
"""

# ============ 标准库导入 ============
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional

# ============ 本地模块导入 ============
from src.core.errors import ConfigError
from src.core.logger import logger
from src.experiments.config import ExperimentConfig
from src.experiments.report import ExperimentReport, build_report, parameter_ranges
from src.experiments.trials import Estimator, TrialContext, run_trial_chunk

# 每个工作进程分到的块数
CHUNKS_PER_WORKER = 4


def resolve_threads(threads: Optional[int]) -> int:
    """0 或 None 表示全部 CPU 核"""
    if not threads:
        return os.cpu_count() or 1
    return int(threads)


def _chunks(count: int, parts: int) -> List[List[int]]:
    size = max(1, math.ceil(count / parts))
    return [list(range(start, min(start + size, count))) for start in range(0, count, size)]


def run_trials(ctx: TrialContext, estimator: Estimator, trials: int, threads: int = 1) -> List[Dict[str, Any]]:
    """
    运行一个参数点上的全部试验

    参数:
        ctx: 试验上下文
        estimator: 估计量
        trials: 试验数
        threads: 进程数（1 为串行）

    返回:
        按试验编号排列的记录
    """
    workers = min(resolve_threads(threads), trials)
    if workers <= 1:
        return run_trial_chunk(ctx, estimator, list(range(trials)))

    records: List[Dict[str, Any]] = []
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(run_trial_chunk, ctx, estimator, chunk)
            for chunk in _chunks(trials, workers * CHUNKS_PER_WORKER)
        ]
        for future in futures:
            records.extend(future.result())
    records.sort(key=lambda r: r["trial"])
    return records


def _context(config: ExperimentConfig, p: float) -> TrialContext:
    return TrialContext(
        spec=config.spec,
        p=p,
        seed=config.seed,
        caps=tuple(sorted(config.caps.items())),
        t_grid=tuple(float(t) for t in config.t_grid),
        recolor_attempts=config.recolor_attempts,
        exact_chi_d_max_n=config.exact_chi_d_max_n,
    )


def _check_preconditions(config: ExperimentConfig):
    spec = config.spec
    if Estimator.TRIPLES in config.estimators and math.gcd(spec.n, 6) != 1:
        raise ConfigError(f"triple experiment needs gcd(n, 6) = 1, got group {spec} with n={spec.n}")


def run_experiment(config: ExperimentConfig, generated_at: Optional[str] = None) -> ExperimentReport:
    """
    运行实验

    参数:
        config: 实验配置（缺省项从全局配置补齐）
        generated_at: 固定的时间戳（测试用）

    返回:
        ExperimentReport

    异常:
        ConfigError: 配置与估计量的前提不符
    """
    config = config.resolved()
    _check_preconditions(config)
    threads = resolve_threads(config.threads)
    started = time.perf_counter()

    trials: List[Dict[str, Any]] = []
    for p in config.points:
        ranges = parameter_ranges(config.spec, p)
        logger.info(
            f"Experiment on {config.group} at p={p}: admissible={ranges['admissible']}, "
            f"type1={ranges['type1']}, within_type2={ranges['within_type2']}"
        )
        ctx = _context(config, p)
        for estimator in config.estimators:
            point_started = time.perf_counter()
            trials.extend(run_trials(ctx, estimator, config.trials, threads))
            logger.info(
                f"Estimator {estimator.value} at p={p}: {config.trials} trials, "
                f"threads={threads}, elapsed={time.perf_counter() - point_started:.3f}s"
            )

    report = build_report(config, trials, generated_at)
    violations = report.violations()
    logger.info(
        f"Experiment finished: {len(trials)} records, {len(report.bounds)} bound checks, "
        f"{len(violations)} violations, elapsed={time.perf_counter() - started:.3f}s"
    )
    for row in violations:
        logger.warning(f"Bound {row['name']} violated for {row['estimator']} at p={row['p']}: "
                       f"empirical={row['empirical']}, bound={row['bound']}, se={row['se']}")
    return report


def _run_single(config: ExperimentConfig, estimator: Estimator, generated_at: Optional[str]) -> ExperimentReport:
    return run_experiment(config.with_estimators([estimator]), generated_at)


def run_aut_small_experiment(config: ExperimentConfig, generated_at: Optional[str] = None) -> ExperimentReport:
    """Aut(Γ) = A ⋊ ⟨i⟩ 的频率"""
    return _run_single(config, Estimator.AUT_SMALL, generated_at)


def run_triple_experiment(config: ExperimentConfig, generated_at: Optional[str] = None) -> ExperimentReport:
    """独立零和三元组个数与 Janson 界"""
    return _run_single(config, Estimator.TRIPLES, generated_at)


def run_chi_d_experiment(config: ExperimentConfig, generated_at: Optional[str] = None) -> ExperimentReport:
    """χ + 1 色区分着色证书的成功率"""
    return _run_single(config, Estimator.CHI_D, generated_at)


def run_structure_event_experiment(config: ExperimentConfig, generated_at: Optional[str] = None) -> ExperimentReport:
    return _run_single(config, Estimator.STRUCTURE_EVENTS, generated_at)


def run_size_concentration(config: ExperimentConfig, generated_at: Optional[str] = None) -> ExperimentReport:
    return _run_single(config, Estimator.SIZE_CONCENTRATION, generated_at)
