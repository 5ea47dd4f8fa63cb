"""
统计工具模块

主要功能：
1. Wilson 95% 置信区间（小样本下仍然有效）
2. 二项标准误、均值与标准误
3. 单侧界比较：经验值 ≤ 界 + 3·SE
"""

# ============ 标准库导入 ============
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Tuple

# ============ 第三方库导入 ============
import numpy as np
from scipy import stats

# 区间的置信水平
CONFIDENCE_LEVEL = 0.95

# 单侧界比较允许的标准误倍数
BOUND_SLACK_SE = 3.0

# 均值比较允许的标准误倍数
MEAN_SLACK_SE = 4.0

# 浮点比较的绝对容差
ABSOLUTE_TOLERANCE = 1e-9


def wilson_interval(successes: int, trials: int,
                    confidence: float = CONFIDENCE_LEVEL) -> Tuple[float, float]:
    """
    Wilson 得分区间

    参数:
        successes: 事件发生次数
        trials: 试验次数（为 0 时返回 [0, 1]）
        confidence: 置信水平

    返回:
        (下端点, 上端点)，均截断到 [0, 1]
    """
    if trials <= 0:
        return 0.0, 1.0
    ci = stats.binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return max(0.0, float(ci.low)), min(1.0, float(ci.high))


def binomial_se(successes: int, trials: int) -> float:
    if trials <= 0:
        return 0.0
    return float(stats.binom.std(trials, successes / trials)) / trials


def mean_and_se(values: Iterable[float]) -> Tuple[float, float]:
    """样本均值与均值标准误（样本数小于 2 时标准误为 0）"""
    data = np.asarray(list(values), dtype=np.float64)
    if data.size == 0:
        return 0.0, 0.0
    if data.size == 1:
        return float(data[0]), 0.0
    return float(data.mean()), float(stats.sem(data, ddof=1))


@dataclass(frozen=True)
class Frequency:
    """
    事件频率

    属性:
        successes: 事件发生次数
        trials: 参与统计的试验数
    """
    successes: int
    trials: int

    @property
    def value(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def interval(self) -> Tuple[float, float]:
        return wilson_interval(self.successes, self.trials)

    @property
    def se(self) -> float:
        return binomial_se(self.successes, self.trials)

    def to_dict(self) -> Dict[str, Any]:
        low, high = self.interval
        return {
            "successes": self.successes,
            "trials": self.trials,
            "value": self.value,
            "interval": [low, high],
            "se": self.se,
        }


def within_bound(empirical: float, bound: float, se: float, slack: float = BOUND_SLACK_SE) -> bool:
    """经验值 ≤ 界 + slack·SE"""
    return empirical <= bound + slack * se + ABSOLUTE_TOLERANCE


def within_mean(empirical: float, expected: float, se: float, slack: float = MEAN_SLACK_SE) -> bool:
    """|经验均值 − 期望| ≤ slack·SE"""
    return abs(empirical - expected) <= slack * se + ABSOLUTE_TOLERANCE


def frequency(flags: Iterable[Optional[bool]]) -> Frequency:
    """统计布尔标志的频率，None 视为跳过"""
    observed = [bool(f) for f in flags if f is not None]
    return Frequency(sum(observed), len(observed))
