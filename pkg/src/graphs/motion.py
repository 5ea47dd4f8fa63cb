"""
运动引理模块

给定 χ 色正常着色与其中一个颜色类 C₁，𝒢 为整体固定 C₁ 的自同构子群。
若 f(𝒢) = Σ_{σ∈𝒢} t^{θ_σ − |C₁|} < r（r 为 |𝒢| 的最小素因子），
把 C₁ 随机拆成 t 个子类即可得到 χ + t − 1 色的正常区分着色。

主要功能：
1. motion_bound：f(𝒢)、F(C₁)、r 以及不动点判据 F(C₁) < |C₁| − 2 log_t |𝒢|
2. motion_recolor：随机拆分 C₁ 直到得到区分着色
3. type2_threshold_check：χ < n / (m + 2 log₂ 2n) 判据与 t = ⌈(2n)^{2χ/(n−mχ)}⌉
"""

# ============ 标准库导入 ============
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Union

# ============ 第三方库导入 ============
import numpy as np
from sympy import primefactors

# ============ 本地模块导入 ============
from src.core.errors import FormulaDomainError, ParameterError, PreconditionError
from src.core.logger import logger
from src.graphs.cayley import BitGraph
from src.graphs.coloring import Coloring, is_proper
from src.graphs.distinguishing import is_distinguishing
from src.graphs.symmetry import AutomorphismGroup
from src.groups.sampler import RandomStream

# 判定整数边界时的相对容差
INTEGER_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MotionBound:
    """
    运动引理计算结果

    属性:
        f: Σ t^{θ−|C₁|}（含恒等元，贡献 1）
        max_fixed: F(C₁)，非平凡元素在 C₁ 中的最多不动点数
        least_prime: |𝒢| 的最小素因子，平凡群为 None（视为 +∞）
        group_order: |𝒢|
        class_size: |C₁|
        t: 拆分数
    """
    f: float
    max_fixed: int
    least_prime: Optional[int]
    group_order: int
    class_size: int
    t: int

    @property
    def satisfied(self) -> bool:
        """f(𝒢) < r（严格不等式）"""
        return self.least_prime is None or self.f < self.least_prime

    @property
    def fixed_point_criterion(self) -> bool:
        """F(C₁) < |C₁| − 2 log_t |𝒢|"""
        return self.max_fixed < self.class_size - 2 * math.log(self.group_order, self.t)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "f": self.f,
            "max_fixed": self.max_fixed,
            "least_prime": self.least_prime,
            "group_order": self.group_order,
            "class_size": self.class_size,
            "t": self.t,
            "satisfied": self.satisfied,
            "fixed_point_criterion": self.fixed_point_criterion,
        }


def _check_t(t: int, minimum: int):
    if int(t) != t or t < minimum:
        raise ParameterError(f"t must be an integer >= {minimum}, got {t}")


def motion_bound(group: AutomorphismGroup, vertices: Iterable[int], t: int) -> MotionBound:
    """
    计算 f(𝒢) 与 F(C₁)

    参数:
        group: 𝒢，每个元素都须把 C₁ 映到自身
        vertices: 颜色类 C₁
        t: 拆分数，整数且 ≥ 2

    异常:
        PreconditionError: 某个元素不保持 C₁
        ParameterError: t 非法
    """
    _check_t(t, 2)
    class_set = frozenset(vertices)
    size = len(class_set)
    terms = []
    max_fixed = 0
    for sigma in group.elements:
        theta = sigma.orbit_count_on_class(class_set)
        terms.append(float(t) ** (theta - size))
        if not sigma.is_identity():
            max_fixed = max(max_fixed, len(sigma.fixed_points() & class_set))
    primes = primefactors(group.order)
    least_prime = int(primes[0]) if primes else None
    return MotionBound(math.fsum(terms), max_fixed, least_prime, group.order, size, int(t))


def motion_recolor(graph: BitGraph, base: Coloring, class_color: int, t: int,
                   aut: AutomorphismGroup, stream: Union[RandomStream, np.random.Generator],
                   max_attempts: int = 1000) -> Optional[Coloring]:
    """
    随机拆分颜色类直至得到区分着色

    C₁ 中每个顶点独立均匀地从 {原颜色, k, …, k+t−2} 中选色，
    拆分独立集不会破坏正常性。

    参数:
        graph: 图
        base: 正常着色
        class_color: C₁ 的颜色
        t: 拆分数（t = 1 时只判定 base 本身）
        aut: 用于判定区分性的置换群
        stream: 随机子流或已有生成器
        max_attempts: 最多尝试次数

    返回:
        区分着色；尝试耗尽时返回 None

    异常:
        PreconditionError: base 不是正常着色
    """
    _check_t(t, 1)
    if not is_proper(graph, base):
        raise PreconditionError("motion recoloring needs a proper base coloring")
    if not 0 <= class_color < base.k:
        raise ParameterError(f"class color {class_color} not in 0..{base.k - 1}")

    if t == 1:
        return base if is_distinguishing(base, aut).is_distinguishing else None

    rng = stream.generator() if isinstance(stream, RandomStream) else stream
    members = sorted(base.color_class(class_color))
    palette = np.array([class_color] + [base.k + j for j in range(t - 1)], dtype=np.int64)
    labels = np.array(base.colors, dtype=np.int64)

    for attempt in range(1, max_attempts + 1):
        labels[members] = palette[rng.integers(0, t, size=len(members))]
        candidate = Coloring.from_labels(labels.tolist())
        if is_distinguishing(candidate, aut).is_distinguishing:
            logger.debug(f"Motion recoloring succeeded after {attempt} attempts (t={t}, |C1|={len(members)})")
            return candidate
    logger.debug(f"Motion recoloring exhausted {max_attempts} attempts (t={t}, |C1|={len(members)})")
    return None


@dataclass(frozen=True)
class ThresholdCheck:
    """χ < n/(m + 2 log₂ 2n) 判据与拆分数 t"""
    applies: bool
    t: int
    threshold: float
    exponent: float

    def to_dict(self) -> Dict[str, Any]:
        return {"applies": self.applies, "t": self.t, "threshold": self.threshold, "exponent": self.exponent}


def ceil_with_tolerance(value: float) -> int:
    nearest = round(value)
    if abs(value - nearest) <= INTEGER_TOLERANCE * max(1.0, abs(value)):
        return int(nearest)
    return int(math.ceil(value))


def type2_threshold_check(n: int, m: int, chi: int) -> ThresholdCheck:
    """
    Type II 判据

    参数:
        n: 群阶
        m: 阶不超过 2 的元素个数
        chi: 色数

    返回:
        ThresholdCheck(applies, t, threshold, exponent)

    异常:
        FormulaDomainError: n ≤ m·χ
    """
    if n <= m * chi:
        raise FormulaDomainError(f"t formula needs n > m*chi, got n={n}, m={m}, chi={chi}")
    threshold = n / (m + 2 * math.log2(2 * n))
    exponent = 2 * chi / (n - m * chi)
    t = ceil_with_tolerance((2 * n) ** exponent)
    return ThresholdCheck(chi < threshold, t, threshold, exponent)
