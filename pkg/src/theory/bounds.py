"""
闭式概率界模块

所有公式在 mpmath 扩展精度下、尽量在对数空间求值（n^{log n} 用普通浮点会溢出）。
对数一律以 2 为底。

主要功能：
1. 引理核函数：(p^{c1} + (1−p)^{c1})^{c2}、n^{log n}·核、指数型中间界
2. 可取 p 的区间：[25 log²n/n, 1 − 25 log²n/n] 等
3. Janson：μ、Δ 上界、尾界 exp(−μ²/2Δ) 及其化简形式
4. Chernoff：|S| 的两项尾界与推荐的 t
"""

# ============ 标准库导入 ============
import math
from typing import Tuple

# ============ 第三方库导入 ============
from mpmath import mp, mpf

# ============ 本地模块导入 ============
from src.core.errors import FormulaDomainError, ParameterError
from src.theory.registry import TailBound, registry

# 扩展精度位数
PRECISION_DPS = 40

# 比较时的相对容差
RELATIVE_TOLERANCE = 1e-9


def approx_le(a, b, rel: float = RELATIVE_TOLERANCE) -> bool:
    """a ≤ b（带相对容差）"""
    return float(a) <= float(b) + rel * max(abs(float(a)), abs(float(b)), 1e-300)


def _check_open_probability(p: float, name: str = "p"):
    if not 0 < p < 1:
        raise ParameterError(f"{name} must lie in (0, 1), got {p}")


def _check_probability(p: float, name: str = "p"):
    if not 0 <= p <= 1:
        raise ParameterError(f"{name} must lie in [0, 1], got {p}")


def _check_exponents(c1: float, c2: float):
    if c1 < 1.5 or c2 < 1.5:
        raise ParameterError(f"c1 and c2 must be >= 3/2, got c1={c1}, c2={c2}")


# ============ 引理核函数 ============

@registry.register
def lemma21_core(p: float, c1: float, c2: float):
    """(p^c1 + (1-p)^c1)^c2"""
    _check_open_probability(p)
    _check_exponents(c1, c2)
    with mp.workdps(PRECISION_DPS):
        p = mpf(p)
        return mp.exp(c2 * mp.log(p ** c1 + (1 - p) ** c1))


@registry.register
def lemma21_value(n: int, p: float, c1: float, c2: float):
    """n^(log2 n) * (p^c1 + (1-p)^c1)^c2, evaluated in log-space"""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    _check_open_probability(p)
    _check_exponents(c1, c2)
    with mp.workdps(PRECISION_DPS):
        p = mpf(p)
        log_value = mp.log(n) * mp.log(n, 2) + c2 * mp.log(p ** c1 + (1 - p) ** c1)
        return mp.exp(log_value)


@registry.register
def lemma21_exponential_bound(p: float, c1: float, c2: float):
    """exp(-p c1 c2 + c2 y^c1) with y = p/(1-p), an upper bound on lemma21_core"""
    _check_open_probability(p)
    _check_exponents(c1, c2)
    with mp.workdps(PRECISION_DPS):
        p = mpf(p)
        y = p / (1 - p)
        return mp.exp(-p * c1 * c2 + c2 * y ** c1)


# ============ p 的区间 ============

def admissible_p_range(n: int) -> Tuple[float, float]:
    """[25 log²n/n, 1 − 25 log²n/n]；n 较小时区间可能为空（下端点大于上端点）"""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    low = 25 * math.log2(n) ** 2 / n
    return low, 1 - low


def type1_p_range(n: int) -> Tuple[float, float]:
    """[25 log²n/n, 1 − (10 log n/n)^{2/3}]"""
    low, _ = admissible_p_range(n)
    return low, 1 - (10 * math.log2(n) / n) ** (2 / 3)


@registry.register
def type2_p_upper(n: int, m: int) -> float:
    """7/(13(m + 2 log2(2n))), the largest p covered for Z_2^r x N groups"""
    if n < 2 or m < 1:
        raise ParameterError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    return 7 / (13 * (m + 2 * math.log2(2 * n)))


def in_range(p: float, interval: Tuple[float, float]) -> bool:
    low, high = interval
    return low <= p <= high


# ============ Janson ============

@registry.register
def triple_count(n: int) -> int:
    """(n-1)(n-5)/6, the number of zero-sum triples when gcd(n, 6) = 1"""
    if n < 2 or math.gcd(n, 6) != 1:
        raise FormulaDomainError(f"triple count formula needs gcd(n, 6) = 1, got n={n}")
    return (n - 1) * (n - 5) // 6


@registry.register
def janson_mu(n: int, q: float):
    """|T| q^3, the expected number of independent zero-sum triples"""
    _check_probability(q, "q")
    with mp.workdps(PRECISION_DPS):
        return triple_count(n) * mpf(q) ** 3


@registry.register
def janson_delta_bound(n: int, q: float):
    """3n|T|q^5 + |T|q^4 + |T|q^3"""
    _check_probability(q, "q")
    with mp.workdps(PRECISION_DPS):
        q = mpf(q)
        count = triple_count(n)
        return 3 * n * count * q ** 5 + count * q ** 4 + count * q ** 3


@registry.register
def janson_tail(mu: float, delta: float) -> TailBound:
    """exp(-mu^2 / (2 delta)); applicable only when delta > 0 and mu <= delta"""
    if mu < 0 or delta < 0:
        raise ParameterError(f"mu and delta must be non-negative, got mu={mu}, delta={delta}")
    with mp.workdps(PRECISION_DPS):
        mu = mpf(mu)
        delta = mpf(delta)
        if delta == 0:
            return TailBound(mpf(1), False)
        value = mp.exp(-mu ** 2 / (2 * delta))
        return TailBound(value, bool(mu <= delta))


@registry.register
def janson_tail_simplified(n: int, q: float):
    """exp(-|T| q^3 / (2(3nq^2 + q + 1)))"""
    _check_probability(q, "q")
    with mp.workdps(PRECISION_DPS):
        q = mpf(q)
        return mp.exp(-triple_count(n) * q ** 3 / (2 * (3 * n * q ** 2 + q + 1)))


# ============ Chernoff ============

@registry.register
def chernoff_size_tail(n: int, m: int, p: float, t: float):
    """P(|S| >= E|S| + 3t) <= exp(-t^2/(2((m-1)p + t/3))) + exp(-t^2/(2((n-m)/2 p + t/3)))"""
    if t <= 0:
        raise ParameterError(f"t must be positive, got {t}")
    _check_probability(p)
    with mp.workdps(PRECISION_DPS):
        p = mpf(p)
        t = mpf(t)
        involutions = mp.exp(-t ** 2 / (2 * ((m - 1) * p + t / 3)))
        pairs = mp.exp(-t ** 2 / (2 * (mpf(n - m) / 2 * p + t / 3)))
        return involutions + pairs


@registry.register
def chernoff_t_choice(n: int, m: int) -> float:
    """2n/(13(m + 2 log2(2n)))"""
    if n < 2 or m < 1:
        raise ParameterError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    return 2 * n / (13 * (m + 2 * math.log2(2 * n)))


@registry.register
def size_event_threshold(n: int, p: float) -> float:
    """13np/7, the |S| level below which the Z_2^r x N argument proceeds"""
    _check_probability(p)
    return 13 * n * p / 7
