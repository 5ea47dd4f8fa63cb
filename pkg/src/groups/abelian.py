"""
有限阿贝尔群模块

有限阿贝尔群以循环因子列表 Z_{d1} × … × Z_{dk} 表示，元素以混合进制
向量存储并用规范整数下标标识（第一个因子为最高位）。

主要功能：
1. 群描述串解析（"2,2,9"）与规范化（不变因子、准素分解）
2. 元素运算：加法、取负、阶
3. 分类：Type I / Type II / Other
4. 结构枚举：O₂（阶不超过 2 的元素）、群自同构、子群、陪集

规模控制：
    群自同构与子群枚举受配置项 caps.group_enum、caps.max_group_automorphisms、
    caps.max_subgroups 限制，超出时抛出 ScaleError。
"""

# ============ 标准库导入 ============
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, reduce
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

# ============ 第三方库导入 ============
import numpy as np
from sympy import factorint

# ============ 本地模块导入 ============
from src.core.config import resolve_cap
from src.core.errors import ParameterError, ScaleError, SpecMismatchError
from src.core.logger import logger
from src.groups.permutation import Permutation


class GroupFamily(str, Enum):
    """群族"""
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    OTHER = "Other"


# ============ 群描述 ============

@dataclass(frozen=True)
class GroupSpec:
    """
    有限阿贝尔群 Z_{d1} × … × Z_{dk}

    属性:
        factors: 循环因子阶列表，按用户给出的顺序保存（不做规范化）

    说明:
        加法表、取负表等按需计算并缓存在实例上，实例本身视为不可变。
    """
    factors: Tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        if not factors:
            raise ParameterError("group spec needs at least one cyclic factor")
        bad = [d for d in factors if d < 2]
        if bad:
            raise ParameterError(f"cyclic factors must be >= 2, got {bad}")
        object.__setattr__(self, "factors", factors)

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.factors)

    @property
    def n(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def family(self) -> GroupFamily:
        return classify(self)

    @cached_property
    def weights(self) -> np.ndarray:
        """混合进制位权，第一个因子为最高位"""
        weights = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            weights[i] = weights[i + 1] * self.factors[i + 1]
        return weights

    @cached_property
    def coords(self) -> np.ndarray:
        """n × k 坐标表，第 i 行为下标 i 的坐标"""
        index = np.arange(self.n, dtype=np.int64)
        return (index[:, None] // self.weights[None, :]) % np.asarray(self.factors, dtype=np.int64)

    @cached_property
    def add_table(self) -> np.ndarray:
        """n × n 加法表（int32）"""
        moduli = np.asarray(self.factors, dtype=np.int64)
        summed = (self.coords[:, None, :] + self.coords[None, :, :]) % moduli
        return (summed @ self.weights).astype(np.int32)

    @cached_property
    def neg_table(self) -> np.ndarray:
        moduli = np.asarray(self.factors, dtype=np.int64)
        return (((-self.coords) % moduli) @ self.weights).astype(np.int32)

    @cached_property
    def double_table(self) -> np.ndarray:
        """x ↦ 2x"""
        index = np.arange(self.n)
        return self.add_table[index, index]

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != self.rank:
            raise ParameterError(f"expected {self.rank} coordinates, got {len(coords)}")
        index = 0
        for c, d in zip(coords, self.factors):
            index = index * d + (int(c) % d)
        return index

    def decode(self, index: int) -> Tuple[int, ...]:
        self._check_index(index)
        return tuple(int(c) for c in self.coords[index])

    def element(self, index: int) -> "Element":
        self._check_index(index)
        return Element(self, int(index))

    def from_coords(self, coords: Sequence[int]) -> "Element":
        return Element(self, self.encode(coords))

    @property
    def zero(self) -> "Element":
        return Element(self, 0)

    def elements(self) -> Iterator["Element"]:
        for index in range(self.n):
            yield Element(self, index)

    def basis(self) -> List[int]:
        """标准生成元 e_i 的下标"""
        return [int(w) for w in self.weights]

    def _check_index(self, index: int):
        if not 0 <= int(index) < self.n:
            raise ParameterError(f"element index {index} out of range for group {self} (n={self.n})")


def parse_group_spec(text: str) -> GroupSpec:
    """
    解析群描述串

    参数:
        text: 逗号分隔的循环因子，例如 "2,2,9"，空白被忽略

    返回:
        GroupSpec 对象

    异常:
        ParameterError: 格式错误或因子小于 2
    """
    cleaned = "".join(str(text).split())
    if not cleaned:
        raise ParameterError("empty group spec")
    try:
        factors = tuple(int(part) for part in cleaned.split(","))
    except ValueError:
        raise ParameterError(f"malformed group spec '{text}': expected comma-separated integers")
    return GroupSpec(factors)


# ============ 元素 ============

@dataclass(frozen=True)
class Element:
    """群元素，身份由规范下标决定"""
    spec: GroupSpec
    index: int

    @property
    def coords(self) -> Tuple[int, ...]:
        return self.spec.decode(self.index)

    def __add__(self, other: "Element") -> "Element":
        return add(self, other)

    def __neg__(self) -> "Element":
        return neg(self)

    def __sub__(self, other: "Element") -> "Element":
        return add(self, neg(other))

    def order(self) -> int:
        return order(self)

    def __repr__(self) -> str:
        return f"Element({self.spec}: {self.coords})"


def _same_spec(a: Element, b: Element):
    if a.spec != b.spec:
        raise SpecMismatchError(f"elements from different groups: {a.spec} vs {b.spec}")


def add(a: Element, b: Element) -> Element:
    _same_spec(a, b)
    return Element(a.spec, int(a.spec.add_table[a.index, b.index]))


def neg(a: Element) -> Element:
    return Element(a.spec, int(a.spec.neg_table[a.index]))


def order(a: Element) -> int:
    """满足 m·a = 0 的最小正整数 m"""
    return reduce(
        math.lcm,
        (d // math.gcd(c, d) for c, d in zip(a.coords, a.spec.factors)),
        1,
    )


def element_orders(spec: GroupSpec) -> np.ndarray:
    """所有元素的阶（按下标）"""
    moduli = np.asarray(spec.factors, dtype=np.int64)
    per_factor = moduli[None, :] // np.gcd(spec.coords, moduli[None, :])
    return np.lcm.reduce(per_factor, axis=1)


# ============ 规范化与分类 ============

def primary_decomposition(spec: GroupSpec) -> List[int]:
    """
    准素分解：把每个循环因子拆成素数幂，升序返回

    示例:
        [6, 4] → [2, 3, 4]
    """
    powers = []
    for d in spec.factors:
        for prime, exponent in factorint(d).items():
            powers.append(prime ** exponent)
    return sorted(powers)


def invariant_factors(spec: GroupSpec) -> List[int]:
    """
    不变因子 d1 | d2 | … | dr（升序）

    示例:
        [2, 3] → [6]；[2, 2, 9] → [2, 18]
    """
    exponents: Dict[int, List[int]] = defaultdict(list)
    for d in spec.factors:
        for prime, exponent in factorint(d).items():
            exponents[prime].append(exponent)
    if not exponents:
        return []
    length = max(len(e) for e in exponents.values())
    factors = [1] * length
    for prime, exps in exponents.items():
        # 最大指数进入最后一个不变因子
        for position, exponent in enumerate(sorted(exps, reverse=True)):
            factors[length - 1 - position] *= prime ** exponent
    return factors


def is_cyclic(spec: GroupSpec) -> bool:
    return len(invariant_factors(spec)) == 1


def odd_part(spec: GroupSpec) -> List[int]:
    """奇数阶部分 N 的准素分量"""
    return [q for q in primary_decomposition(spec) if q % 2 == 1]


def classify(spec: GroupSpec) -> GroupFamily:
    """
    群族分类

    - TypeI: gcd(n, 6) = 1
    - TypeII: A ≅ Z₂^r × N，N 为奇数阶非循环群
    - Other: 其余情形
    """
    if math.gcd(spec.n, 6) == 1:
        return GroupFamily.TYPE_I

    primary = primary_decomposition(spec)
    two_parts = [q for q in primary if q % 2 == 0]
    if any(q > 2 for q in two_parts):
        return GroupFamily.OTHER

    odd_primes = [int(next(iter(factorint(q)))) for q in primary if q % 2 == 1]
    # 奇数部分非循环 ⇔ 某个奇素数出现在至少两个准素分量中
    if odd_primes and len(set(odd_primes)) < len(odd_primes):
        return GroupFamily.TYPE_II
    return GroupFamily.OTHER


# ============ O₂ ============

def involution_set(spec: GroupSpec) -> FrozenSet[int]:
    """O₂ = {a : 2a = 0}，包含零元"""
    return frozenset(int(x) for x in np.flatnonzero(spec.double_table == 0))


def involution_count(spec: GroupSpec) -> int:
    """m = |O₂|"""
    return len(involution_set(spec))


# ============ 群自同构 ============

def _enum_cap(spec: GroupSpec, cap: Optional[int]) -> int:
    limit = resolve_cap("group_enum", cap)
    if spec.n > limit:
        logger.warning(f"Group {spec} (n={spec.n}) exceeds group_enum cap {limit}")
        raise ScaleError("group_enum", limit, spec.n, f"enumeration on group {spec}")
    return limit


def _homomorphism_images(spec: GroupSpec, basis_images: Sequence[int]) -> np.ndarray:
    """由标准生成元的像确定整个同态的像数组"""
    moduli = np.asarray(spec.factors, dtype=np.int64)
    matrix = spec.coords[list(basis_images)]
    return (((spec.coords @ matrix) % moduli) @ spec.weights).astype(np.int64)


def iter_group_automorphisms(spec: GroupSpec, cap: Optional[int] = None) -> Iterator[Permutation]:
    """
    惰性枚举 Aut(A)

    对每个标准生成元 e_i 依次选择像 x_i（需满足 d_i·x_i = 0），
    已选生成元张成的子群阶必须等于对应因子之积，否则剪枝。

    参数:
        spec: 群描述
        cap: 群阶上限，默认读取 caps.group_enum

    返回:
        逐个产生群自同构（作为下标置换）

    异常:
        ScaleError: 群阶超过上限
    """
    _enum_cap(spec, cap)
    orders = element_orders(spec)
    candidates = [
        [int(x) for x in np.flatnonzero(d % orders == 0)]
        for d in spec.factors
    ]
    add_table = spec.add_table

    def extend(depth: int, chosen: List[int], span: List[int]) -> Iterator[Permutation]:
        if depth == spec.rank:
            yield Permutation(tuple(int(v) for v in _homomorphism_images(spec, chosen)))
            return
        d = spec.factors[depth]
        for x in candidates[depth]:
            new_span = set()
            multiple = 0
            for _ in range(d):
                new_span.update(int(v) for v in add_table[span, multiple])
                multiple = int(add_table[multiple, x])
            if len(new_span) != len(span) * d:
                continue
            chosen.append(x)
            yield from extend(depth + 1, chosen, sorted(new_span))
            chosen.pop()

    yield from extend(0, [], [0])


def enumerate_group_automorphisms(spec: GroupSpec, cap: Optional[int] = None,
                                  max_count: Optional[int] = None) -> List[Permutation]:
    """
    完整列出 Aut(A)

    异常:
        ScaleError: 群阶超过 caps.group_enum，或自同构个数超过 caps.max_group_automorphisms
    """
    limit = resolve_cap("max_group_automorphisms", max_count)
    result = []
    for phi in iter_group_automorphisms(spec, cap):
        result.append(phi)
        if len(result) > limit:
            logger.warning(f"Aut({spec}) has more than {limit} elements")
            raise ScaleError("max_group_automorphisms", limit, None, f"Aut({spec})")
    logger.debug(f"Enumerated {len(result)} automorphisms of {spec}")
    return result


# ============ 子群与陪集 ============

@dataclass(frozen=True)
class Subgroup:
    """子群，保存元素下标集合"""
    spec: GroupSpec
    elements: FrozenSet[int]

    @property
    def order(self) -> int:
        return len(self.elements)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.order, tuple(sorted(self.elements)))

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_proper(self) -> bool:
        return self.order < self.spec.n

    def to_list(self) -> List[int]:
        return sorted(self.elements)


def is_subgroup(spec: GroupSpec, elements: FrozenSet[int]) -> bool:
    if 0 not in elements:
        return False
    members = list(elements)
    sums = spec.add_table[np.ix_(members, members)]
    return set(int(v) for v in np.unique(sums)) <= elements and all(
        int(spec.neg_table[x]) in elements for x in members
    )


def _join(spec: GroupSpec, base: FrozenSet[int], g: int) -> FrozenSet[int]:
    """⟨H, g⟩ = H + ⟨g⟩"""
    add_table = spec.add_table
    members = list(base)
    joined = set(base)
    multiple = g
    while multiple not in base:
        joined.update(int(v) for v in add_table[members, multiple])
        multiple = int(add_table[multiple, g])
    return frozenset(joined)


def cosets(subgroup: Subgroup) -> List[FrozenSet[int]]:
    """A 关于 H 的陪集划分，按代表元下标升序"""
    spec = subgroup.spec
    members = list(subgroup.elements)
    covered = set()
    result = []
    for a in range(spec.n):
        if a in covered:
            continue
        coset = frozenset(int(v) for v in spec.add_table[a, members])
        covered.update(coset)
        result.append(coset)
    return result


def enumerate_subgroups(spec: GroupSpec, cap: Optional[int] = None,
                        max_count: Optional[int] = None) -> List[Subgroup]:
    """
    枚举全部子群

    从平凡子群出发，对每个已知子群 H 与每个陪集代表 g 计算 ⟨H, g⟩，
    按元素集合去重。

    返回:
        按 (阶, 元素下标) 排序的子群列表

    异常:
        ScaleError: 群阶或子群个数超过上限
    """
    _enum_cap(spec, cap)
    limit = resolve_cap("max_subgroups", max_count)

    trivial = frozenset({0})
    found = {trivial}
    frontier = [trivial]
    while frontier:
        next_frontier = []
        for base in frontier:
            for coset in cosets(Subgroup(spec, base)):
                g = min(coset)
                if g in base:
                    continue
                joined = _join(spec, base, g)
                if joined not in found:
                    found.add(joined)
                    next_frontier.append(joined)
                    if len(found) > limit:
                        logger.warning(f"Group {spec} has more than {limit} subgroups")
                        raise ScaleError("max_subgroups", limit, None, f"subgroups of {spec}")
        frontier = next_frontier

    subgroups = sorted((Subgroup(spec, elements) for elements in found), key=Subgroup.sort_key)
    logger.debug(f"Enumerated {len(subgroups)} subgroups of {spec}")
    return subgroups
