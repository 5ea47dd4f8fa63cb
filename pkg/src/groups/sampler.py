"""
随机连接集采样模块

实现随机 Cayley 图模型：每个 2 阶元素以概率 p 独立入选，每一对 {x, −x}
（x ≠ −x）以概率 p 整体入选，零元永不入选。

主要功能：
1. RandomStream：主种子 + 子流下标 → 可复现的 numpy Generator
2. ConnectionSet：逆封闭、不含零元的连接集及其 JSON 序列化
3. sample_connection_set：按代表元下标升序逐个抽取
4. SizeDecomposition：|S| = X′ + 2X″ 分解

随机数约定：
    生成器为 PCG64；子流由 numpy SeedSequence(entropy=seed, spawn_key=(index,))
    派生，SeedSequence 的哈希即主种子与试验下标的混合函数。
    每个代表元消耗一个 [0,1) 均匀数，小于 p 时入选。
"""

# ============ 标准库导入 ============
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional

# ============ 第三方库导入 ============
import numpy as np

# ============ 本地模块导入 ============
from src.core.errors import ParameterError, SpecMismatchError
from src.groups.abelian import GroupSpec, involution_count


@dataclass(frozen=True)
class RandomStream:
    """
    可复现的随机子流

    属性:
        seed: 非负 64 位主种子
        index: 子流下标（通常为试验编号）
    """
    seed: int
    index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ParameterError(f"seed must be a non-negative 64-bit integer, got {self.seed}")
        if int(self.index) < 0:
            raise ParameterError(f"stream index must be non-negative, got {self.index}")

    def generator(self) -> np.random.Generator:
        """每次调用都从子流起点重新开始"""
        sequence = np.random.SeedSequence(entropy=int(self.seed), spawn_key=(int(self.index),))
        return np.random.Generator(np.random.PCG64(sequence))

    def substream(self, index: int) -> "RandomStream":
        return RandomStream(self.seed, index)


@dataclass(frozen=True)
class SizeDecomposition:
    """|S| = x_prime + 2·x_double_prime"""
    x_prime: int
    x_double_prime: int

    @property
    def size(self) -> int:
        return self.x_prime + 2 * self.x_double_prime


@dataclass(frozen=True)
class ConnectionSet:
    """
    逆封闭连接集 S ⊆ A∖{0}

    属性:
        spec: 所在群
        members: 元素下标集合
        p: 采样概率（手工给出的集合为 None）
    """
    spec: GroupSpec
    members: FrozenSet[int]
    p: Optional[float] = None

    def __post_init__(self):
        members = frozenset(int(x) for x in self.members)
        object.__setattr__(self, "members", members)
        out_of_range = [x for x in members if not 0 <= x < self.spec.n]
        if out_of_range:
            raise ParameterError(f"indices {sorted(out_of_range)} out of range for group {self.spec}")
        if 0 in members:
            raise ParameterError("connection set must not contain the zero element")
        neg_table = self.spec.neg_table
        missing = sorted(int(neg_table[x]) for x in members if int(neg_table[x]) not in members)
        if missing:
            raise ParameterError(f"connection set is not inverse-closed; missing {missing}")

    @classmethod
    def from_indices(cls, spec: GroupSpec, indices: Iterable[int], p: Optional[float] = None) -> "ConnectionSet":
        return cls(spec, frozenset(indices), p)

    @classmethod
    def empty(cls, spec: GroupSpec) -> "ConnectionSet":
        return cls(spec, frozenset(), 0.0)

    @classmethod
    def full(cls, spec: GroupSpec) -> "ConnectionSet":
        return cls(spec, frozenset(range(1, spec.n)), 1.0)

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, index: int) -> bool:
        return index in self.members

    def __len__(self) -> int:
        return len(self.members)

    def is_empty(self) -> bool:
        return not self.members

    def is_full(self) -> bool:
        return len(self.members) == self.spec.n - 1

    def to_list(self) -> List[int]:
        return sorted(self.members)

    def decomposition(self) -> SizeDecomposition:
        doubles = self.spec.double_table
        x_prime = sum(1 for x in self.members if int(doubles[x]) == 0)
        return SizeDecomposition(x_prime, (self.size - x_prime) // 2)

    def require_spec(self, spec: GroupSpec):
        if self.spec != spec:
            raise SpecMismatchError(f"connection set belongs to {self.spec}, not {spec}")


def draw_representatives(spec: GroupSpec) -> np.ndarray:
    """每次独立抽取对应的代表元：非零且不大于其逆元的下标，升序"""
    index = np.arange(1, spec.n)
    return index[index <= spec.neg_table[1:]]


def trial_count(spec: GroupSpec) -> int:
    """独立 Bernoulli 抽取次数 (m−1) + (n−m)/2"""
    m = involution_count(spec)
    return (m - 1) + (spec.n - m) // 2


def _check_probability(p: float):
    if not 0.0 <= float(p) <= 1.0:
        raise ParameterError(f"probability must lie in [0, 1], got {p}")


def sample_with_generator(spec: GroupSpec, p: float, rng: np.random.Generator) -> ConnectionSet:
    """用已有生成器采样，会推进生成器状态"""
    _check_probability(p)
    representatives = draw_representatives(spec)
    draws = rng.random(len(representatives))
    chosen = representatives[draws < p]
    members = set(int(x) for x in chosen)
    members.update(int(spec.neg_table[x]) for x in chosen)
    return ConnectionSet(spec, frozenset(members), float(p))


def sample_connection_set(spec: GroupSpec, p: float, stream: RandomStream) -> ConnectionSet:
    """
    按随机模型采样连接集

    参数:
        spec: 群描述
        p: 入选概率，须在 [0, 1] 内
        stream: 随机子流

    返回:
        逆封闭、不含零元的 ConnectionSet

    异常:
        ParameterError: p 不在 [0, 1] 内
    """
    return sample_with_generator(spec, p, stream.generator())
