"""
置换类型模块

顶点置换是本项目里图自同构、群自同构和平移 / 反演映射的统一表示，
以像数组（image array）存储，序列化为 JSON 整数数组。

主要功能：
1. 复合、求逆、判断恒等
2. 不动点、轮换分解
3. 在给定顶点类上的轨道计数（要求该类在置换下整体不变）
"""

# ============ 标准库导入 ============
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Tuple

# ============ 本地模块导入 ============
from src.core.errors import ParameterError, PreconditionError


@dataclass(frozen=True)
class Permutation:
    """
    {0, …, n−1} 上的置换

    属性:
        images: images[x] 为 x 的像
    """
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(len(images))):
            raise ParameterError(f"not a permutation of 0..{len(images) - 1}: {list(images)[:16]}")
        object.__setattr__(self, "images", images)

    @classmethod
    def _unchecked(cls, images: Tuple[int, ...]) -> "Permutation":
        # 内部复合与求逆的结果必然是置换，跳过校验
        perm = object.__new__(cls)
        object.__setattr__(perm, "images", images)
        return perm

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._unchecked(tuple(range(n)))

    @classmethod
    def from_list(cls, images: Sequence[int]) -> "Permutation":
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __len__(self) -> int:
        return len(self.images)

    def compose(self, other: "Permutation") -> "Permutation":
        """返回 self∘other，即先作用 other 再作用 self"""
        if other.n != self.n:
            raise ParameterError(f"cannot compose permutations of size {self.n} and {other.n}")
        mine = self.images
        return Permutation._unchecked(tuple(mine[x] for x in other.images))

    __mul__ = compose

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation._unchecked(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def fixed_points(self) -> FrozenSet[int]:
        return frozenset(x for x, y in enumerate(self.images) if x == y)

    def image_of_set(self, vertices: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.images[v] for v in vertices)

    def maps_set_onto(self, vertices: Iterable[int]) -> bool:
        vertex_set = frozenset(vertices)
        return self.image_of_set(vertex_set) == vertex_set

    def cycles(self) -> List[Tuple[int, ...]]:
        """轮换分解（含长度为 1 的轮换），按最小元素升序"""
        seen = [False] * self.n
        result = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = self.images[x]
            result.append(tuple(cycle))
        return result

    def orbit_count_on_class(self, vertices: Iterable[int]) -> int:
        """
        置换限制在顶点类上的轮换个数

        参数:
            vertices: 顶点类

        返回:
            轨道（轮换）数量

        异常:
            PreconditionError: 顶点类在该置换下不是整体不变的
        """
        vertex_set = frozenset(vertices)
        if self.image_of_set(vertex_set) != vertex_set:
            raise PreconditionError("class is not mapped onto itself by the permutation")
        seen = set()
        count = 0
        for start in vertex_set:
            if start in seen:
                continue
            count += 1
            x = start
            while x not in seen:
                seen.add(x)
                x = self.images[x]
        return count

    def to_list(self) -> List[int]:
        return list(self.images)
