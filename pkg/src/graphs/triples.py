"""
零和三元组模块

𝒯 = {{x, y, z} ⊂ A : x + y + z = 0, x, y, z 非零且两两不同}，
差集 D(T) = {±(x−y), ±(y−z), ±(x−z)}。在 Cayley 图中 T 独立当且仅当 D(T) ∩ S = ∅。
"""

# ============ 标准库导入 ============
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, List, Optional, Tuple

# ============ 本地模块导入 ============
from src.core.errors import ParameterError
from src.graphs.cayley import CayleyGraph
from src.graphs.symmetry import AutomorphismGroup, semidirect_elements
from src.groups.abelian import GroupSpec


@dataclass(frozen=True)
class ZeroSumTriple:
    """
    零和三元组

    属性:
        spec: 所在群
        elements: 三个元素下标，升序
    """
    spec: GroupSpec
    elements: Tuple[int, int, int]

    def __post_init__(self):
        elements = tuple(sorted(int(x) for x in self.elements))
        if len(elements) != 3 or len(set(elements)) != 3 or 0 in elements:
            raise ParameterError(f"a zero-sum triple needs three distinct nonzero elements, got {elements}")
        add_table = self.spec.add_table
        total = int(add_table[int(add_table[elements[0], elements[1]]), elements[2]])
        if total != 0:
            raise ParameterError(f"elements {elements} do not sum to zero in {self.spec}")
        object.__setattr__(self, "elements", elements)

    @cached_property
    def difference_set(self) -> FrozenSet[int]:
        add_table = self.spec.add_table
        neg_table = self.spec.neg_table
        x, y, z = self.elements
        result = set()
        for a, b in ((x, y), (y, z), (x, z)):
            d = int(add_table[a, int(neg_table[b])])
            result.add(d)
            result.add(int(neg_table[d]))
        return frozenset(result)

    @cached_property
    def difference_pairs(self) -> FrozenSet[int]:
        """D(T) 中的 {d, −d} 对，以较小下标代表"""
        return difference_pairs(self.spec, self.difference_set)

    def negated(self) -> "ZeroSumTriple":
        neg_table = self.spec.neg_table
        return ZeroSumTriple(self.spec, tuple(int(neg_table[x]) for x in self.elements))

    def as_set(self) -> FrozenSet[int]:
        return frozenset(self.elements)

    def to_list(self) -> List[int]:
        return list(self.elements)


def difference_pairs(spec: GroupSpec, elements) -> FrozenSet[int]:
    neg_table = spec.neg_table
    return frozenset(min(int(d), int(neg_table[d])) for d in elements)


def enumerate_zero_sum_triples(spec: GroupSpec) -> List[ZeroSumTriple]:
    """
    枚举 𝒯，按 (x, y, z) 字典序

    gcd(n, 6) = 1 时个数为 (n−1)(n−5)/6。
    """
    add_table = spec.add_table
    neg_table = spec.neg_table
    triples = []
    for x in range(1, spec.n):
        for y in range(x + 1, spec.n):
            z = int(neg_table[int(add_table[x, y])])
            if z > y:
                triples.append(ZeroSumTriple(spec, (x, y, z)))
    return triples


def triple_is_independent(graph: CayleyGraph, triple: ZeroSumTriple) -> bool:
    """D(T) ∩ S = ∅"""
    return not (triple.difference_set & graph.connection.members)


def independent_triples(graph: CayleyGraph) -> List[ZeroSumTriple]:
    return [t for t in enumerate_zero_sum_triples(graph.spec) if triple_is_independent(graph, t)]


def find_independent_triple(graph: CayleyGraph) -> Optional[ZeroSumTriple]:
    """按枚举顺序返回第一个独立三元组，不存在时返回 None"""
    for triple in enumerate_zero_sum_triples(graph.spec):
        if triple_is_independent(graph, triple):
            return triple
    return None


def verify_triple_rigidity(spec: GroupSpec, triple: ZeroSumTriple,
                           semidirect: Optional[AutomorphismGroup] = None) -> bool:
    """A ⋊ ⟨i⟩ 中没有非平凡元素整体固定 T（可传入预先算好的 A ⋊ ⟨i⟩）"""
    target = triple.as_set()
    group = semidirect if semidirect is not None else semidirect_elements(spec)
    for sigma in group.nontrivial():
        if sigma.image_of_set(target) == target:
            return False
    return True
