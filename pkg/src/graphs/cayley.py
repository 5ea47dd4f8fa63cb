"""
Cayley 图模块

邻接关系以位行（Python 整数）存储：rows[u] 的第 v 位为 1 表示 u ~ v。

主要功能：
1. BitGraph：通用无向简单图（独立集判定、自同构校验、DIMACS 导出）
2. CayleyGraph：由 (A, S) 构建的 Cayley 图，g ~ h 当且仅当 h − g ∈ S
3. 平移 x ↦ x + g 与反演 x ↦ −x
"""

# ============ 标准库导入 ============
from typing import Iterable, Iterator, List, Sequence, Tuple

# ============ 本地模块导入 ============
from src.core.errors import ParameterError
from src.groups.abelian import Element, GroupSpec
from src.groups.permutation import Permutation
from src.groups.sampler import ConnectionSet


class BitGraph:
    """
    位集邻接的无向简单图

    属性:
        n: 顶点数
        rows: 每个顶点的邻接位行
    """

    def __init__(self, n: int, rows: Sequence[int]):
        if len(rows) != n:
            raise ParameterError(f"expected {n} adjacency rows, got {len(rows)}")
        self.n = n
        self.rows: Tuple[int, ...] = tuple(int(r) for r in rows)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "BitGraph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def complete(cls, n: int) -> "BitGraph":
        full = (1 << n) - 1
        return cls(n, [full & ~(1 << u) for u in range(n)])

    @classmethod
    def empty(cls, n: int) -> "BitGraph":
        return cls(n, [0] * n)

    @classmethod
    def cycle(cls, n: int) -> "BitGraph":
        return cls.from_edges(n, ((u, (u + 1) % n) for u in range(n)))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, u: int) -> List[int]:
        row = self.rows[u]
        result = []
        while row:
            low = row & -row
            result.append(low.bit_length() - 1)
            row ^= low
        return result

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def max_degree(self) -> int:
        return max((self.degree(u) for u in range(self.n)), default=0)

    def edges(self) -> Iterator[Tuple[int, int]]:
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(self.degree(u) for u in range(self.n)) // 2

    def is_symmetric(self) -> bool:
        return all(self.has_edge(v, u) for u in range(self.n) for v in self.neighbors(u))

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vertices = list(vertices)
        mask = 0
        for v in vertices:
            mask |= 1 << v
        return all(not (self.rows[v] & mask) for v in vertices)

    def is_automorphism(self, perm: Permutation) -> bool:
        """置换为双射，故只需检查边被保持"""
        if perm.n != self.n:
            return False
        images = perm.images
        rows = self.rows
        for u in range(self.n):
            image_row = rows[images[u]]
            for v in self.neighbors(u):
                if not (image_row >> images[v]) & 1:
                    return False
        return True

    def to_dimacs(self) -> str:
        """DIMACS 边表：'p edge n m' 头，顶点编号从 1 开始"""
        edges = list(self.edges())
        lines = [f"p edge {self.n} {len(edges)}"]
        lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
        return "\n".join(lines) + "\n"


class CayleyGraph(BitGraph):
    """
    Cayley 图 Γ(A, S)

    属性:
        spec: 群描述
        connection: 连接集 S
    """

    def __init__(self, spec: GroupSpec, connection: ConnectionSet):
        connection.require_spec(spec)
        add_table = spec.add_table
        members = connection.to_list()
        rows = []
        for g in range(spec.n):
            row = 0
            for h in add_table[g, members]:
                row |= 1 << int(h)
            rows.append(row)
        super().__init__(spec.n, rows)
        self.spec = spec
        self.connection = connection

    @property
    def regular_degree(self) -> int:
        return self.connection.size

    def translation(self, g: int) -> Permutation:
        return translation(self, g)

    def inversion(self) -> Permutation:
        return inversion(self)


def build(spec: GroupSpec, connection: ConnectionSet) -> CayleyGraph:
    """
    构建 Cayley 图

    异常:
        SpecMismatchError: 连接集不属于该群
    """
    return CayleyGraph(spec, connection)


def is_independent(graph: BitGraph, vertices: Iterable[int]) -> bool:
    return graph.is_independent(vertices)


def translation(graph: CayleyGraph, g) -> Permutation:
    """x ↦ x + g；g 可以是下标或 Element"""
    index = g.index if isinstance(g, Element) else int(g)
    return Permutation(tuple(int(x) for x in graph.spec.add_table[:, index]))


def inversion(graph: CayleyGraph) -> Permutation:
    """x ↦ −x"""
    return Permutation(tuple(int(x) for x in graph.spec.neg_table))
