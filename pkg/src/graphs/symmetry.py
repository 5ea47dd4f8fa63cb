"""
图自同构模块

精确计算图自同构群，并提供 A ⋊ ⟨i⟩ 子群与运动引理所需的不动点 / 轨道统计。

主要功能：
1. 划分细化：每个顶点按"到各单元的邻居数"签名分裂单元，直至稳定
2. 个体化回溯：左侧沿固定路径（首个非单元素单元的最小顶点），
   右侧枚举对应单元的全部顶点，按细化轨迹不一致剪枝，叶子处校验自同构
3. 稳定子链：自底向上逐层求轨道，|Aut| = 各层轨道长度之积
4. 元素列举：由生成元闭包得到完整元素表（受 caps.max_group_order 限制）
5. A ⋊ ⟨i⟩、划分稳定子、不动点与轨道计数

规模控制：
    顶点数超过 caps.aut_exact 时抛出 ScaleError；元素表长度超过
    caps.max_group_order 时抛出 ScaleError。
"""

# ============ 标准库导入 ============
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

# ============ 本地模块导入 ============
from src.core.config import resolve_cap
from src.core.errors import CayleyDistError, ScaleError
from src.core.logger import logger
from src.graphs.cayley import BitGraph, CayleyGraph
from src.groups.abelian import GroupSpec
from src.groups.permutation import Permutation


# ============ 自同构群类型 ============

@dataclass(frozen=True)
class AutomorphismGroup:
    """
    置换群（完整元素表）

    属性:
        n: 作用的顶点数
        elements: 全部元素，按像数组字典序排列（恒等置换在首位）
        generators: 生成元
    """
    n: int
    elements: Tuple[Permutation, ...]
    generators: Tuple[Permutation, ...] = field(default=())

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _members(self) -> FrozenSet[Permutation]:
        return frozenset(self.elements)

    def __contains__(self, perm: Permutation) -> bool:
        return perm in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.n)

    def is_trivial(self) -> bool:
        return self.order == 1

    def nontrivial(self) -> List[Permutation]:
        return [g for g in self.elements if not g.is_identity()]

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[Permutation],
                      generators: Sequence[Permutation] = ()) -> "AutomorphismGroup":
        ordered = tuple(sorted(set(elements), key=lambda g: g.images))
        return cls(n, ordered, tuple(generators))

    @classmethod
    def from_generators(cls, n: int, generators: Sequence[Permutation],
                        cap: Optional[int] = None) -> "AutomorphismGroup":
        return cls.from_elements(n, closure(n, generators, cap), generators)


def closure(n: int, generators: Sequence[Permutation], cap: Optional[int] = None) -> List[Permutation]:
    """
    生成元闭包（广度优先）

    异常:
        ScaleError: 元素个数超过 caps.max_group_order
    """
    limit = resolve_cap("max_group_order", cap)
    identity = Permutation.identity(n)
    seen = {identity}
    queue = [identity]
    head = 0
    while head < len(queue):
        current = queue[head]
        head += 1
        for g in generators:
            product = g.compose(current)
            if product not in seen:
                seen.add(product)
                queue.append(product)
                if len(seen) > limit:
                    logger.warning(f"Permutation group exceeds max_group_order cap {limit}")
                    raise ScaleError("max_group_order", limit, None, "listing group elements")
    return queue


def orbit(point: int, generators: Sequence[Permutation]) -> FrozenSet[int]:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in generators:
            y = g.images[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


# ============ 划分细化 ============

Cells = List[Tuple[int, ...]]


def refine(rows: Sequence[int], cells: Cells) -> Tuple[Cells, Tuple]:
    """
    一维划分细化

    每轮对所有非单元素单元计算顶点签名（到每个单元的邻居数），
    按签名排序分裂，直至没有单元再分裂。

    返回:
        (细化后的有序单元列表, 细化轨迹)
    """
    trace = []
    changed = True
    while changed:
        changed = False
        masks = []
        for cell in cells:
            mask = 0
            for v in cell:
                mask |= 1 << v
            masks.append(mask)
        new_cells: Cells = []
        for position, cell in enumerate(cells):
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: Dict[Tuple[int, ...], List[int]] = {}
            for v in cell:
                row = rows[v]
                signature = tuple((row & mask).bit_count() for mask in masks)
                groups.setdefault(signature, []).append(v)
            if len(groups) == 1:
                new_cells.append(cell)
                continue
            changed = True
            ordered = sorted(groups.items())
            trace.append((position, tuple((signature, len(members)) for signature, members in ordered)))
            new_cells.extend(tuple(sorted(members)) for _, members in ordered)
        cells = new_cells
    return cells, tuple(trace)


def individualize(cells: Cells, position: int, vertex: int) -> Cells:
    cell = cells[position]
    rest = tuple(v for v in cell if v != vertex)
    return cells[:position] + [(vertex,), rest] + cells[position + 1:]


def _first_open_cell(cells: Cells) -> int:
    for position, cell in enumerate(cells):
        if len(cell) > 1:
            return position
    return -1


def _shape(cells: Cells) -> Tuple[int, ...]:
    return tuple(len(cell) for cell in cells)


@dataclass
class _Level:
    cells: Cells
    position: int
    vertex: int


@dataclass
class SearchResult:
    """自同构搜索结果：生成元、各层轨道长度与群阶"""
    generators: List[Permutation]
    orbit_sizes: List[int]
    order: int
    nodes: int


class AutomorphismSearch:
    """
    单个图上的个体化-细化回溯搜索

    左侧路径固定，对每层 d（自底向上）尝试把 v_d 换成同单元中尚未在轨道内的 w，
    找到的第一个自同构作为生成元。
    """

    def __init__(self, graph: BitGraph):
        self.graph = graph
        self.rows = graph.rows
        self.nodes = 0
        self.path: List[_Level] = []
        self.traces: List[Tuple] = []
        self.leaf: Cells = []

    def _left_path(self):
        cells, trace = refine(self.rows, [tuple(range(self.graph.n))])
        self.root_trace = trace
        while True:
            position = _first_open_cell(cells)
            if position < 0:
                break
            vertex = cells[position][0]
            self.path.append(_Level(cells, position, vertex))
            cells, trace = refine(self.rows, individualize(cells, position, vertex))
            self.traces.append((trace, _shape(cells)))
        self.leaf = cells

    def _leaf_map(self, cells: Cells) -> Optional[Permutation]:
        images = [0] * self.graph.n
        for left, right in zip(self.leaf, cells):
            images[left[0]] = right[0]
        perm = Permutation(tuple(images))
        return perm if self.graph.is_automorphism(perm) else None

    def _child(self, cells: Cells, depth: int, position: int, vertex: int) -> Optional[Cells]:
        self.nodes += 1
        child, trace = refine(self.rows, individualize(cells, position, vertex))
        if (trace, _shape(child)) != self.traces[depth]:
            return None
        return child

    def _extend(self, cells: Cells, depth: int) -> Optional[Permutation]:
        if depth == len(self.path):
            return self._leaf_map(cells)
        position = self.path[depth].position
        for w in cells[position]:
            child = self._child(cells, depth, position, w)
            if child is None:
                continue
            found = self._extend(child, depth + 1)
            if found is not None:
                return found
        return None

    def run(self) -> SearchResult:
        self._left_path()
        generators: List[Permutation] = []
        orbit_sizes = [1] * len(self.path)
        for depth in range(len(self.path) - 1, -1, -1):
            level = self.path[depth]
            current = orbit(level.vertex, generators)
            for w in level.cells[level.position]:
                if w in current:
                    continue
                child = self._child(level.cells, depth, level.position, w)
                if child is None:
                    continue
                found = self._extend(child, depth + 1)
                if found is not None:
                    generators.append(found)
                    current = orbit(level.vertex, generators)
            orbit_sizes[depth] = len(current)
        order = 1
        for size in orbit_sizes:
            order *= size
        return SearchResult(generators, orbit_sizes, order, self.nodes)


# ============ 对外接口 ============

def _aut_cap(graph: BitGraph, cap: Optional[int]) -> None:
    limit = resolve_cap("aut_exact", cap)
    if graph.n > limit:
        logger.warning(f"Graph with {graph.n} vertices exceeds aut_exact cap {limit}")
        raise ScaleError("aut_exact", limit, graph.n, "exact automorphism group")


def search_automorphisms(graph: BitGraph, cap: Optional[int] = None) -> SearchResult:
    """
    计算自同构群的生成元与阶（不列举元素）

    异常:
        ScaleError: 顶点数超过 caps.aut_exact
    """
    _aut_cap(graph, cap)
    started = time.perf_counter()
    result = AutomorphismSearch(graph).run()
    logger.debug(
        f"Automorphism search: n={graph.n}, order={result.order}, "
        f"generators={len(result.generators)}, nodes={result.nodes}, "
        f"elapsed={time.perf_counter() - started:.3f}s"
    )
    return result


def automorphism_group_order(graph: BitGraph, cap: Optional[int] = None) -> int:
    return search_automorphisms(graph, cap).order


def _verify_semidirect(graph: CayleyGraph):
    for sigma in semidirect_elements(graph.spec):
        if not graph.is_automorphism(sigma):
            raise CayleyDistError(
                f"translation/inversion map {sigma.to_list()} is not an automorphism of Γ({graph.spec}, S)"
            )


def compute_automorphism_group(graph: BitGraph, cap: Optional[int] = None,
                               max_order: Optional[int] = None) -> AutomorphismGroup:
    """
    计算完整自同构群

    参数:
        graph: 图（Cayley 图时额外校验 A ⋊ ⟨i⟩ ⊆ Aut）
        cap: 顶点数上限，默认 caps.aut_exact
        max_order: 元素表长度上限，默认 caps.max_group_order

    返回:
        AutomorphismGroup，元素按字典序排列

    异常:
        ScaleError: 顶点数或群阶超过上限
    """
    result = search_automorphisms(graph, cap)
    limit = resolve_cap("max_group_order", max_order)
    if result.order > limit:
        logger.warning(f"|Aut| = {result.order} exceeds max_group_order cap {limit}")
        raise ScaleError("max_group_order", limit, result.order, "listing automorphism group elements")
    group = AutomorphismGroup.from_generators(graph.n, result.generators, limit)
    if group.order != result.order:
        raise CayleyDistError(f"closure produced {group.order} elements, search reported {result.order}")
    if isinstance(graph, CayleyGraph):
        _verify_semidirect(graph)
        missing = [s for s in semidirect_elements(graph.spec) if s not in group]
        if missing:
            raise CayleyDistError(f"{len(missing)} maps of A ⋊ ⟨i⟩ missing from the computed group")
    return group


def semidirect_order(spec: GroupSpec) -> int:
    """|A ⋊ ⟨i⟩|：A ≅ Z₂^r 时为 n，否则为 2n"""
    elementary = all(d == 2 for d in spec.factors)
    return spec.n if elementary else 2 * spec.n


def semidirect_elements(spec: GroupSpec) -> AutomorphismGroup:
    """A ⋊ ⟨i⟩ = {x ↦ x + g} ∪ {x ↦ −x + g}"""
    add_table = spec.add_table
    neg_table = spec.neg_table
    maps = []
    for g in range(spec.n):
        maps.append(Permutation(tuple(int(x) for x in add_table[:, g])))
        maps.append(Permutation(tuple(int(add_table[int(neg_table[x]), g]) for x in range(spec.n))))
    translations = [Permutation(tuple(int(x) for x in add_table[:, e])) for e in spec.basis()]
    inverse = Permutation(tuple(int(x) for x in neg_table))
    return AutomorphismGroup.from_elements(spec.n, maps, translations + [inverse])


def is_small(graph: CayleyGraph, cap: Optional[int] = None) -> bool:
    """|Aut(Γ)| = |A ⋊ ⟨i⟩|（包含关系恒成立）"""
    _verify_semidirect(graph)
    return automorphism_group_order(graph, cap) == semidirect_order(graph.spec)


# ============ 不动点与轨道 ============

def fixed_points(sigma: Permutation) -> FrozenSet[int]:
    return sigma.fixed_points()


def orbit_count_on_class(sigma: Permutation, vertices: Iterable[int]) -> int:
    """
    σ 在顶点类上的轨道数 θ

    异常:
        PreconditionError: 该类在 σ 下不是整体不变的
    """
    return sigma.orbit_count_on_class(vertices)


def generating_subset(n: int, elements: Sequence[Permutation]) -> List[Permutation]:
    """按顺序贪心挑选生成元"""
    generators: List[Permutation] = []
    span = {Permutation.identity(n)}
    for g in elements:
        if g in span:
            continue
        generators.append(g)
        span = set(closure(n, generators, max(len(elements), 1)))
        if len(span) == len(elements):
            break
    return generators


def stabilizer_of_partition(aut: AutomorphismGroup, coloring,
                            classes: Optional[Iterable[int]] = None) -> AutomorphismGroup:
    """
    划分稳定子：把每个指定颜色类映到自身的元素

    参数:
        aut: 置换群
        coloring: 着色（Coloring 或颜色序列）
        classes: 指定的颜色；None 表示全部颜色类

    返回:
        子群 AutomorphismGroup
    """
    colors = list(getattr(coloring, "colors", coloring))
    designated = set(colors) if classes is None else set(classes)

    def preserves(g: Permutation) -> bool:
        images = g.images
        for v, c in enumerate(colors):
            if c in designated and colors[images[v]] != c:
                return False
        return True

    # 置换把颜色 c 的每个点映到颜色 c 的点，且为双射，故类整体不变
    kept = [g for g in aut.elements if preserves(g)]
    return AutomorphismGroup(aut.n, tuple(kept), tuple(generating_subset(aut.n, kept)))
