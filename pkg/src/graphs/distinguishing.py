"""
区分着色模块

一个着色是区分的，当且仅当没有非平凡自同构把每个颜色类映到自身。

主要功能：
1. is_distinguishing：给出判定与违例自同构（见证）
2. distinguishing_chromatic_number_exact：按颜色数递增回溯搜索正常且区分的着色
3. type1_distinguishing_coloring：精确着色后把一个独立零和三元组改成新颜色
"""

# ============ 标准库导入 ============
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

# ============ 第三方库导入 ============
import numpy as np

# ============ 本地模块导入 ============
from src.core.config import resolve_cap
from src.core.errors import ConstructionError, NoTripleFound, ScaleError
from src.core.logger import logger
from src.graphs.cayley import BitGraph, CayleyGraph
from src.graphs.coloring import Coloring, _check_length, chromatic_number_exact, is_proper
from src.graphs.symmetry import AutomorphismGroup
from src.graphs.triples import ZeroSumTriple, find_independent_triple
from src.groups.permutation import Permutation


@dataclass(frozen=True)
class DistinguishingVerdict:
    """
    区分性判定

    属性:
        is_distinguishing: 是否区分
        witness: 不区分时，第一个保持所有颜色类的非平凡元素
    """
    is_distinguishing: bool
    witness: Optional[Permutation] = None

    def __bool__(self) -> bool:
        return self.is_distinguishing

    def to_dict(self) -> Dict[str, Any]:
        return {
            "is_distinguishing": self.is_distinguishing,
            "witness": self.witness.to_list() if self.witness is not None else None,
        }


def preserves_classes(sigma: Permutation, colors) -> bool:
    images = sigma.images
    return all(colors[images[v]] == c for v, c in enumerate(colors))


def is_distinguishing(coloring: Coloring, aut: AutomorphismGroup) -> DistinguishingVerdict:
    """
    判定着色相对给定置换群是否区分

    按群元素顺序扫描，返回第一个保持全部颜色类的非平凡元素作为见证。
    """
    colors = coloring.colors
    for sigma in aut.elements:
        if sigma.is_identity():
            continue
        if preserves_classes(sigma, colors):
            return DistinguishingVerdict(False, sigma)
    return DistinguishingVerdict(True, None)


class _DistinguishingSearch:
    """
    对固定颜色数 r 回溯正常着色

    顶点按下标着色，颜色不超过已用最大颜色 + 1；同时维护仍可能保持
    当前部分着色的群元素集合，叶子处只剩恒等置换即为区分着色。
    """

    def __init__(self, graph: BitGraph, aut: AutomorphismGroup):
        self.graph = graph
        self.images = np.array([g.images for g in aut.elements], dtype=np.int64).reshape(len(aut), graph.n)
        inverse = np.empty_like(self.images)
        rows = np.arange(self.images.shape[0])[:, None]
        inverse[rows, self.images] = np.arange(graph.n)[None, :]
        self.inverse = inverse
        self.nodes = 0

    def find(self, r: int) -> Optional[List[int]]:
        colors = np.full(self.graph.n, -1, dtype=np.int64)
        alive = np.arange(self.images.shape[0])
        return self._branch(0, r, colors, alive, -1)

    def _branch(self, v: int, r: int, colors: np.ndarray, alive: np.ndarray, top: int) -> Optional[List[int]]:
        n = self.graph.n
        if v == n:
            return [int(c) for c in colors] if len(alive) == 1 else None
        self.nodes += 1
        row = self.graph.rows[v]
        forward = self.images[alive, v]
        backward = self.inverse[alive, v]
        for c in range(min(top + 2, r)):
            conflict = False
            for u in range(v):
                if colors[u] == c and (row >> u) & 1:
                    conflict = True
                    break
            if conflict:
                continue
            colors[v] = c
            # σ 保持着色需要 colors[σ(v)] = colors[σ⁻¹(v)] = c（已着色时）
            keep = ((colors[forward] == c) | (colors[forward] < 0)) & (
                (colors[backward] == c) | (colors[backward] < 0)
            )
            found = self._branch(v + 1, r, colors, alive[keep], max(top, c))
            if found is not None:
                return found
            colors[v] = -1
        return None


def distinguishing_chromatic_number_exact(graph: BitGraph, aut: AutomorphismGroup,
                                          cap: Optional[int] = None,
                                          chi_cap: Optional[int] = None) -> Tuple[int, Coloring]:
    """
    精确区分色数 χ_D

    参数:
        graph: 图
        aut: 置换群（需包含恒等置换）
        cap: 顶点数上限，默认 caps.chi_d_exact

    返回:
        (χ_D, 见证着色)

    异常:
        ScaleError: 顶点数超过上限
    """
    limit = resolve_cap("chi_d_exact", cap)
    if graph.n > limit:
        logger.warning(f"Graph with {graph.n} vertices exceeds chi_d_exact cap {limit}")
        raise ScaleError("chi_d_exact", limit, graph.n, "exact distinguishing chromatic number")
    if graph.n == 0:
        return 0, Coloring(())

    started = time.perf_counter()
    chi, _ = chromatic_number_exact(graph, chi_cap)
    search = _DistinguishingSearch(graph, aut)
    for r in range(chi, graph.n + 1):
        found = search.find(r)
        if found is not None:
            coloring = Coloring.from_labels(found)
            logger.debug(
                f"Exact chi_D: n={graph.n}, |aut|={aut.order}, chi={chi}, chi_D={coloring.k}, "
                f"nodes={search.nodes}, elapsed={time.perf_counter() - started:.3f}s"
            )
            return coloring.k, coloring
    # 全不同颜色总是正常且区分的，不会走到这里
    coloring = Coloring.distinct(graph.n)
    return graph.n, coloring


@dataclass(frozen=True)
class Type1Certificate:
    """Type I 构造结果：着色、判定、基础色数与使用的三元组"""
    coloring: Coloring
    verdict: DistinguishingVerdict
    chi: int
    triple: ZeroSumTriple

    @property
    def colors_used(self) -> int:
        return self.coloring.k

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coloring": self.coloring.to_list(),
            "colors_used": self.coloring.k,
            "chi": self.chi,
            "triple": self.triple.to_list(),
            **self.verdict.to_dict(),
        }


def type1_distinguishing_coloring(graph: CayleyGraph, aut: AutomorphismGroup,
                                  base: Optional[Coloring] = None,
                                  chi_cap: Optional[int] = None) -> Type1Certificate:
    """
    (χ+1) 色区分着色构造

    先用 χ 种颜色正常着色（base 缺省时精确求解），再把独立零和三元组
    统一改成新颜色 χ，最后重编号。

    异常:
        NoTripleFound: 图中没有独立零和三元组
        ConstructionError: 基础着色不正常，改色后仍不正常
    """
    triple = find_independent_triple(graph)
    if triple is None:
        raise NoTripleFound(f"no independent zero-sum triple in Γ({graph.spec}, S) with |S|={graph.connection.size}")
    if base is None:
        chi, base = chromatic_number_exact(graph, chi_cap)
    else:
        _check_length(graph, base)
        chi = base.k
    labels = list(base.colors)
    for v in triple.elements:
        labels[v] = chi
    coloring = Coloring.from_labels(labels)
    if not is_proper(graph, coloring):
        logger.error(f"Type I construction produced an improper coloring on {graph.spec}")
        raise ConstructionError(
            f"recolored triple {triple.to_list()} does not give a proper coloring; base coloring is improper"
        )
    verdict = is_distinguishing(coloring, aut)
    return Type1Certificate(coloring, verdict, chi, triple)
