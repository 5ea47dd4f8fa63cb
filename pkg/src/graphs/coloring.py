"""
顶点着色模块

主要功能：
1. Coloring 类型：颜色数组，颜色编号恰为 0..k−1
2. 正常着色判定
3. 贪心着色（下标顺序 / 饱和度顺序 DSATUR）
4. 贪心团下界与 DSATUR 分支定界求精确色数
"""

# ============ 标准库导入 ============
import time
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

# ============ 本地模块导入 ============
from src.core.config import resolve_cap
from src.core.errors import ParameterError, PreconditionError, ScaleError
from src.core.logger import logger
from src.graphs.cayley import BitGraph


class GreedyStrategy(str, Enum):
    INDEX = "index"
    SATURATION = "saturation"


@dataclass(frozen=True)
class Coloring:
    """
    顶点着色

    属性:
        colors: colors[v] 为顶点 v 的颜色，取值恰为 0..k−1
    """
    colors: Tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        used = set(colors)
        if used != set(range(len(used))):
            raise ParameterError(f"colors must be exactly 0..k-1, got {sorted(used)}")
        object.__setattr__(self, "colors", colors)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Coloring":
        """任意标签按首次出现顺序重编号为 0..k−1"""
        relabel: Dict[int, int] = {}
        for label in labels:
            relabel.setdefault(label, len(relabel))
        return cls(tuple(relabel[label] for label in labels))

    @classmethod
    def constant(cls, n: int) -> "Coloring":
        return cls((0,) * n)

    @classmethod
    def distinct(cls, n: int) -> "Coloring":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.colors)

    @property
    def k(self) -> int:
        return len(set(self.colors))

    def normalized(self) -> "Coloring":
        return Coloring.from_labels(self.colors)

    def color_class(self, color: int) -> frozenset:
        return frozenset(v for v, c in enumerate(self.colors) if c == color)

    def classes(self) -> List[frozenset]:
        return [self.color_class(c) for c in range(self.k)]

    def largest_class(self) -> int:
        """最大颜色类的颜色，并列时取编号最小者"""
        sizes = [0] * self.k
        for c in self.colors:
            sizes[c] += 1
        return max(range(self.k), key=lambda c: (sizes[c], -c))

    def to_list(self) -> List[int]:
        return list(self.colors)


def _check_length(graph: BitGraph, coloring: Coloring):
    if coloring.n != graph.n:
        raise PreconditionError(f"coloring covers {coloring.n} vertices, graph has {graph.n}")


def is_proper(graph: BitGraph, coloring: Coloring) -> bool:
    """没有单色边"""
    _check_length(graph, coloring)
    masks = [0] * coloring.k
    for v, c in enumerate(coloring.colors):
        masks[c] |= 1 << v
    return all(not (graph.rows[v] & masks[c]) for v, c in enumerate(coloring.colors))


def _saturation(graph: BitGraph, v: int, masks: List[int]) -> int:
    row = graph.rows[v]
    return sum(1 for mask in masks if row & mask)


def greedy_coloring(graph: BitGraph, strategy: str = GreedyStrategy.SATURATION) -> Coloring:
    """
    贪心着色，颜色数不超过 Δ+1

    参数:
        graph: 图
        strategy: "index"（下标顺序）或 "saturation"（饱和度最大优先，并列取度数大、再取下标小）
    """
    strategy = GreedyStrategy(strategy)
    n = graph.n
    colors = [-1] * n
    masks: List[int] = []
    uncolored = set(range(n))

    for step in range(n):
        if strategy is GreedyStrategy.INDEX:
            v = step
        else:
            v = min(uncolored, key=lambda u: (-_saturation(graph, u, masks), -graph.degree(u), u))
        uncolored.discard(v)
        row = graph.rows[v]
        color = next((c for c, mask in enumerate(masks) if not row & mask), len(masks))
        if color == len(masks):
            masks.append(0)
        masks[color] |= 1 << v
        colors[v] = color
    return Coloring.from_labels(colors) if n else Coloring(())


def greedy_clique(graph: BitGraph) -> List[int]:
    """
    贪心团下界：从每个顶点出发，每步加入候选集中邻居最多的顶点

    返回:
        找到的最大团（顶点升序）
    """
    best: List[int] = []
    for start in range(graph.n):
        clique = [start]
        candidates = graph.rows[start]
        while candidates:
            pick = max(
                _bits(candidates),
                key=lambda u: ((graph.rows[u] & candidates).bit_count(), -u),
            )
            clique.append(pick)
            candidates &= graph.rows[pick]
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _ExactColorer:
    """DSATUR 分支定界：最低可用颜色优先，饱和度最大的顶点先着色，并列取下标最小"""

    def __init__(self, graph: BitGraph, upper: Coloring, clique: List[int]):
        self.graph = graph
        self.best = list(upper.colors)
        self.best_k = upper.k
        self.lower = max(len(clique), 1 if graph.n else 0)
        self.clique = clique
        self.nodes = 0

    def solve(self) -> Tuple[int, Coloring]:
        if self.best_k > self.lower:
            n = self.graph.n
            colors = [-1] * n
            masks: List[int] = []
            # 团顶点预先着上互不相同的颜色
            for c, v in enumerate(self.clique):
                colors[v] = c
                masks.append(1 << v)
            self._branch(colors, masks, n - len(self.clique))
        return self.best_k, Coloring.from_labels(self.best)

    def _branch(self, colors: List[int], masks: List[int], remaining: int):
        if self.best_k <= self.lower:
            return
        self.nodes += 1
        if remaining == 0:
            if len(masks) < self.best_k:
                self.best_k = len(masks)
                self.best = list(colors)
            return
        graph = self.graph
        v = min(
            (u for u in range(graph.n) if colors[u] < 0),
            key=lambda u: (-_saturation(graph, u, masks), u),
        )
        row = graph.rows[v]
        for c in range(len(masks)):
            if row & masks[c]:
                continue
            colors[v] = c
            masks[c] |= 1 << v
            self._branch(colors, masks, remaining - 1)
            masks[c] &= ~(1 << v)
            colors[v] = -1
            if self.best_k <= self.lower:
                return
        # 新颜色只在不超过当前最优时尝试
        if len(masks) + 1 < self.best_k:
            colors[v] = len(masks)
            masks.append(1 << v)
            self._branch(colors, masks, remaining - 1)
            masks.pop()
            colors[v] = -1


def chromatic_number_exact(graph: BitGraph, cap: Optional[int] = None) -> Tuple[int, Coloring]:
    """
    精确色数

    参数:
        graph: 图
        cap: 顶点数上限，默认 caps.chi_exact

    返回:
        (χ, 见证着色)

    异常:
        ScaleError: 顶点数超过上限
    """
    limit = resolve_cap("chi_exact", cap)
    if graph.n > limit:
        logger.warning(f"Graph with {graph.n} vertices exceeds chi_exact cap {limit}")
        raise ScaleError("chi_exact", limit, graph.n, "exact chromatic number")
    if graph.n == 0:
        return 0, Coloring(())

    started = time.perf_counter()
    upper = greedy_coloring(graph, GreedyStrategy.SATURATION)
    clique = greedy_clique(graph)
    solver = _ExactColorer(graph, upper, clique)
    chi, witness = solver.solve()
    logger.debug(
        f"Exact coloring: n={graph.n}, clique={len(clique)}, greedy={upper.k}, chi={chi}, "
        f"nodes={solver.nodes}, elapsed={time.perf_counter() - started:.3f}s"
    )
    return chi, witness


def clique_lower_bound(graph: BitGraph) -> int:
    return len(greedy_clique(graph))
