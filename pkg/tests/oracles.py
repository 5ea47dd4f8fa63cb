"""
穷举参考实现

只用于测试：在很小的图上按定义逐个枚举，和正式实现的结果对拍。
"""

import itertools
from typing import Iterator, List, Optional, Sequence

from src.graphs.cayley import BitGraph


def brute_force_automorphisms(graph: BitGraph) -> List[tuple]:
    """枚举全部 n! 个置换，返回保持邻接关系的像数组（字典序）"""
    n = graph.n
    edges = set(graph.edges())
    result = []
    for images in itertools.permutations(range(n)):
        if all(tuple(sorted((images[u], images[v]))) in edges for u, v in edges):
            result.append(images)
    return result


def is_proper_labels(graph: BitGraph, labels: Sequence[int]) -> bool:
    return all(labels[u] != labels[v] for u, v in graph.edges())


def brute_force_chromatic_number(graph: BitGraph) -> int:
    n = graph.n
    if n == 0:
        return 0
    # 顶点 0 固定为颜色 0
    for k in range(1, n + 1):
        for rest in itertools.product(range(k), repeat=n - 1):
            if is_proper_labels(graph, (0,) + rest):
                return k
    return n


def _distinguishes(labels: Sequence[int], automorphisms: List[tuple]) -> bool:
    for images in automorphisms:
        if all(images[v] == v for v in range(len(labels))):
            continue
        if all(labels[images[v]] == labels[v] for v in range(len(labels))):
            return False
    return True


def _proper_partitions(graph: BitGraph, k: int) -> Iterator[List[int]]:
    """颜色取自 0..k−1 的正常着色，颜色按首次出现编号（每个划分只出现一次）"""
    n = graph.n
    edges = set(graph.edges())
    labels: List[int] = []

    def extend(v: int, top: int):
        if v == n:
            yield list(labels)
            return
        for c in range(min(top + 2, k)):
            if any(labels[u] == c and (u, v) in edges for u in range(v)):
                continue
            labels.append(c)
            yield from extend(v + 1, max(top, c))
            labels.pop()

    yield from extend(0, -1)


def brute_force_distinguishing_chromatic_number(graph: BitGraph,
                                                automorphisms: Optional[List[tuple]] = None) -> int:
    """按定义求 χ_D：逐个枚举顶点划分，找最少块数的正常且区分的着色"""
    n = graph.n
    if n == 0:
        return 0
    automorphisms = automorphisms if automorphisms is not None else brute_force_automorphisms(graph)
    for k in range(1, n + 1):
        for labels in _proper_partitions(graph, k):
            if is_proper_labels(graph, labels) and _distinguishes(labels, automorphisms):
                return k
    return n
