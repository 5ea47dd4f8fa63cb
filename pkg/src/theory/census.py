"""
重叠普查模块

对 gcd(n, 6) = 1 的群穷举所有有序对 (T, U)，T ≠ U，统计差集重叠
|D(T) ∩ D(U)|，并据此精确计算 Janson 的 Δ：

    Δ_exact(q) = Σ_T Σ_{U ≠ T, D(T)∩D(U) ≠ ∅} q^{|D(T) ∪ D(U)| 中的 {d, −d} 对数}

主要功能：
1. overlap_census：每个 T 的 count₂ / count₄ / count₆ 及重叠为 6 的伙伴
2. delta_exact：由普查结果计算 Δ_exact
3. 三元组与子群普查（CLI census 命令使用）
"""

# ============ 标准库导入 ============
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional

# ============ 第三方库导入 ============
import numpy as np
from mpmath import mp, mpf

# ============ 本地模块导入 ============
from src.core.config import resolve_cap
from src.core.errors import PreconditionError, ScaleError
from src.core.logger import logger
from src.graphs.triples import ZeroSumTriple, enumerate_zero_sum_triples
from src.groups.abelian import GroupSpec, cosets, enumerate_subgroups, parse_group_spec
from src.theory.bounds import PRECISION_DPS
from src.theory.registry import registry

# 有序对分块计算的行数
CHUNK_ROWS = 512


@dataclass
class OverlapCensus:
    """
    重叠普查结果

    属性:
        spec: 群
        triples: 𝒯（枚举顺序）
        overlap_counts: |𝒯| × 7 矩阵，第 k 列为与 T 重叠 k 个元素的 U 个数（k ≥ 1）
        partners: 每个 T 的重叠为 6 的伙伴下标列表
        union_pairs: {并集 {d,−d} 对数: 有序对个数}
    """
    spec: GroupSpec
    triples: List[ZeroSumTriple]
    overlap_counts: np.ndarray
    partners: List[List[int]]
    union_pairs: Dict[int, int] = field(default_factory=dict)

    def count(self, index: int, overlap: int) -> int:
        return int(self.overlap_counts[index, overlap])

    def counts_for(self, index: int) -> Dict[int, int]:
        return {k: self.count(index, k) for k in (2, 4, 6)}

    def summary(self) -> Dict[str, Any]:
        counts = self.overlap_counts
        n = self.spec.n
        empty = len(self.triples) == 0
        negation_partner = all(
            self.partners[i] == [self.index_of(t.negated())] for i, t in enumerate(self.triples)
        )
        return {
            "triples": len(self.triples),
            "max_count2": 0 if empty else int(counts[:, 2].max()),
            "max_count4": 0 if empty else int(counts[:, 4].max()),
            "min_count6": 0 if empty else int(counts[:, 6].min()),
            "max_count6": 0 if empty else int(counts[:, 6].max()),
            "count6_partner_is_negation": negation_partner,
            "count2_plus_twice_count4": sorted(set(int(v) for v in counts[:, 2] + 2 * counts[:, 4])),
            "expected_identity_value": 3 * n - 21,
            "count2_limit": 3 * (n - 1),
            "union_pairs": {str(k): v for k, v in sorted(self.union_pairs.items())},
        }

    @cached_property
    def _positions(self) -> Dict[tuple, int]:
        return {t.elements: i for i, t in enumerate(self.triples)}

    def index_of(self, triple: ZeroSumTriple) -> int:
        return self._positions[triple.elements]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "group": str(self.spec),
            "summary": self.summary(),
            "per_triple": [
                {"triple": t.to_list(), **{f"count{k}": v for k, v in self.counts_for(i).items()},
                 "partners": [self.triples[j].to_list() for j in self.partners[i]]}
                for i, t in enumerate(self.triples)
            ],
        }


def _require_type1(spec: GroupSpec):
    if math.gcd(spec.n, 6) != 1:
        raise PreconditionError(f"overlap census needs gcd(n, 6) = 1, got n={spec.n}")


def _census_cap(spec: GroupSpec, cap: Optional[int]):
    limit = resolve_cap("census", cap)
    if spec.n > limit:
        logger.warning(f"Group {spec} (n={spec.n}) exceeds census cap {limit}")
        raise ScaleError("census", limit, spec.n, "overlap census")


def overlap_census(spec: GroupSpec, cap: Optional[int] = None) -> OverlapCensus:
    """
    穷举重叠普查

    异常:
        PreconditionError: gcd(n, 6) ≠ 1
        ScaleError: 群阶超过 caps.census
    """
    _require_type1(spec)
    _census_cap(spec, cap)
    started = time.perf_counter()

    triples = enumerate_zero_sum_triples(spec)
    size = len(triples)
    diff = np.zeros((size, spec.n), dtype=np.int16)
    pairs = np.zeros((size, spec.n), dtype=np.int16)
    for i, triple in enumerate(triples):
        diff[i, list(triple.difference_set)] = 1
        pairs[i, list(triple.difference_pairs)] = 1
    pair_sizes = pairs.sum(axis=1).astype(np.int32)
    diff = diff.astype(np.int32)
    pairs = pairs.astype(np.int32)

    counts = np.zeros((size, 7), dtype=np.int64)
    partners: List[List[int]] = [[] for _ in range(size)]
    union_pairs: Counter = Counter()
    for start in range(0, size, CHUNK_ROWS):
        stop = min(start + CHUNK_ROWS, size)
        overlap = diff[start:stop] @ diff.T
        shared_pairs = pairs[start:stop] @ pairs.T
        union = pair_sizes[start:stop, None] + pair_sizes[None, :] - shared_pairs
        for row in range(stop - start):
            i = start + row
            overlap[row, i] = 0
            dependent = overlap[row] > 0
            counts[i] = np.bincount(overlap[row][dependent], minlength=7)[:7]
            partners[i] = [int(j) for j in np.flatnonzero(overlap[row] == 6)]
            union_pairs.update(int(u) for u in union[row][dependent])

    logger.debug(
        f"Overlap census on {spec}: {size} triples, {size * (size - 1)} ordered pairs, "
        f"elapsed={time.perf_counter() - started:.3f}s"
    )
    return OverlapCensus(spec, triples, counts, partners, dict(union_pairs))


def delta_exact_from_census(census: OverlapCensus, q: float):
    with mp.workdps(PRECISION_DPS):
        q = mpf(q)
        return mp.fsum(count * q ** union for union, count in census.union_pairs.items())


@registry.register
def delta_exact(group: str, q: float):
    """Exact Janson Delta from the overlap census of a gcd(n,6)=1 group"""
    spec = parse_group_spec(group)
    return delta_exact_from_census(overlap_census(spec), q)


def triple_census(spec: GroupSpec) -> Dict[str, Any]:
    triples = enumerate_zero_sum_triples(spec)
    result: Dict[str, Any] = {"group": str(spec), "n": spec.n, "count": len(triples)}
    if math.gcd(spec.n, 6) == 1:
        result["formula"] = (spec.n - 1) * (spec.n - 5) // 6
    result["triples"] = [t.to_list() for t in triples]
    return result


def subgroup_census(spec: GroupSpec, cap: Optional[int] = None) -> Dict[str, Any]:
    subgroups = enumerate_subgroups(spec, cap)
    return {
        "group": str(spec),
        "n": spec.n,
        "count": len(subgroups),
        "subgroups": [
            {"order": h.order, "index": spec.n // h.order, "elements": h.to_list(),
             "cosets": len(cosets(h))}
            for h in subgroups
        ],
    }
