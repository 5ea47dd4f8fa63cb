"""
结构事件判定模块

三类结构事件的精确判定，作为蒙特卡洛实验的估计对象：

1. 陪集并事件：存在 1 < H ≤ K < A 使 S∖K 是若干 H-陪集之并（含空并）
2. 正规化事件：存在 φ ∈ Aut(A)∖{1, i} 使 φ(S) = S
3. 好对事件：Type II 恒为假；Type I 当且仅当 A 循环且 S = ∅ 或 S = A∖{0}

扫描顺序：
    子群按 (阶, 元素下标) 排序，(H, K) 对按 (|H|, |K|, 元素集合) 的字典序扫描。
"""

# ============ 标准库导入 ============
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

# ============ 第三方库导入 ============
from mpmath import mp, mpf

# ============ 本地模块导入 ============
from src.core.config import resolve_cap
from src.core.errors import ScaleError, UnsupportedFamilyError
from src.core.logger import logger
from src.groups.abelian import (
    GroupFamily,
    GroupSpec,
    Subgroup,
    classify,
    enumerate_subgroups,
    involution_set,
    is_cyclic,
    iter_group_automorphisms,
    parse_group_spec,
)
from src.groups.permutation import Permutation
from src.groups.sampler import ConnectionSet, trial_count
from src.theory.bounds import PRECISION_DPS
from src.theory.registry import registry


@dataclass(frozen=True)
class CosetEventCensus:
    """
    陪集并事件的见证与计数

    属性:
        h, k: |H|, |K|
        j: |K ∩ O₂|
        i: |{a ∈ A∖K : 2a ∈ H}|
        l: H 中 2 阶元素个数
        subgroup_h, subgroup_k: 见证子群
        cosets: 组成 S∖K 的 H-陪集
    """
    h: int
    k: int
    j: int
    i: int
    l: int
    subgroup_h: Subgroup
    subgroup_k: Subgroup
    cosets: List[frozenset]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h": self.h,
            "k": self.k,
            "j": self.j,
            "i": self.i,
            "l": self.l,
            "H": self.subgroup_h.to_list(),
            "K": self.subgroup_k.to_list(),
            "cosets": [sorted(c) for c in self.cosets],
        }


def _coset_decomposition(spec: GroupSpec, remainder: frozenset, subgroup: Subgroup) -> Optional[List[frozenset]]:
    """remainder 是 H-陪集之并时返回这些陪集，否则返回 None"""
    add_table = spec.add_table
    members = list(subgroup.elements)
    pending = set(remainder)
    result = []
    while pending:
        a = min(pending)
        coset = frozenset(int(v) for v in add_table[a, members])
        if not coset <= pending:
            return None
        pending -= coset
        result.append(coset)
    return result


def _census(spec: GroupSpec, h: Subgroup, k: Subgroup, pieces: List[frozenset]) -> CosetEventCensus:
    involutions = involution_set(spec)
    doubles = spec.double_table
    outside = [a for a in range(spec.n) if a not in k.elements]
    return CosetEventCensus(
        h=h.order,
        k=k.order,
        j=len(k.elements & involutions),
        i=sum(1 for a in outside if int(doubles[a]) in h.elements),
        l=len((h.elements & involutions) - {0}),
        subgroup_h=h,
        subgroup_k=k,
        cosets=pieces,
    )


def coset_union_event(spec: GroupSpec, connection: ConnectionSet,
                      subgroups: Optional[Sequence[Subgroup]] = None,
                      cap: Optional[int] = None) -> Optional[CosetEventCensus]:
    """
    陪集并事件

    参数:
        spec: 群
        connection: 连接集 S
        subgroups: 预先枚举的子群（缺省时现算）

    返回:
        第一个见证 (H, K) 的计数；事件不成立时返回 None

    异常:
        ScaleError: 子群枚举超过上限
    """
    connection.require_spec(spec)
    if subgroups is None:
        subgroups = enumerate_subgroups(spec, cap)
    proper = [g for g in subgroups if 1 < g.order < spec.n]
    members = connection.members
    pairs = sorted(
        ((h, k) for h in proper for k in proper if h.elements <= k.elements),
        key=lambda pair: (pair[0].order, pair[1].order, pair[0].sort_key()[1], pair[1].sort_key()[1]),
    )
    for h, k in pairs:
        pieces = _coset_decomposition(spec, members - k.elements, h)
        if pieces is not None:
            return _census(spec, h, k, pieces)
    return None


def _is_inversion(spec: GroupSpec, phi: Permutation) -> bool:
    neg_table = spec.neg_table
    return all(int(neg_table[x]) == y for x, y in enumerate(phi.images))


def normalizer_event(spec: GroupSpec, connection: ConnectionSet,
                     automorphisms: Optional[Sequence[Permutation]] = None,
                     cap: Optional[int] = None, max_count: Optional[int] = None) -> Optional[Permutation]:
    """
    正规化事件

    惰性枚举 Aut(A)，返回第一个既非恒等也非反演、且满足 φ(S) = S 的 φ。

    异常:
        ScaleError: 群阶超过 caps.group_enum，或枚举个数超过 caps.max_group_automorphisms
    """
    connection.require_spec(spec)
    members = connection.members
    stream = automorphisms if automorphisms is not None else iter_group_automorphisms(spec, cap)
    limit = resolve_cap("max_group_automorphisms", max_count)
    for seen, phi in enumerate(stream, start=1):
        if seen > limit:
            logger.warning(f"Normalizer scan on {spec} passed {limit} automorphisms")
            raise ScaleError("max_group_automorphisms", limit, None, f"Aut({spec}) scan")
        if phi.is_identity() or _is_inversion(spec, phi):
            continue
        if phi.image_of_set(members) == members:
            return phi
    return None


def good_pair_event(spec: GroupSpec, connection: ConnectionSet) -> bool:
    """
    好对事件

    异常:
        UnsupportedFamilyError: 群族为 Other
    """
    connection.require_spec(spec)
    family = classify(spec)
    if family is GroupFamily.TYPE_II:
        return False
    if family is GroupFamily.TYPE_I:
        return is_cyclic(spec) and (connection.is_empty() or connection.is_full())
    raise UnsupportedFamilyError(f"good-pair event is defined for TypeI/TypeII groups, {spec} is {family.value}")


@registry.register
def good_pair_probability(group: str, p: float):
    """p^k + q^k for cyclic TypeI groups (k independent draws), 0 for other TypeI/TypeII groups"""
    spec = parse_group_spec(group)
    family = classify(spec)
    if family is GroupFamily.OTHER:
        raise UnsupportedFamilyError(f"good-pair event is undefined on {spec} (family Other)")
    if family is GroupFamily.TYPE_II or not is_cyclic(spec):
        return mpf(0)
    draws = trial_count(spec)
    with mp.workdps(PRECISION_DPS):
        p = mpf(p)
        return p ** draws + (1 - p) ** draws
