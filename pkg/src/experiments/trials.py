"""
单次试验模块

每个估计量对应一个单次试验函数：输入试验上下文与试验编号，返回一条可 JSON
序列化的记录。记录只含基本类型，便于跨进程传递与写入报告。

随机数约定：
    试验 i 使用 RandomStream(seed, i)。每个估计量都从子流起点重新取生成器，
    第一次消耗总是采样 S，因此同一试验里各估计量看到同一个 S；
    之后的随机消耗（例如运动引理重着色）只在该估计量内部继续推进。

规模上限：
    超过上限的计算不会中断实验，而是在记录的 "skipped" 字段写入上限名。
"""

# ============ 标准库导入 ============
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Tuple

# ============ 本地模块导入 ============
from src.core.errors import FormulaDomainError, NoTripleFound, ScaleError, UnsupportedFamilyError
from src.core.logger import logger
from src.graphs.cayley import CayleyGraph, build
from src.graphs.coloring import Coloring, GreedyStrategy, chromatic_number_exact, greedy_coloring, is_proper
from src.graphs.distinguishing import distinguishing_chromatic_number_exact, type1_distinguishing_coloring
from src.graphs.motion import motion_bound, motion_recolor, type2_threshold_check
from src.graphs.symmetry import (
    AutomorphismGroup,
    compute_automorphism_group,
    search_automorphisms,
    semidirect_elements,
    semidirect_order,
    stabilizer_of_partition,
)
from src.graphs.triples import enumerate_zero_sum_triples
from src.groups.abelian import (
    GroupFamily,
    GroupSpec,
    Subgroup,
    classify,
    enumerate_group_automorphisms,
    enumerate_subgroups,
    involution_count,
)
from src.groups.permutation import Permutation
from src.groups.sampler import RandomStream, sample_with_generator
from src.theory.bounds import size_event_threshold
from src.theory.events import coset_union_event, good_pair_event, normalizer_event


class Estimator(str, Enum):
    """实验估计量"""
    AUT_SMALL = "aut_small"
    TRIPLES = "triples"
    CHI_D = "chi_d"
    STRUCTURE_EVENTS = "structure_events"
    SIZE_CONCENTRATION = "size_concentration"


@dataclass(frozen=True)
class TrialContext:
    """
    一个参数点上的试验上下文（可 pickle，供进程池使用）

    属性:
        spec: 群
        p: 采样概率
        seed: 主种子
        caps: 显式规模上限，缺省项读取配置
        t_grid: 集中度实验的 t 网格
        recolor_attempts: 运动引理重着色的最多尝试次数
        exact_chi_d_max_n: 不超过该阶时额外计算精确 χ_D
    """
    spec: GroupSpec
    p: float
    seed: int
    caps: Tuple[Tuple[str, int], ...] = ()
    t_grid: Tuple[float, ...] = (0.5, 1.0, 1.5, 2.0, 3.0)
    recolor_attempts: int = 1000
    exact_chi_d_max_n: int = 9

    def cap(self, name: str) -> Optional[int]:
        return dict(self.caps).get(name)

    def stream(self, index: int) -> RandomStream:
        return RandomStream(self.seed, index)


@dataclass
class _Sampled:
    connection_size: int
    graph: CayleyGraph
    rng: Any


def _sample(ctx: TrialContext, index: int) -> _Sampled:
    rng = ctx.stream(index).generator()
    connection = sample_with_generator(ctx.spec, ctx.p, rng)
    return _Sampled(connection.size, build(ctx.spec, connection), rng)


def _base_record(ctx: TrialContext, estimator: Estimator, index: int, sampled: _Sampled) -> Dict[str, Any]:
    return {
        "estimator": estimator.value,
        "p": ctx.p,
        "trial": index,
        "size": sampled.connection_size,
        "connection": sampled.graph.connection.to_list(),
        "skipped": None,
    }


# ============ 按群缓存的对象（每个进程各自缓存） ============

@lru_cache(maxsize=16)
def _semidirect(spec: GroupSpec) -> AutomorphismGroup:
    return semidirect_elements(spec)


@lru_cache(maxsize=16)
def _triple_difference_sets(spec: GroupSpec) -> Tuple[frozenset, ...]:
    return tuple(t.difference_set for t in enumerate_zero_sum_triples(spec))


@lru_cache(maxsize=16)
def _subgroups(spec: GroupSpec, cap: Optional[int], max_count: Optional[int]) -> Tuple[Subgroup, ...]:
    return tuple(enumerate_subgroups(spec, cap, max_count))


@lru_cache(maxsize=16)
def _group_automorphisms(spec: GroupSpec, cap: Optional[int], max_count: Optional[int]) -> Tuple[Permutation, ...]:
    return tuple(enumerate_group_automorphisms(spec, cap, max_count))


# ============ 估计量 ============

def aut_small_trial(ctx: TrialContext, index: int) -> Dict[str, Any]:
    """Aut(Γ) 是否恰为 A ⋊ ⟨i⟩"""
    sampled = _sample(ctx, index)
    record = _base_record(ctx, Estimator.AUT_SMALL, index, sampled)
    graph = sampled.graph
    record["contains_semidirect"] = all(graph.is_automorphism(s) for s in _semidirect(ctx.spec))
    record["semidirect_order"] = semidirect_order(ctx.spec)
    try:
        order = search_automorphisms(graph, ctx.cap("aut_exact")).order
    except ScaleError as e:
        record.update(skipped=e.cap_name, aut_order=None, is_small=None)
        return record
    record["aut_order"] = order
    record["is_small"] = order == record["semidirect_order"]
    return record


def triple_trial(ctx: TrialContext, index: int) -> Dict[str, Any]:
    """独立零和三元组个数 N"""
    sampled = _sample(ctx, index)
    record = _base_record(ctx, Estimator.TRIPLES, index, sampled)
    members = sampled.graph.connection.members
    count = sum(1 for diff in _triple_difference_sets(ctx.spec) if not diff & members)
    record["independent_triples"] = count
    record["no_triple"] = count == 0
    return record


def _base_coloring(ctx: TrialContext, graph: CayleyGraph) -> Tuple[int, Coloring, bool]:
    try:
        chi, coloring = chromatic_number_exact(graph, ctx.cap("chi_exact"))
        return chi, coloring, True
    except ScaleError:
        coloring = greedy_coloring(graph, GreedyStrategy.SATURATION)
        return coloring.k, coloring, False


def _type1_path(graph: CayleyGraph, aut: AutomorphismGroup, base: Coloring,
                record: Dict[str, Any]) -> Optional[Coloring]:
    record["path"] = "type1"
    try:
        certificate = type1_distinguishing_coloring(graph, aut, base)
    except NoTripleFound:
        record["triple_found"] = False
        record["failure"] = "no_triple"
        return None
    record["triple_found"] = True
    record["triple"] = certificate.triple.to_list()
    if not certificate.verdict.is_distinguishing:
        record["failure"] = "aut_not_small" if not record["is_small"] else "not_distinguishing"
        return None
    return certificate.coloring


def _motion_path(ctx: TrialContext, graph: CayleyGraph, aut: AutomorphismGroup, base: Coloring,
                 chi: int, rng, record: Dict[str, Any]) -> Optional[Coloring]:
    record["path"] = "motion"
    class_color = base.largest_class()
    members = base.color_class(class_color)
    stabilizer = stabilizer_of_partition(aut, base, [class_color])
    bound = motion_bound(stabilizer, members, 2)
    record["motion"] = bound.to_dict()
    if bound.f < 2:
        t = 2
    else:
        try:
            check = type2_threshold_check(ctx.spec.n, involution_count(ctx.spec), chi)
        except FormulaDomainError:
            record["failure"] = "t_formula_domain"
            return None
        record["threshold"] = check.to_dict()
        t = check.t
    record["t"] = t
    result = motion_recolor(graph, base, class_color, t, aut, rng, ctx.recolor_attempts)
    if result is None:
        record["failure"] = "recolor_exhausted"
    return result


def chi_d_trial(ctx: TrialContext, index: int) -> Dict[str, Any]:
    """χ + 1 色区分着色证书"""
    sampled = _sample(ctx, index)
    record = _base_record(ctx, Estimator.CHI_D, index, sampled)
    graph = sampled.graph
    spec = ctx.spec
    record["size_event"] = sampled.connection_size <= size_event_threshold(spec.n, ctx.p)
    record["failure"] = None
    record["success"] = False

    chi, base, exact = _base_coloring(ctx, graph)
    record["chi"] = chi
    record["chi_exact"] = exact
    try:
        aut = compute_automorphism_group(graph, ctx.cap("aut_exact"), ctx.cap("max_group_order"))
    except ScaleError as e:
        record.update(skipped=e.cap_name, aut_order=None, is_small=None)
        return record
    record["aut_order"] = aut.order
    record["is_small"] = aut.order == semidirect_order(spec)

    if classify(spec) is GroupFamily.TYPE_I:
        coloring = _type1_path(graph, aut, base, record)
    else:
        coloring = _motion_path(ctx, graph, aut, base, chi, sampled.rng, record)

    if coloring is not None:
        record["success"] = is_proper(graph, coloring)
        record["colors_used"] = coloring.k
        record["within_chi_plus_one"] = coloring.k <= chi + 1
        if not record["success"]:
            record["failure"] = "improper"

    if spec.n <= ctx.exact_chi_d_max_n:
        try:
            chi_d, _ = distinguishing_chromatic_number_exact(graph, aut, ctx.cap("chi_d_exact"), ctx.cap("chi_exact"))
            record["chi_d"] = chi_d
        except ScaleError as e:
            record["chi_d"] = None
            logger.debug(f"Exact chi_D skipped on trial {index}: {e}")
    return record


def structure_event_trial(ctx: TrialContext, index: int) -> Dict[str, Any]:
    """陪集并事件、正规化事件、好对事件"""
    sampled = _sample(ctx, index)
    record = _base_record(ctx, Estimator.STRUCTURE_EVENTS, index, sampled)
    spec = ctx.spec
    connection = sampled.graph.connection
    skipped: List[str] = []

    try:
        subgroups = _subgroups(spec, ctx.cap("group_enum"), ctx.cap("max_subgroups"))
        census = coset_union_event(spec, connection, subgroups)
        record["coset_event"] = census is not None
        record["coset_witness"] = [census.h, census.k] if census is not None else None
    except ScaleError as e:
        record["coset_event"] = None
        skipped.append(e.cap_name)

    try:
        automorphisms = _group_automorphisms(spec, ctx.cap("group_enum"), ctx.cap("max_group_automorphisms"))
        phi = normalizer_event(spec, connection, automorphisms)
        record["normalizer_event"] = phi is not None
        record["normalizer_witness"] = phi.to_list() if phi is not None else None
    except ScaleError as e:
        record["normalizer_event"] = None
        skipped.append(e.cap_name)

    try:
        record["good_pair_event"] = good_pair_event(spec, connection)
    except UnsupportedFamilyError:
        record["good_pair_event"] = None
        skipped.append("family")

    record["skipped"] = ",".join(skipped) or None
    return record


def size_concentration_trial(ctx: TrialContext, index: int) -> Dict[str, Any]:
    """|S| = X′ + 2X″ 分解与各 t 的尾事件"""
    sampled = _sample(ctx, index)
    record = _base_record(ctx, Estimator.SIZE_CONCENTRATION, index, sampled)
    decomposition = sampled.graph.connection.decomposition()
    expected = expected_size(ctx.spec, ctx.p)
    record["x_prime"] = decomposition.x_prime
    record["x_double_prime"] = decomposition.x_double_prime
    record["identity_holds"] = decomposition.size == sampled.connection_size
    record["tail"] = {t_key(t): sampled.connection_size >= expected + 3 * t for t in ctx.t_grid}
    return record


ESTIMATORS: Dict[Estimator, Callable[[TrialContext, int], Dict[str, Any]]] = {
    Estimator.AUT_SMALL: aut_small_trial,
    Estimator.TRIPLES: triple_trial,
    Estimator.CHI_D: chi_d_trial,
    Estimator.STRUCTURE_EVENTS: structure_event_trial,
    Estimator.SIZE_CONCENTRATION: size_concentration_trial,
}


def t_key(t: float) -> str:
    """尾事件字典的键"""
    return repr(float(t))


def expected_size(spec: GroupSpec, p: float) -> float:
    """E|S| = (n − 1)p"""
    return (spec.n - 1) * p


def run_trial(ctx: TrialContext, estimator: Estimator, index: int) -> Dict[str, Any]:
    record = ESTIMATORS[Estimator(estimator)](ctx, index)
    if record.get("failure") or record.get("skipped"):
        logger.debug(
            f"Trial {index} ({record['estimator']}, p={ctx.p}): "
            f"failure={record.get('failure')}, skipped={record.get('skipped')}"
        )
    return record


def run_trial_chunk(ctx: TrialContext, estimator: Estimator, indices: List[int]) -> List[Dict[str, Any]]:
    """进程池任务：依次运行一组试验"""
    return [run_trial(ctx, estimator, i) for i in indices]


