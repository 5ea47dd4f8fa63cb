"""
cayley-dist 主入口模块

本模块是命令行入口，负责：
1. 构建 CLI 命令行界面（使用 Typer 框架）
2. 把领域异常映射为退出码：2 参数/配置错误，3 超出规模上限，4 运行错误
3. JSON 结果写到标准输出或 --out 文件，表格写到标准错误

子命令：
    sample      采样连接集
    analyze     分析单个 Cayley 图
    experiment  运行蒙特卡洛实验
    bounds      计算闭式概率界
    census      穷举普查
    config      查看或修改配置

依赖模块：
    - typer: CLI 框架
    - rich: 终端表格输出（见 src.core.ui）
"""

# ============ 标准库导入 ============
import json
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, List, Optional

# ============ 第三方库导入 ============
import typer
import yaml
from pydantic import ValidationError

# ============ 本地模块导入 ============
from src import __version__  # 项目版本号
from src.core import config as core_config  # 配置文件路径在调用时读取
from src.core.config import get_settings, load_config, save_config
from src.core.errors import ConfigError, NoTripleFound, ParameterError, ScaleError
from src.core.i18n import t  # 国际化翻译函数
from src.core.logger import setup_logging  # 日志系统初始化
from src.core import ui

# ============ 日志系统初始化 ============
logger = setup_logging()

# ============ 预加载配置 ============
# 加载配置的同时设置界面语言，帮助文本才能按语言显示
get_settings()

# ============ 应用初始化 ============
app = typer.Typer(help=t("cli_desc"), no_args_is_help=True, add_completion=False)

# 退出码
EXIT_PARAMETER = 2
EXIT_SCALE = 3
EXIT_RUNTIME = 4


@contextmanager
def handled_errors():
    """把领域异常转换为退出码"""
    try:
        yield
    except (typer.Exit, typer.Abort):
        raise
    except ScaleError as e:
        ui.print_error(str(e), scale=True)
        raise typer.Exit(EXIT_SCALE)
    except ParameterError as e:
        ui.print_error(str(e))
        raise typer.Exit(EXIT_PARAMETER)
    except Exception as e:
        logger.exception(f"Command failed: {e}")
        ui.print_error(f"{type(e).__name__}: {e}")
        raise typer.Exit(EXIT_RUNTIME)


def emit(payload: Any, out: Optional[Path]):
    """JSON 写到文件或标准输出"""
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    if out is None:
        typer.echo(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    ui.print_info(t("written_to", path=out))


@app.callback()
def main():
    # 只用于启用子命令分组，帮助文本取自 Typer(help=...)
    pass


@app.command("version")
def version():
    """Print the version."""
    typer.echo(__version__)


# ============ sample ============

@app.command("sample", help=t("cli_sample_help"))
def sample(
    group: str = typer.Option(..., "--group", help="Group string, e.g. '35' or '2,2,9'."),
    p: float = typer.Option(..., "--p", help="Selection probability in [0, 1]."),
    seed: int = typer.Option(..., "--seed", help="Master seed (non-negative 64-bit)."),
    stream: int = typer.Option(0, "--stream", help="Substream index."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write JSON here instead of stdout."),
):
    from src.groups.abelian import parse_group_spec
    from src.groups.sampler import RandomStream, sample_connection_set

    with handled_errors():
        spec = parse_group_spec(group)
        connection = sample_connection_set(spec, p, RandomStream(seed, stream))
        decomposition = connection.decomposition()
        emit({
            "group": str(spec),
            "p": p,
            "seed": seed,
            "stream": stream,
            "members": connection.to_list(),
            "size": connection.size,
            "decomposition": {
                "x_prime": decomposition.x_prime,
                "x_double_prime": decomposition.x_double_prime,
            },
        }, out)


# ============ analyze ============

def _parse_members(raw: str) -> List[int]:
    """--set 取值：JSON 文件路径（列表或含 members 的对象）或逗号分隔的下标"""
    path = Path(raw)
    if path.is_file():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ParameterError(f"{path} is not valid JSON: {e}") from e
        if isinstance(data, dict):
            data = data.get("members", [])
        if not isinstance(data, list):
            raise ParameterError(f"{path} must hold a list of indices or an object with 'members'")
        return [int(x) for x in data]
    text = raw.strip().strip("[]")
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise ParameterError(f"malformed connection set '{raw}': {e}") from e


def analyze_graph(group: str, members: List[int], exact_aut: bool = False, exact_chi: bool = False,
                  exact_chid: bool = False, seed: int = 0) -> Dict[str, Any]:
    """
    单图分析

    返回的字典记录每个结果的来源（精确 / 贪心 / 仅 A ⋊ ⟨i⟩）。
    """
    from src.graphs.cayley import build
    from src.graphs.coloring import chromatic_number_exact, clique_lower_bound, greedy_coloring, is_proper
    from src.graphs.distinguishing import distinguishing_chromatic_number_exact, type1_distinguishing_coloring
    from src.graphs.motion import motion_bound, motion_recolor, type2_threshold_check
    from src.graphs.symmetry import compute_automorphism_group, semidirect_elements, semidirect_order, stabilizer_of_partition
    from src.groups.abelian import GroupFamily, classify, involution_count, parse_group_spec
    from src.groups.sampler import ConnectionSet, RandomStream

    spec = parse_group_spec(group)
    connection = ConnectionSet.from_indices(spec, members)
    graph = build(spec, connection)
    family = classify(spec)
    result: Dict[str, Any] = {
        "group": str(spec),
        "n": spec.n,
        "family": family.value,
        "connection": connection.to_list(),
        "degree": graph.regular_degree,
        "edges": graph.edge_count(),
        "caps": get_settings().caps.model_dump(),
    }

    if exact_chi:
        chi, base = chromatic_number_exact(graph)
        result["chi"] = chi
        result["chi_method"] = "exact"
    else:
        base = greedy_coloring(graph)
        chi = base.k
        result["chi"] = chi
        result["chi_method"] = "greedy"
        result["chi_lower"] = clique_lower_bound(graph)
    result["coloring"] = base.to_list()

    result["semidirect_order"] = semidirect_order(spec)
    if exact_aut or exact_chid:
        aut = compute_automorphism_group(graph)
        result["aut_order"] = aut.order
        result["is_small"] = aut.order == semidirect_order(spec)
        result["aut_source"] = "exact"
    else:
        aut = semidirect_elements(spec)
        result["aut_order"] = None
        result["is_small"] = None
        result["aut_source"] = "semidirect"

    if family is GroupFamily.TYPE_I:
        try:
            certificate = type1_distinguishing_coloring(graph, aut, base)
            result["certificate"] = {"path": "type1", "proper": is_proper(graph, certificate.coloring),
                                     **certificate.to_dict()}
        except NoTripleFound as e:
            result["certificate"] = {"path": "type1", "error": "NoTripleFound", "message": str(e)}
    else:
        class_color = base.largest_class()
        stabilizer = stabilizer_of_partition(aut, base, [class_color])
        bound = motion_bound(stabilizer, base.color_class(class_color), 2)
        motion: Dict[str, Any] = {"path": "motion", "motion": bound.to_dict()}
        t_value = 2
        if bound.f >= 2 and spec.n > involution_count(spec) * chi:
            check = type2_threshold_check(spec.n, involution_count(spec), chi)
            motion["threshold"] = check.to_dict()
            t_value = check.t
        motion["t"] = t_value
        recolored = motion_recolor(graph, base, class_color, t_value, aut, RandomStream(seed))
        motion["coloring"] = recolored.to_list() if recolored is not None else None
        motion["colors_used"] = recolored.k if recolored is not None else None
        motion["proper"] = is_proper(graph, recolored) if recolored is not None else None
        result["certificate"] = motion

    if exact_chid:
        chi_d, witness = distinguishing_chromatic_number_exact(graph, aut)
        result["chi_d"] = chi_d
        result["chi_d_coloring"] = witness.to_list()
    return result


@app.command("analyze", help=t("cli_analyze_help"))
def analyze(
    group: str = typer.Option(..., "--group", help="Group string."),
    members: str = typer.Option(..., "--set", help="Connection set: JSON file or comma-separated indices."),
    exact_aut: bool = typer.Option(False, "--exact-aut", help="Compute Aut(G) exactly."),
    exact_chi: bool = typer.Option(False, "--exact-chi", help="Compute the chromatic number exactly."),
    exact_chid: bool = typer.Option(False, "--exact-chid", help="Compute chi_D exactly (implies --exact-aut)."),
    seed: int = typer.Option(0, "--seed", help="Seed for the motion recoloring."),
    export_dimacs: Optional[Path] = typer.Option(None, "--export-dimacs", help="Write the graph in DIMACS format."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write JSON here instead of stdout."),
):
    with handled_errors():
        analysis = analyze_graph(group, _parse_members(members), exact_aut, exact_chi, exact_chid, seed)
        if export_dimacs is not None:
            from src.graphs.cayley import build
            from src.groups.abelian import parse_group_spec
            from src.groups.sampler import ConnectionSet

            spec = parse_group_spec(group)
            graph = build(spec, ConnectionSet.from_indices(spec, analysis["connection"]))
            export_dimacs.write_text(graph.to_dimacs(), encoding="utf-8")
            analysis["dimacs"] = str(export_dimacs)
        ui.print_analysis(analysis)
        emit(analysis, out)


# ============ experiment ============

@app.command("experiment", help=t("cli_experiment_help"))
def experiment(
    config_path: Path = typer.Option(..., "--config", help="JSON experiment config."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the JSON report here instead of stdout."),
    csv_path: Optional[Path] = typer.Option(None, "--csv", help="Write a CSV summary."),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker processes (0 = all cores, 1 = serial)."),
):
    from src.experiments.config import load_experiment_config
    from src.experiments.report import write_csv
    from src.experiments.runner import run_experiment

    with handled_errors():
        config = load_experiment_config(config_path)
        if threads is not None:
            config = config.model_copy(update={"threads": threads})
        for estimator in config.estimators:
            ui.print_info(t("running_experiment", estimator=estimator.value, group=config.group,
                            p=config.p if config.p is not None else config.p_grid, trials=config.trials))
        report = run_experiment(config)
        ui.print_aggregates(report.aggregates)
        ui.print_bound_checks(report.bounds)
        for row in report.violations():
            ui.print_info(t("bound_violation", name=row["name"], point=f"{row['estimator']} p={row['p']}"))
        ui.print_info(t("experiment_done", trials=len(report.trials), estimators=len(config.estimators)))
        emit(report.to_dict(), out)
        if csv_path is not None:
            write_csv(report, csv_path)
            ui.print_info(t("written_to", path=csv_path))


# ============ bounds ============

@app.command("bounds", help=t("cli_bounds_help"))
def bounds(
    formula: Optional[str] = typer.Option(None, "--formula", help="Formula name."),
    params: str = typer.Option("", "--params", help="Parameters as k=v,k=v."),
    as_json: bool = typer.Option(False, "--json", help="Print the JSON report."),
    list_formulas: bool = typer.Option(False, "--list", help="List the registered formulas."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write JSON here instead of stdout."),
):
    from src.theory.registry import default_registry, parse_params

    with handled_errors():
        registry = default_registry()
        if list_formulas or formula is None:
            ui.print_formulas(registry.schemas)
            if as_json or out is not None:
                emit(registry.schemas, out)
            return
        if registry.get(formula) is None:
            raise ParameterError(t("unknown_formula", name=formula, names=", ".join(registry.names())))
        report = registry.evaluate(formula, parse_params(params)).to_dict()
        ui.print_bound_report(report)
        if as_json or out is not None:
            emit(report, out)
        else:
            typer.echo(report["value_str"])


# ============ census ============

CENSUS_KINDS = ("triples", "overlaps", "subgroups")


@app.command("census", help=t("cli_census_help"))
def census(
    group: str = typer.Option(..., "--group", help="Group string."),
    what: str = typer.Option(..., "--what", help="triples | overlaps | subgroups"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write JSON here instead of stdout."),
):
    from src.groups.abelian import GroupFamily, classify, parse_group_spec
    from src.theory.census import overlap_census, subgroup_census, triple_census

    with handled_errors():
        if what not in CENSUS_KINDS:
            raise ParameterError(t("unknown_census", what=what))
        spec = parse_group_spec(group)
        if what == "overlaps" and classify(spec) is not GroupFamily.TYPE_I:
            raise ParameterError(t("census_needs_type1", group=group))
        if what == "triples":
            payload = triple_census(spec)
            ui.print_census_summary({k: v for k, v in payload.items() if k != "triples"})
        elif what == "overlaps":
            result = overlap_census(spec)
            payload = result.to_dict()
            ui.print_census_summary(payload["summary"])
        else:
            payload = subgroup_census(spec)
            ui.print_census_summary({"group": payload["group"], "count": payload["count"]})
        emit(payload, out)


# ============ config ============

def _parse_assignment(text: str) -> Dict[str, Any]:
    if "=" not in text:
        raise ConfigError(f"expected key=value, got '{text}'")
    key, raw = text.split("=", 1)
    return {key.strip(): yaml.safe_load(raw)}


@app.command("config", help=t("cli_config_help"))
def config(
    assignments: Optional[List[str]] = typer.Option(None, "--set", help="Update a setting, e.g. caps.aut_exact=80."),
):
    with handled_errors():
        if assignments:
            updates: Dict[str, Any] = {}
            for item in assignments:
                updates.update(_parse_assignment(item))
            try:
                path = save_config(updates)
            except ValidationError as e:
                raise ConfigError(f"invalid setting: {e}") from e
            ui.print_info(t("config_saved", path=path))
        emit({
            "settings": load_config(),
            "sources": {
                "user": {"path": str(core_config.CONFIG_FILE), "exists": core_config.CONFIG_FILE.exists()},
                "global": {"path": str(core_config.GLOBAL_CONFIG_FILE), "exists": core_config.GLOBAL_CONFIG_FILE.exists()},
                "env_prefix": "CAYDIST_",
            },
        }, None)


# ============ 程序入口 ============
if __name__ == "__main__":
    app()
