"""
用户界面 (UI) 渲染模块

本模块负责 CLI 的表格输出，使用 Rich 库渲染到标准错误流，
标准输出只留给 JSON 结果，便于管道处理。

主要功能：
1. 公式列表与公式求值表格
2. 实验汇总与界比较表格
3. 重叠普查摘要
4. 单图分析摘要

视觉风格：
- 主色调：青色 (cyan)、蓝色 (blue)
- 强调色：黄色 (yellow)、绿色 (green)，未通过的检验用红色 (red)
"""

# ============ 标准库导入 ============
from typing import Any, Dict, List

# ============ 第三方库导入 ============
from rich import box
from rich.console import Console
from rich.table import Table

# ============ 本地模块导入 ============
from src.core.i18n import t  # 国际化翻译函数

# 创建 Rich 控制台对象（输出到 stderr）
console = Console(stderr=True)


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return t("yes") if value else t("no")
    if isinstance(value, float):
        return f"{value:.6g}"
    if value is None:
        return "-"
    return str(value)


def _table(title: str) -> Table:
    return Table(title=f"[bold cyan]{title}[/bold cyan]", box=box.SIMPLE_HEAVY, header_style="bold blue")


def print_formulas(schemas: List[Dict[str, Any]]):
    """打印已注册公式及其参数"""
    table = _table(t("table_formulas"))
    table.add_column(t("col_name"), style="bold green")
    table.add_column(t("col_params"), style="yellow")
    table.add_column(t("col_description"), style="white")
    for schema in schemas:
        props = schema["parameters"]["properties"]
        params = ", ".join(f"{name}: {spec['type']}" for name, spec in props.items())
        table.add_row(schema["name"], params, schema["description"])
    console.print(table)


def print_bound_report(report: Dict[str, Any]):
    """打印单个公式求值结果"""
    table = _table(t("table_bounds"))
    table.add_column(t("col_name"), style="bold green")
    table.add_column(t("col_params"), style="yellow")
    table.add_column(t("col_value"), style="bold white")
    table.add_column(t("col_pass"))
    params = ", ".join(f"{k}={v}" for k, v in report["parameters"].items())
    table.add_row(report["name"], params, report["value_str"], _fmt(report["applicable"]))
    console.print(table)


def print_aggregates(aggregates: List[Dict[str, Any]]):
    table = _table(t("table_aggregates"))
    table.add_column(t("col_estimator"), style="bold green")
    table.add_column("p", style="yellow")
    table.add_column(t("col_metric"))
    table.add_column(t("col_value"), style="bold white")
    table.add_column(t("col_interval"), style="cyan")
    table.add_column(t("col_count"))
    for row in aggregates:
        interval = row.get("interval")
        shown = f"[{interval[0]:.4f}, {interval[1]:.4f}]" if interval else (
            f"± {row['se']:.4g}" if "se" in row else "-")
        table.add_row(row["estimator"], _fmt(row["p"]), row["metric"], _fmt(row["value"]),
                      shown, _fmt(row.get("trials")))
    console.print(table)


def print_bound_checks(bounds: List[Dict[str, Any]]):
    """打印经验值与闭式界的比较，未通过的行标红"""
    if not bounds:
        return
    table = _table(t("table_bounds"))
    table.add_column(t("col_estimator"), style="bold green")
    table.add_column("p", style="yellow")
    table.add_column(t("col_name"))
    table.add_column(t("col_point"))
    table.add_column(t("col_empirical"), style="bold white")
    table.add_column(t("col_bound"), style="cyan")
    table.add_column(t("col_pass"))
    for row in bounds:
        point = ", ".join(f"{k}={_fmt(v)}" for k, v in row["point"].items()) or "-"
        verdict = f"[green]{t('yes')}[/green]" if row["pass"] else f"[bold red]{t('no')}[/bold red]"
        if not row["applicable"]:
            verdict += " *"
        table.add_row(row["estimator"], _fmt(row["p"]), row["name"], point,
                      _fmt(row["empirical"]), _fmt(row["bound"]), verdict)
    console.print(table)


def print_census_summary(summary: Dict[str, Any]):
    table = _table(t("table_census"))
    table.add_column(t("col_name"), style="bold green")
    table.add_column(t("col_value"), style="bold white")
    for key, value in summary.items():
        if isinstance(value, dict):
            value = ", ".join(f"{k}: {v}" for k, v in value.items())
        elif isinstance(value, list):
            value = ", ".join(str(v) for v in value)
        table.add_row(key, _fmt(value))
    console.print(table)


def print_analysis(analysis: Dict[str, Any]):
    """打印单图分析的标量字段"""
    table = _table(t("table_analysis"))
    table.add_column(t("col_name"), style="bold green")
    table.add_column(t("col_value"), style="bold white")
    for key, value in analysis.items():
        if isinstance(value, (dict, list)):
            continue
        table.add_row(key, _fmt(value))
    console.print(table)


def print_error(message: str, scale: bool = False):
    prefix = t("scale_error") if scale else t("error_prefix")
    console.print(f"[bold red]{prefix}[/bold red] {message}")


def print_info(message: str):
    console.print(f"[cyan]{message}[/cyan]")
