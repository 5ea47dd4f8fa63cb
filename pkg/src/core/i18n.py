"""
国际化 (i18n) 模块

本模块提供 CLI 文本的多语言支持，目前支持英文 (en) 和中文 (zh)。

主要功能：
1. 翻译字典管理：存储所有 CLI 文本的翻译
2. 语言切换：根据配置项 language 切换当前语言
3. 翻译查询：根据 key 获取对应语言的文本，支持占位符格式化

使用方式：
    from src.core.i18n import t
    print(t("config_saved", path="/path/to/config"))

说明：
    JSON 输出中的字段名不参与翻译，只有面向人的提示和表格标题会翻译。
"""

# ============ 标准库导入 ============
from typing import Dict

# ============ 翻译字典定义 ============

TRANSLATIONS: Dict[str, Dict[str, str]] = {
    "en": {
        "cli_desc": "Random Cayley graphs: distinguishing colorings and bound verification",
        "cli_sample_help": "Sample an inverse-closed connection set.",
        "cli_analyze_help": "Analyze one Cayley graph (chi, Aut, chi_D certificates).",
        "cli_experiment_help": "Run a Monte Carlo experiment from a JSON config.",
        "cli_bounds_help": "Evaluate a closed-form bound.",
        "cli_census_help": "Run a brute-force census (triples, overlaps, subgroups).",
        "cli_config_help": "Show or update the effective settings.",
        "error_prefix": "Error:",
        "scale_error": "Desk-scale cap exceeded:",
        "unknown_formula": "Unknown formula '{name}'. Available: {names}",
        "unknown_census": "Unknown census '{what}'. Choose triples, overlaps or subgroups.",
        "census_needs_type1": "Overlap census needs gcd(n, 6) = 1, got group {group}.",
        "written_to": "Written to {path}",
        "config_saved": "Configuration saved to {path}",
        "running_experiment": "Running {estimator} on {group} (p={p}, trials={trials})...",
        "experiment_done": "Experiment finished: {trials} trials, {estimators} estimators.",
        "bound_violation": "Bound check failed for {name} at {point}",
        "table_bounds": "Bound comparisons",
        "table_aggregates": "Aggregates",
        "table_formulas": "Registered formulas",
        "table_census": "Overlap census",
        "table_analysis": "Graph analysis",
        "col_name": "Name",
        "col_value": "Value",
        "col_params": "Parameters",
        "col_description": "Description",
        "col_estimator": "Estimator",
        "col_metric": "Metric",
        "col_point": "Point",
        "col_empirical": "Empirical",
        "col_interval": "Wilson 95%",
        "col_bound": "Bound",
        "col_pass": "Pass",
        "col_count": "Count",
        "yes": "yes",
        "no": "no",
    },
    "zh": {
        "cli_desc": "随机 Cayley 图：区分着色与概率界验证",
        "cli_sample_help": "采样一个逆封闭的连接集。",
        "cli_analyze_help": "分析单个 Cayley 图（色数、自同构群、区分色数证书）。",
        "cli_experiment_help": "按 JSON 配置运行蒙特卡洛实验。",
        "cli_bounds_help": "计算闭式概率界。",
        "cli_census_help": "运行穷举普查（三元组、重叠、子群）。",
        "cli_config_help": "查看或修改生效配置。",
        "error_prefix": "错误:",
        "scale_error": "超出桌面规模上限:",
        "unknown_formula": "未知公式 '{name}'。可用公式: {names}",
        "unknown_census": "未知普查类型 '{what}'。可选 triples、overlaps、subgroups。",
        "census_needs_type1": "差集重叠普查要求 gcd(n, 6) = 1，当前群为 {group}。",
        "written_to": "已写入 {path}",
        "config_saved": "配置已保存至 {path}",
        "running_experiment": "正在 {group} 上运行 {estimator} (p={p}, 试验数={trials})...",
        "experiment_done": "实验完成：{trials} 次试验，{estimators} 个估计量。",
        "bound_violation": "{name} 在 {point} 处未通过界检验",
        "table_bounds": "界比较",
        "table_aggregates": "汇总",
        "table_formulas": "已注册公式",
        "table_census": "重叠普查",
        "table_analysis": "图分析",
        "col_name": "名称",
        "col_value": "取值",
        "col_params": "参数",
        "col_description": "说明",
        "col_estimator": "估计量",
        "col_metric": "指标",
        "col_point": "参数点",
        "col_empirical": "经验值",
        "col_interval": "Wilson 95% 区间",
        "col_bound": "理论界",
        "col_pass": "通过",
        "col_count": "计数",
        "yes": "是",
        "no": "否",
    },
}


# ============ 全局语言设置 ============

# 当前语言，默认为英文
_CURRENT_LANG = "en"


# ============ 语言切换函数 ============

def set_language(lang: str):
    """
    设置当前语言

    参数:
        lang: 语言代码 ("en" 或 "zh")

    注意:
        - 如果传入无效语言代码，不会切换
    """
    global _CURRENT_LANG
    if lang in TRANSLATIONS:
        _CURRENT_LANG = lang


def get_language() -> str:
    return _CURRENT_LANG


# ============ 翻译查询函数 ============

def get_text(key: str, **kwargs) -> str:
    """
    根据 key 获取翻译文本

    参数:
        key: 翻译文本的 key
        **kwargs: 格式化参数，用于替换文本中的占位符

    返回:
        翻译后的文本字符串；未知 key 原样返回
    """
    lang_dict = TRANSLATIONS.get(_CURRENT_LANG, TRANSLATIONS["en"])
    text = lang_dict.get(key, key)
    if kwargs:
        return text.format(**kwargs)
    return text


def t(key: str, **kwargs) -> str:
    """翻译函数的简写别名"""
    return get_text(key, **kwargs)
