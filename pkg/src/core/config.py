"""
配置管理模块

本模块负责 cayley-dist 的配置管理，包括：
1. 加载和保存用户配置（桌面规模上限、实验默认值、界面语言）
2. 支持全局配置（系统级）、用户配置（个人级）与环境变量覆盖
3. 将分层配置交给 pydantic-settings 校验

配置文件位置：
    - 用户配置: ~/.cayley_dist/config.yaml
    - 全局配置: /opt/cayley_dist/global_config.yaml

优先级（高 → 低）：
    显式参数 > 环境变量 (CAYDIST_ 前缀, 嵌套用 "__") > 用户配置 > 全局配置 > 默认值

配置结构：
    - language: 界面语言 (en/zh)
    - caps: 各类穷举计算的规模上限
    - experiment: 蒙特卡洛实验的默认参数
"""

# ============ 标准库导入 ============
import tempfile
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Tuple, Type

# ============ 第三方库导入 ============
import yaml
from pydantic import BaseModel, Field
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    YamlConfigSettingsSource,
)

# ============ 本地模块导入 ============
from src.core.i18n import set_language  # 设置界面语言


# ============ 配置目录和文件路径 ============

# 配置目录：优先使用用户主目录下的 .cayley_dist 文件夹
# 如果没有写权限（如沙盒环境），则使用临时目录
try:
    CONFIG_DIR = Path.home() / ".cayley_dist"
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)
except (PermissionError, OSError):
    CONFIG_DIR = Path(tempfile.gettempdir()) / "cayley_dist"
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)

# 用户配置文件路径
CONFIG_FILE = CONFIG_DIR / "config.yaml"

# 全局配置文件路径（系统级配置，多用户共享）
GLOBAL_CONFIG_FILE = Path("/opt/cayley_dist/global_config.yaml")


# ============ 配置模型 ============

class CapSettings(BaseModel):
    """
    桌面规模上限

    属性:
        group_enum: 子群 / 群自同构枚举允许的最大群阶
        aut_exact: 精确计算图自同构群允许的最大顶点数
        chi_exact: 精确色数允许的最大顶点数
        chi_d_exact: 精确区分色数允许的最大顶点数
        census: 重叠普查允许的最大群阶
        max_group_order: 逐元素列出的图自同构群的最大阶
        max_subgroups: 子群枚举的最大数量
        max_group_automorphisms: 群自同构枚举的最大数量
    """
    group_enum: int = Field(200, ge=1)
    aut_exact: int = Field(64, ge=1)
    chi_exact: int = Field(40, ge=1)
    chi_d_exact: int = Field(12, ge=1)
    census: int = Field(200, ge=1)
    max_group_order: int = Field(500_000, ge=1)
    max_subgroups: int = Field(50_000, ge=1)
    max_group_automorphisms: int = Field(200_000, ge=1)


class ExperimentDefaults(BaseModel):
    """实验默认参数（线程数 0 表示使用全部 CPU 核）"""
    threads: int = Field(0, ge=0)
    recolor_attempts: int = Field(1000, ge=1)
    t_grid: List[float] = Field(default_factory=lambda: [0.5, 1.0, 1.5, 2.0, 3.0])


class Settings(BaseSettings):
    """
    应用配置

    由 pydantic-settings 负责分层合并与类型校验，
    YAML 文件路径在每次构造时读取模块级变量，便于测试替换。
    """
    model_config = SettingsConfigDict(
        env_prefix="CAYDIST_",
        env_nested_delimiter="__",
        extra="ignore",
    )

    language: str = "en"
    caps: CapSettings = Field(default_factory=CapSettings)
    experiment: ExperimentDefaults = Field(default_factory=ExperimentDefaults)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # 排在前面的来源优先级更高
        return (
            init_settings,
            env_settings,
            YamlConfigSettingsSource(settings_cls, yaml_file=CONFIG_FILE),
            YamlConfigSettingsSource(settings_cls, yaml_file=GLOBAL_CONFIG_FILE),
        )


# ============ 配置加载函数 ============

@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    获取当前配置（带缓存）

    加载完成后立即设置界面语言。

    返回:
        Settings 对象
    """
    settings = Settings()
    set_language(settings.language)
    return settings


def reload_settings() -> Settings:
    """清除缓存并重新加载配置"""
    get_settings.cache_clear()
    return get_settings()


def load_config() -> Dict[str, Any]:
    """
    以字典形式返回生效配置

    返回:
        包含 language、caps、experiment 的字典
    """
    return get_settings().model_dump()


def _read_user_config() -> Dict[str, Any]:
    if not CONFIG_FILE.exists():
        return {}
    with open(CONFIG_FILE, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def save_config(updates: Dict[str, Any]) -> Path:
    """
    将配置更新写入用户配置文件

    参数:
        updates: 点号路径到取值的映射，例如 {"caps.aut_exact": 80}

    返回:
        保存的配置文件路径

    注意:
        - 写入前用 Settings 校验合并结果，非法取值直接抛出 pydantic 校验错误
        - 保存后刷新缓存的配置
    """
    user_config = _read_user_config()

    for dotted, value in updates.items():
        node = user_config
        keys = dotted.split(".")
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = value

    # 校验合并后的配置
    Settings(**user_config)

    CONFIG_FILE.parent.mkdir(parents=True, exist_ok=True)
    with open(CONFIG_FILE, "w", encoding="utf-8") as f:
        yaml.safe_dump(user_config, f, default_flow_style=False, allow_unicode=True)

    reload_settings()
    return CONFIG_FILE


def resolve_cap(name: str, override: Any = None) -> int:
    """
    读取规模上限

    参数:
        name: CapSettings 中的字段名
        override: 显式传入的上限（优先）

    返回:
        上限整数值
    """
    if override is not None:
        return int(override)
    return int(getattr(get_settings().caps, name))
