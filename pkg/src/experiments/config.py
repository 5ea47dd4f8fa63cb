"""
实验配置模块

实验配置文件为 JSON，由 pydantic 模型校验；未给出的线程数、t 网格与
重着色次数取自全局配置的 experiment 段。

示例：
    {
        "group": "25",
        "estimators": ["triples"],
        "p": 0.5,
        "trials": 2000,
        "seed": 20240601
    }
"""

# ============ 标准库导入 ============
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

# ============ 第三方库导入 ============
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

# ============ 本地模块导入 ============
from src.core.config import CapSettings, get_settings
from src.core.errors import ConfigError
from src.experiments.trials import Estimator
from src.groups.abelian import GroupSpec, parse_group_spec


class ExperimentConfig(BaseModel):
    """
    实验配置

    属性:
        group: 群描述串，例如 "25" 或 "2,2,9"
        estimators: 要运行的估计量
        p / p_grid: 单个采样概率或概率网格（二选一）
        trials: 每个参数点的试验数
        seed: 主种子
        caps: 规模上限覆盖，键为 CapSettings 的字段名
        t_grid: 集中度实验的 t 网格
        threads: 进程数，0 表示全部 CPU 核，1 表示串行
        recolor_attempts: 运动引理重着色的最多尝试次数
        exact_chi_d_max_n: 群阶不超过该值时额外计算精确 χ_D
    """
    model_config = ConfigDict(extra="forbid")

    group: str
    estimators: List[Estimator] = Field(min_length=1)
    p: Optional[float] = Field(None, ge=0, le=1)
    p_grid: Optional[List[float]] = None
    trials: int = Field(ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    caps: Dict[str, int] = Field(default_factory=dict)
    t_grid: Optional[List[float]] = None
    threads: Optional[int] = Field(None, ge=0)
    recolor_attempts: Optional[int] = Field(None, ge=1)
    exact_chi_d_max_n: int = Field(9, ge=0)

    @field_validator("group")
    @classmethod
    def _check_group(cls, value: str) -> str:
        return str(parse_group_spec(value))

    @field_validator("p_grid")
    @classmethod
    def _check_grid(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None:
            if not value:
                raise ValueError("p_grid must not be empty")
            bad = [p for p in value if not 0 <= p <= 1]
            if bad:
                raise ValueError(f"p values must lie in [0, 1], got {bad}")
        return value

    @field_validator("caps")
    @classmethod
    def _check_caps(cls, value: Dict[str, int]) -> Dict[str, int]:
        unknown = sorted(set(value) - set(CapSettings.model_fields))
        if unknown:
            raise ValueError(f"unknown caps {unknown}; known: {sorted(CapSettings.model_fields)}")
        small = {k: v for k, v in value.items() if v < 1}
        if small:
            raise ValueError(f"caps must be >= 1, got {small}")
        return value

    @field_validator("t_grid")
    @classmethod
    def _check_t_grid(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None and any(t <= 0 for t in value):
            raise ValueError(f"t values must be positive, got {value}")
        return value

    @model_validator(mode="after")
    def _one_probability_source(self) -> "ExperimentConfig":
        if (self.p is None) == (self.p_grid is None):
            raise ValueError("give exactly one of 'p' and 'p_grid'")
        return self

    @property
    def spec(self) -> GroupSpec:
        return parse_group_spec(self.group)

    @property
    def points(self) -> List[float]:
        return [float(self.p)] if self.p is not None else [float(p) for p in self.p_grid]

    def resolved(self) -> "ExperimentConfig":
        """用全局配置补齐缺省项"""
        defaults = get_settings().experiment
        return self.model_copy(update={
            "t_grid": self.t_grid if self.t_grid is not None else list(defaults.t_grid),
            "threads": self.threads if self.threads is not None else defaults.threads,
            "recolor_attempts": self.recolor_attempts if self.recolor_attempts is not None else defaults.recolor_attempts,
        })

    def with_estimators(self, estimators: List[Estimator]) -> "ExperimentConfig":
        return self.model_copy(update={"estimators": list(estimators)})


def parse_experiment_config(data: Dict[str, Any]) -> ExperimentConfig:
    """
    校验配置字典

    异常:
        ConfigError: 字段缺失、类型错误或取值非法
    """
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid experiment config: {e}") from e


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    读取 JSON 实验配置

    异常:
        ConfigError: 文件不可读、不是合法 JSON 或校验失败
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read experiment config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"experiment config {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"experiment config {path} must be a JSON object")
    return parse_experiment_config(data)
