"""
公式注册模块

把闭式概率界注册为可按名称调用的公式，供 CLI `bounds` 命令使用。

主要功能：
1. 公式注册表 (FormulaRegistry)：装饰器注册，按名称查找
2. 参数模式生成：从函数签名推断参数名、类型与默认值
3. 字符串参数求值："n=25,q=0.5" → BoundReport

注册流程：
1. 在 bounds / census / events 模块中使用 @registry.register 装饰公式函数
2. default_registry() 导入这些模块，触发注册
3. CLI 通过 evaluate(name, params) 求值
"""

# ============ 标准库导入 ============
import inspect
from dataclasses import dataclass, field
from functools import wraps
from typing import Any, Callable, Dict, List, Optional

# ============ 第三方库导入 ============
from mpmath import mpf, nstr

# ============ 本地模块导入 ============
from src.core.errors import ParameterError
from src.core.logger import logger


# ============ 结果类型 ============

@dataclass(frozen=True)
class TailBound:
    """
    可能不适用的尾概率界

    属性:
        value: 界的取值
        applicable: 前提条件是否满足（不满足时取值照常返回，不做截断）
    """
    value: Any
    applicable: bool


@dataclass
class BoundReport:
    """
    公式求值报告

    属性:
        name: 公式名
        parameters: 回显的参数
        value: 扩展精度取值
        applicable: 前提条件是否满足
    """
    name: str
    parameters: Dict[str, Any]
    value: Any
    applicable: bool = True
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "parameters": dict(self.parameters),
            "value": float(self.value),
            "value_str": nstr(mpf(self.value), 15),
            "applicable": self.applicable,
            **self.extra,
        }


# ============ 公式注册表 ============

_TYPE_NAMES = {int: "integer", float: "number", str: "string", bool: "boolean"}


class FormulaRegistry:
    """
    公式注册表

    核心功能：
        - 装饰器注册：@registry.register
        - 模式生成：从签名推断参数类型
        - 求值：把字符串参数转换为声明的类型后调用
    """

    def __init__(self):
        self._formulas: Dict[str, Callable] = {}
        self._schemas: Dict[str, Dict[str, Any]] = {}

    def register(self, func: Callable) -> Callable:
        """注册公式函数，函数名即公式名"""
        self._schemas[func.__name__] = self._generate_schema(func)
        self._formulas[func.__name__] = func

        @wraps(func)
        def wrapper(*args, **kwargs):
            return func(*args, **kwargs)
        return wrapper

    def get(self, name: str) -> Optional[Callable]:
        return self._formulas.get(name)

    def names(self) -> List[str]:
        return sorted(self._formulas)

    @property
    def schemas(self) -> List[Dict[str, Any]]:
        return [self._schemas[name] for name in self.names()]

    def schema(self, name: str) -> Dict[str, Any]:
        return self._schemas[name]

    def _generate_schema(self, func: Callable) -> Dict[str, Any]:
        """
        从函数生成参数模式

        规则：
        1. 文档字符串第一行作为描述
        2. 参数类型映射：int->integer, float->number, str->string, bool->boolean
        3. 无默认值的参数列入 required
        """
        doc = func.__doc__ or ""
        description = doc.strip().split("\n")[0]
        parameters: Dict[str, Any] = {"type": "object", "properties": {}, "required": []}
        for name, param in inspect.signature(func).parameters.items():
            param_type = _TYPE_NAMES.get(param.annotation, "string")
            parameters["properties"][name] = {"type": param_type}
            if param.default is inspect.Parameter.empty:
                parameters["required"].append(name)
            else:
                parameters["properties"][name]["default"] = param.default
        return {"name": func.__name__, "description": description, "parameters": parameters}

    def _convert(self, name: str, key: str, raw: Any, annotation: Any) -> Any:
        if not isinstance(raw, str):
            return raw
        try:
            if annotation is int:
                return int(raw)
            if annotation is float:
                return float(mpf(raw))
            if annotation is bool:
                return raw.strip().lower() in ("1", "true", "yes")
        except (ValueError, TypeError):
            raise ParameterError(f"parameter '{key}' of {name} expects {_TYPE_NAMES[annotation]}, got '{raw}'")
        return raw

    def evaluate(self, name: str, params: Dict[str, Any]) -> BoundReport:
        """
        按名称求值

        参数:
            name: 公式名
            params: 参数映射，字符串取值按签名转换类型

        返回:
            BoundReport

        异常:
            ParameterError: 未知公式、缺少或多余参数、类型转换失败
        """
        func = self.get(name)
        if func is None:
            raise ParameterError(f"unknown formula '{name}'; available: {', '.join(self.names())}")
        signature = inspect.signature(func)
        unknown = sorted(set(params) - set(signature.parameters))
        if unknown:
            raise ParameterError(f"unknown parameters for {name}: {unknown}")
        kwargs = {}
        for key, param in signature.parameters.items():
            if key in params:
                kwargs[key] = self._convert(name, key, params[key], param.annotation)
            elif param.default is inspect.Parameter.empty:
                raise ParameterError(f"missing parameter '{key}' for {name}")
        logger.debug(f"Evaluating formula {name} with {kwargs}")
        result = func(**kwargs)
        if isinstance(result, TailBound):
            return BoundReport(name, kwargs, result.value, result.applicable)
        return BoundReport(name, kwargs, result)


def parse_params(text: str) -> Dict[str, str]:
    """
    解析 "k=v,k=v" 参数串

    不含 "=" 的片段接到上一个取值后面，因此 "group=5,5,q=0.5" 解析为
    {"group": "5,5", "q": "0.5"}。

    异常:
        ParameterError: 第一个片段缺少 "="
    """
    params: Dict[str, str] = {}
    last_key = None
    for chunk in (text or "").split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            if last_key is None:
                raise ParameterError(f"malformed parameter '{chunk}', expected key=value")
            params[last_key] += "," + chunk
            continue
        key, value = chunk.split("=", 1)
        last_key = key.strip()
        params[last_key] = value.strip()
    return params


# ============ 全局注册表实例 ============

registry = FormulaRegistry()


def default_registry() -> FormulaRegistry:
    """导入各公式模块并返回全局注册表"""
    from src.theory import bounds, census, events  # noqa: F401  导入即注册
    return registry
