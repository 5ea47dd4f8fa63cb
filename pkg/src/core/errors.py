"""
异常定义模块

本模块集中定义 cayley-dist 的异常层次，所有领域异常都继承自
CayleyDistError，CLI 根据异常类型映射退出码：

- ParameterError / ConfigError: 参数或配置错误（退出码 2）
- ScaleError: 超出桌面规模上限（退出码 3）
- 其他 CayleyDistError: 运行时错误（退出码 4）
"""

# ============ 标准库导入 ============
from typing import Optional


# ============ 异常类定义 ============

class CayleyDistError(Exception):
    """cayley-dist 异常基类"""
    pass


class ParameterError(CayleyDistError, ValueError):
    """参数越界或格式错误（概率不在 [0,1]、群描述串非法等）"""
    pass


class SpecMismatchError(ParameterError):
    """元素或集合来自不同的群"""
    pass


class ConfigError(ParameterError):
    """实验配置文件或报告格式错误"""
    pass


class ScaleError(CayleyDistError):
    """
    超出桌面规模上限

    属性:
        cap_name: 上限名称（对应配置项 caps.<cap_name>）
        limit: 上限值
        actual: 实际规模
    """

    def __init__(self, cap_name: str, limit: int, actual: Optional[int] = None, detail: str = ""):
        self.cap_name = cap_name
        self.limit = limit
        self.actual = actual
        message = f"cap '{cap_name}' exceeded (limit {limit}"
        if actual is not None:
            message += f", got {actual}"
        message += ")"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class PreconditionError(CayleyDistError):
    """违反操作前置条件"""
    pass


class FormulaDomainError(PreconditionError):
    """闭式公式在定义域之外求值"""
    pass


class UnsupportedFamilyError(PreconditionError):
    """群族不受支持（例如在 Other 族上判定 good pair 事件）"""
    pass


class NoTripleFound(CayleyDistError):
    """图中不存在独立的零和三元组"""
    pass


class ConstructionError(PreconditionError):
    """构造性证书不成立（例如基础着色本身不正常）"""
    pass
