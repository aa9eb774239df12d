"""
计算内核异常定义
Exception hierarchy for the exact-arithmetic kernel and the services built on it.
"""

from typing import Any, Dict, Optional, Sequence


class MoritaKitError(ValueError):
    """所有 moritakit 错误的基类"""

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        """转换为可序列化的字典"""
        return {
            "error_type": type(self).__name__,
            "message": self.message,
            "context": {k: str(v) for k, v in self.context.items()},
        }


class FieldMismatchError(MoritaKitError):
    """标量或矩阵来自不同的域"""


class DimensionMismatchError(MoritaKitError):
    """矩阵或子空间维数不匹配"""


class AdmissibilityError(MoritaKitError):
    """截断长度处的路径不在关系理想中"""

    def __init__(self, message: str, path: Sequence[str] = ()) -> None:
        super().__init__(message, path="".join(path))
        self.path = tuple(path)


class CompositionError(MoritaKitError):
    """关系中的路径不可合成或端点不一致"""


class AlgebraMismatchError(MoritaKitError):
    """模或映射不在同一代数上"""


class InvalidAlgebraError(MoritaKitError):
    """乘法表不满足结合律或单位律"""


class InvalidModuleError(MoritaKitError):
    """作用矩阵不构成模结构"""


class InvalidContextError(MoritaKitError):
    """Morita 上下文违反双模或结合条件"""

    def __init__(self, message: str, violations: Optional[Sequence[Any]] = None) -> None:
        super().__init__(message, violations=len(violations or ()))
        self.violations = list(violations or ())


class InvalidTupleError(MoritaKitError):
    """元组模 (X, Y, f, g) 的交换方块不成立"""


class PreconditionError(MoritaKitError):
    """操作的前提条件不满足"""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message, witness=witness)
        self.witness = witness


class UnsupportedConstructionError(MoritaKitError):
    """无法在当前域上完成的构造（例如根的传播失败）"""


class IsoSearchError(MoritaKitError):
    """同构搜索在有限域上无法给出确定结论"""


class DocumentError(MoritaKitError):
    """输入文档不符合模式"""

    def __init__(self, message: str, location: str = "") -> None:
        super().__init__(message, location=location)
        self.location = location
