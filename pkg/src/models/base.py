"""
基础数据模型定义
Base report model definitions shared by every report section.
"""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class DimKind(str, Enum):
    """维数结论类型"""
    FINITE = "finite"
    INFINITE = "infinite"
    AT_LEAST = "at_least"


class Verdict(str, Enum):
    """不等式或恒等式的判定结果"""
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    VACUOUS = "vacuous"
    UNDECIDED = "undecided"


class HypothesisVerdict(str, Enum):
    """假设条件的判定结果"""
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


class BaseReportModel(BaseModel):
    """报告模型基类：不带时间戳和随机 ID，保证输出可复现"""

    model_config = ConfigDict(
        use_enum_values=True,
        validate_assignment=True,
        str_strip_whitespace=True
    )

    def to_json_dict(self) -> Dict[str, Any]:
        """按 JSON 模式导出"""
        return self.model_dump(mode="json")


class WitnessInfo(BaseReportModel):
    """合冲模周期见证 Ω^start ≅ Ω^(start+period)"""

    start: int = Field(..., ge=0, description="周期起点")
    period: int = Field(..., ge=1, description="周期长度")
    iso_verified: bool = Field(default=False, description="同构矩阵是否经过验证")


class DimValue(BaseReportModel):
    """维数：有限值、无穷（带周期见证）或截断下界"""

    kind: DimKind = Field(..., description="结论类型")
    value: Optional[int] = Field(None, ge=0, description="有限值或下界")
    witness: Optional[WitnessInfo] = Field(None, description="无穷时的周期见证")

    @field_validator("value")
    @classmethod
    def validate_value(cls, v: Optional[int]) -> Optional[int]:
        """验证取值非负"""
        if v is not None and v < 0:
            raise ValueError("维数不能为负")
        return v

    @classmethod
    def from_result(cls, result: Any) -> "DimValue":
        """由 fdmod.DimResult 构造"""
        witness = None
        if result.witness is not None:
            iso = result.witness.iso
            witness = WitnessInfo(
                start=result.witness.start,
                period=result.witness.period,
                iso_verified=bool(iso is not None and iso.is_valid() and iso.is_iso()),
            )
        return cls(kind=result.kind, value=result.value, witness=witness)

    def render(self) -> str:
        if self.kind == DimKind.FINITE.value:
            return str(self.value)
        if self.kind == DimKind.INFINITE.value:
            return "inf"
        return f">={self.value}"
