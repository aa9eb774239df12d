"""报告数据模型"""

from typing import Any, Dict, List, Optional

from pydantic import Field, field_validator

from .base import BaseReportModel, DimValue, HypothesisVerdict, Verdict


class CheckEntry(BaseReportModel):
    """单条检查：名称、判定与两侧取值"""

    name: str = Field(..., description="检查名称")
    verdict: Verdict = Field(..., description="判定结果")
    lhs: Optional[str] = Field(None, description="左侧取值")
    rhs: Optional[str] = Field(None, description="右侧取值")
    detail: Dict[str, Any] = Field(default_factory=dict, description="附加信息")


class CheckReport(BaseReportModel):
    """由若干检查组成的报告"""

    title: str = Field(..., description="报告标题")
    entries: List[CheckEntry] = Field(default_factory=list, description="检查列表")
    summary: Dict[str, Any] = Field(default_factory=dict, description="汇总信息")

    @property
    def verdict(self) -> str:
        """汇总判定：任何违例优先，其次未决"""
        verdicts = {e.verdict for e in self.entries}
        if Verdict.VIOLATED.value in verdicts:
            return Verdict.VIOLATED.value
        if Verdict.UNDECIDED.value in verdicts:
            return Verdict.UNDECIDED.value
        if verdicts and verdicts <= {Verdict.VACUOUS.value}:
            return Verdict.VACUOUS.value
        return Verdict.SATISFIED.value

    def add(self, entry: CheckEntry) -> None:
        self.entries.append(entry)


class Hypothesis(BaseReportModel):
    """定理假设及其判定"""

    name: str = Field(..., description="假设名称")
    verdict: HypothesisVerdict = Field(..., description="是否成立")
    witness: Optional[str] = Field(None, description="失败或未决时的见证")


class BoundReport(BaseReportModel):
    """维数界报告：lhs ≤ rhs"""

    theorem_tag: str = Field(..., description="定理标签")
    hypotheses: List[Hypothesis] = Field(default_factory=list, description="假设列表")
    lhs: DimValue = Field(..., description="左侧")
    rhs: Optional[DimValue] = Field(None, description="右侧；不适用时为空")
    verdict: Verdict = Field(..., description="判定结果")
    sharp: Optional[bool] = Field(None, description="两侧是否相等")
    entries: List[CheckEntry] = Field(default_factory=list, description="附带的逐项检查")
    extras: Dict[str, Any] = Field(default_factory=dict, description="附加数值")

    @field_validator("theorem_tag")
    @classmethod
    def validate_tag(cls, v: str) -> str:
        """验证标签非空"""
        if not v:
            raise ValueError("定理标签不能为空")
        return v


class TightnessReport(BaseReportModel):
    """紧分解判定"""

    module: str = Field(..., description="模名称")
    side: str = Field(..., description="A 或 B")
    tight: Optional[bool] = Field(None, description="是否紧；未决为空")
    witness_degree: Optional[int] = Field(None, ge=0, description="首个张量不为零的分解项次数")
    status: str = Field(..., description="分解状态")
    depth: int = Field(default=0, ge=0, description="检查到的分解项数")

    @field_validator("side")
    @classmethod
    def validate_side(cls, v: str) -> str:
        """验证一侧"""
        if v not in ("A", "B"):
            raise ValueError(f"无效的一侧: {v}")
        return v


class ClassFlags(BaseReportModel):
    """六个子范畴的成员标记"""

    in_X: bool = Field(..., description="f 满")
    in_Y: bool = Field(..., description="X = 0")
    in_Z: bool = Field(..., description="ρ(g) 单且 f = 0")
    in_Xp: bool = Field(..., description="g 满")
    in_Yp: bool = Field(..., description="Y = 0")
    in_Zp: bool = Field(..., description="π(f) 单且 g = 0")
    consistent: bool = Field(default=True, description="f 满或 g 满时另一结构映射为零")


class GorensteinReport(BaseReportModel):
    """Gorenstein 判定"""

    algebra: str = Field(..., description="代数名称")
    id_left: DimValue = Field(..., description="左正则模的内射维数")
    id_right: DimValue = Field(..., description="右正则模的内射维数")
    verdict: str = Field(..., description="gorenstein | not | undecided")

    @field_validator("verdict")
    @classmethod
    def validate_verdict(cls, v: str) -> str:
        """验证判定值"""
        if v not in ("gorenstein", "not", "undecided"):
            raise ValueError(f"无效的 Gorenstein 判定: {v}")
        return v


class GprojReport(BaseReportModel):
    """Gorenstein 投射判定"""

    module: str = Field(..., description="模名称")
    window: int = Field(..., ge=1, description="检查的 Ext 次数上限")
    ext_vanishing: Dict[str, int] = Field(default_factory=dict, description="n → dim Ext^n(X, Λ)")
    member: bool = Field(..., description="窗口内 Ext 是否全部为零")
    certified: bool = Field(..., description="结论是否对所有 n 成立")
    certificate: Optional[str] = Field(None, description="terminated | periodic | injective_dimension | nonvanishing")


class Report(BaseReportModel):
    """顶层报告"""

    command: str = Field(..., description="命令")
    tool_version: str = Field(..., description="工具版本")
    field: str = Field(..., description="基域")
    cutoff: int = Field(..., ge=1, description="分解截断值")
    inputs_digest: str = Field(default="", description="输入文档摘要")
    status: str = Field(default="ok", description="ok | violated | undecided | error")
    results: Dict[str, Any] = Field(default_factory=dict, description="结果")
    error: Optional[Dict[str, Any]] = Field(None, description="错误信息")

    @field_validator("status")
    @classmethod
    def validate_status(cls, v: str) -> str:
        """验证状态"""
        if v not in ("ok", "violated", "undecided", "error"):
            raise ValueError(f"无效的报告状态: {v}")
        return v

    @property
    def exit_code(self) -> int:
        return {"ok": 0, "undecided": 2}.get(self.status, 1)
