"""
输入文档数据模型
Schema for the JSON description documents consumed by the CLI and the API:
field, algebra or context, named modules and run options.
"""

from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import isprime

Scalar = Union[int, str]
MatrixSpec = List[List[Scalar]]
Over = Literal["algebra", "A", "B", "Lambda"]


class DocumentModel(BaseModel):
    """文档模型基类：拒绝未知字段"""

    model_config = ConfigDict(
        extra="forbid",
        str_strip_whitespace=True
    )


class FieldSpec(DocumentModel):
    """基域"""

    kind: Literal["rational", "prime"] = Field(default="rational", description="域类型")
    p: Optional[int] = Field(None, description="素域特征")

    @model_validator(mode="after")
    def validate_prime(self) -> "FieldSpec":
        """素域必须给出素数特征"""
        if self.kind == "prime" and (self.p is None or not isprime(self.p)):
            raise ValueError(f"素域的特征必须是素数: {self.p}")
        return self


class ArrowSpec(DocumentModel):
    label: str = Field(..., min_length=1)
    source: str
    target: str


class RelationTerm(DocumentModel):
    """关系中的一项：系数乘以路径（从左到右读）"""

    coeff: Scalar = Field(default=1, description="系数")
    path: List[str] = Field(..., min_length=1, description="箭头标签序列")


class QuiverAlgebraSpec(DocumentModel):
    """箭图代数 KQ/I"""

    kind: Literal["quiver"]
    name: str = ""
    vertices: List[str] = Field(..., min_length=1, description="顶点标签")
    arrows: List[ArrowSpec] = Field(default_factory=list, description="箭头")
    relations: List[List[RelationTerm]] = Field(default_factory=list, description="关系列表")
    zero_paths_of_length: Optional[int] = Field(None, ge=2, description="把所有该长度的路径设为零")
    truncation_length: Optional[int] = Field(None, ge=2, description="截断长度 L")

    @field_validator("relations", mode="before")
    @classmethod
    def normalize_relations(cls, v: Any) -> Any:
        """单项式关系可写为箭头标签列表，项可写为标签列表"""
        if not isinstance(v, list):
            return v
        out = []
        for relation in v:
            if isinstance(relation, list) and relation and all(isinstance(x, str) for x in relation):
                out.append([{"path": relation}])
                continue
            if isinstance(relation, list):
                out.append([{"path": t} if isinstance(t, list) else t for t in relation])
            else:
                out.append(relation)
        return out

    @model_validator(mode="after")
    def validate_references(self) -> "QuiverAlgebraSpec":
        """关系只能引用已声明的箭头，且必须给出截断长度"""
        labels = {a.label for a in self.arrows}
        for i, relation in enumerate(self.relations):
            for term in relation:
                unknown = [x for x in term.path if x not in labels]
                if unknown:
                    raise ValueError(f"relations[{i}] 引用了未知的箭头: {unknown[0]}")
        for a in self.arrows:
            for end in (a.source, a.target):
                if end not in self.vertices:
                    raise ValueError(f"箭头 {a.label} 的端点 {end} 未声明")
        if self.truncation_length is None:
            if self.zero_paths_of_length is None:
                raise ValueError("必须给出 truncation_length 或 zero_paths_of_length")
            self.truncation_length = self.zero_paths_of_length
        return self


class BimoduleSpec(DocumentModel):
    """双模：正则、对偶、零或由生成元矩阵给出"""

    kind: Literal["regular", "dual", "zero", "explicit"]
    dim: Optional[int] = Field(None, ge=0)
    left: Dict[str, MatrixSpec] = Field(default_factory=dict, description="左作用生成元矩阵")
    right: Dict[str, MatrixSpec] = Field(default_factory=dict, description="右作用生成元矩阵")

    @model_validator(mode="after")
    def validate_explicit(self) -> "BimoduleSpec":
        if self.kind == "explicit" and self.dim is None:
            raise ValueError("explicit 双模必须给出 dim")
        return self


class TrivialExtensionSpec(DocumentModel):
    """平凡扩张 A⋉N"""

    kind: Literal["trivial_extension"]
    name: str = ""
    base: QuiverAlgebraSpec
    bimodule: BimoduleSpec


AlgebraSpec = Annotated[Union[QuiverAlgebraSpec, TrivialExtensionSpec], Field(discriminator="kind")]


class PierceContextSpec(DocumentModel):
    kind: Literal["pierce"]
    name: str = ""
    split: List[List[str]] = Field(..., min_length=2, max_length=2, description="两组顶点")


class DeltaContextSpec(DocumentModel):
    kind: Literal["delta"]
    name: str = ""


class ZeroContextSpec(DocumentModel):
    """φ = ψ = 0 的上下文；B 省略时取 A 本身"""

    kind: Literal["zero"]
    name: str = ""
    A: QuiverAlgebraSpec
    B: Optional[QuiverAlgebraSpec] = None
    M: BimoduleSpec
    N: BimoduleSpec


class EndomorphismContextSpec(DocumentModel):
    kind: Literal["endomorphism"]
    name: str = ""
    U: List[str] = Field(..., min_length=1, description="U 的直和项（模名称）")
    V: List[str] = Field(..., min_length=1, description="V 的直和项（模名称）")


ContextSpec = Annotated[
    Union[PierceContextSpec, DeltaContextSpec, ZeroContextSpec, EndomorphismContextSpec],
    Field(discriminator="kind"),
]


class IndexedModuleSpec(DocumentModel):
    kind: Literal["simple", "projective", "injective"]
    index: int = Field(..., ge=0)
    over: Over = "algebra"


class ExplicitModuleSpec(DocumentModel):
    """给出每个基元素的作用矩阵"""

    kind: Literal["explicit"]
    dim: int = Field(..., ge=0)
    action: List[MatrixSpec]
    over: Over = "algebra"


class GeneratorModuleSpec(DocumentModel):
    """箭图代数上由顶点与箭头矩阵给出的模"""

    kind: Literal["generators"]
    matrices: Dict[str, MatrixSpec]
    over: Over = "algebra"


class TupleModuleSpec(DocumentModel):
    """(X, Y, f, g)：X、Y 为已命名的模"""

    kind: Literal["tuple"]
    X: str
    Y: str
    f: MatrixSpec = Field(default_factory=list)
    g: MatrixSpec = Field(default_factory=list)


ModuleSpec = Annotated[
    Union[IndexedModuleSpec, ExplicitModuleSpec, GeneratorModuleSpec, TupleModuleSpec],
    Field(discriminator="kind"),
]


class OptionsSpec(DocumentModel):
    """运行选项与示例的期望值"""

    cutoff: Optional[int] = Field(None, ge=1)
    depth: Optional[int] = Field(None, ge=0)
    window: Optional[int] = Field(None, ge=1)
    theorem: Optional[str] = None
    module: Optional[str] = Field(None, description="命令默认作用的模")
    provenance: str = ""
    expected: Dict[str, Any] = Field(default_factory=dict, description="示例语料的期望结果")


class Document(DocumentModel):
    """完整的输入文档"""

    field: FieldSpec = Field(default_factory=FieldSpec)
    algebra: Optional[AlgebraSpec] = None
    context: Optional[ContextSpec] = None
    modules: Dict[str, ModuleSpec] = Field(default_factory=dict)
    options: OptionsSpec = Field(default_factory=OptionsSpec)

    @model_validator(mode="after")
    def validate_shape(self) -> "Document":
        """需要代数或上下文；非零上下文依赖顶层代数"""
        if self.algebra is None and self.context is None:
            raise ValueError("文档必须包含 algebra 或 context")
        if self.context is not None and self.context.kind != "zero" and self.algebra is None:
            raise ValueError(f"{self.context.kind} 上下文需要顶层 algebra")
        if self.context is None:
            for name, spec in self.modules.items():
                if spec.kind == "tuple" or getattr(spec, "over", "algebra") != "algebra":
                    raise ValueError(f"modules.{name} 需要 context")
        if isinstance(self.context, EndomorphismContextSpec):
            for name in self.context.U + self.context.V:
                if name not in self.modules:
                    raise ValueError(f"context 引用了未知的模: {name}")
        return self
