"""数据模型模块"""

from .base import BaseReportModel, DimKind, DimValue, HypothesisVerdict, Verdict, WitnessInfo
from .document import Document, FieldSpec, OptionsSpec
from .report import (
    BoundReport,
    CheckEntry,
    CheckReport,
    ClassFlags,
    GorensteinReport,
    GprojReport,
    Hypothesis,
    Report,
    TightnessReport,
)

__all__ = [
    "BaseReportModel",
    "DimKind",
    "DimValue",
    "HypothesisVerdict",
    "Verdict",
    "WitnessInfo",
    "Document",
    "FieldSpec",
    "OptionsSpec",
    "BoundReport",
    "CheckEntry",
    "CheckReport",
    "ClassFlags",
    "GorensteinReport",
    "GprojReport",
    "Hypothesis",
    "Report",
    "TightnessReport",
]
