"""
数据模型单元测试
Unit tests for report and document models
"""

import pytest
from pydantic import ValidationError

from src.core.fdmod import DimResult, PeriodicityWitness
from src.models import (
    CheckReport,
    DimKind,
    DimValue,
    Document,
    FieldSpec,
    Verdict,
)
from src.models.document import QuiverAlgebraSpec
from src.models.report import (
    BoundReport,
    CheckEntry,
    GorensteinReport,
    Report,
    TightnessReport,
)


class TestDimValue:
    """维数模型测试"""

    def test_render(self):
        assert DimValue(kind=DimKind.FINITE, value=3).render() == "3"
        assert DimValue(kind=DimKind.INFINITE).render() == "inf"
        assert DimValue(kind=DimKind.AT_LEAST, value=64).render() == ">=64"

    def test_from_result(self):
        value = DimValue.from_result(DimResult.infinite(PeriodicityWitness(0, 2)))
        assert value.kind == "infinite"
        assert value.witness.period == 2
        assert value.witness.iso_verified is False

    def test_negative_value(self):
        with pytest.raises(ValidationError):
            DimValue(kind=DimKind.FINITE, value=-1)

    def test_json_is_deterministic(self):
        value = DimValue(kind=DimKind.FINITE, value=1)
        assert value.to_json_dict() == {"kind": "finite", "value": 1, "witness": None}


class TestCheckReport:
    """检查报告汇总判定测试"""

    def _report(self, *verdicts):
        report = CheckReport(title="t")
        for i, v in enumerate(verdicts):
            report.add(CheckEntry(name=f"e{i}", verdict=v))
        return report

    def test_violated_dominates(self):
        assert self._report(Verdict.SATISFIED, Verdict.UNDECIDED, Verdict.VIOLATED).verdict == "violated"

    def test_undecided(self):
        assert self._report(Verdict.SATISFIED, Verdict.UNDECIDED).verdict == "undecided"

    def test_vacuous_only(self):
        assert self._report(Verdict.VACUOUS, Verdict.VACUOUS).verdict == "vacuous"
        assert self._report(Verdict.VACUOUS, Verdict.SATISFIED).verdict == "satisfied"

    def test_empty(self):
        assert CheckReport(title="empty").verdict == "satisfied"


class TestReports:
    """顶层与各节报告测试"""

    def test_exit_codes(self):
        base = dict(command="gldim", tool_version="0.1.0", field="QQ", cutoff=8)
        assert Report(**base).exit_code == 0
        assert Report(**base, status="violated").exit_code == 1
        assert Report(**base, status="error").exit_code == 1
        assert Report(**base, status="undecided").exit_code == 2

    def test_invalid_status(self):
        with pytest.raises(ValidationError):
            Report(command="gldim", tool_version="0.1.0", field="QQ", cutoff=8, status="fine")

    def test_cutoff_positive(self):
        with pytest.raises(ValidationError):
            Report(command="gldim", tool_version="0.1.0", field="QQ", cutoff=0)

    def test_bound_tag_required(self):
        with pytest.raises(ValidationError):
            BoundReport(
                theorem_tag="",
                lhs=DimValue(kind=DimKind.FINITE, value=1),
                verdict=Verdict.SATISFIED,
            )

    def test_tightness_side(self):
        with pytest.raises(ValidationError):
            TightnessReport(module="S0", side="C", status="terminated")

    def test_gorenstein_verdict(self):
        value = DimValue(kind=DimKind.FINITE, value=0)
        with pytest.raises(ValidationError):
            GorensteinReport(algebra="A", id_left=value, id_right=value, verdict="maybe")


class TestDocumentModels:
    """输入文档模型测试"""

    def test_prime_field(self):
        assert FieldSpec(kind="prime", p=7).p == 7
        with pytest.raises(ValidationError):
            FieldSpec(kind="prime", p=8)

    def test_monomial_relations_normalized(self):
        spec = QuiverAlgebraSpec(
            kind="quiver",
            vertices=["v"],
            arrows=[{"label": "x", "source": "v", "target": "v"}],
            relations=[["x", "x"]],
            truncation_length=2,
        )
        assert spec.relations[0][0].path == ["x", "x"]
        assert spec.relations[0][0].coeff == 1

    def test_zero_paths_sets_truncation(self):
        spec = QuiverAlgebraSpec(
            kind="quiver",
            vertices=["v", "w"],
            arrows=[{"label": "a", "source": "v", "target": "w"}],
            zero_paths_of_length=2,
        )
        assert spec.truncation_length == 2

    def test_truncation_required(self):
        with pytest.raises(ValidationError):
            QuiverAlgebraSpec(kind="quiver", vertices=["v"])

    def test_unknown_arrow_in_relation(self):
        with pytest.raises(ValidationError):
            QuiverAlgebraSpec(kind="quiver", vertices=["v"], relations=[["y"]], truncation_length=2)

    def test_document_shape(self):
        with pytest.raises(ValidationError):
            Document.model_validate({"options": {}})
        with pytest.raises(ValidationError):
            Document.model_validate({
                "algebra": {"kind": "quiver", "vertices": ["v"], "truncation_length": 2},
                "modules": {"S": {"kind": "simple", "index": 0, "over": "A"}},
            })

    def test_unknown_fields_rejected(self):
        with pytest.raises(ValidationError):
            Document.model_validate({
                "algebra": {"kind": "quiver", "vertices": ["v"], "truncation_length": 2},
                "colour": "blue",
            })
