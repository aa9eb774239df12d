"""
报告服务测试
Command dispatch, rendering and the example corpus
"""

import json

import pytest

from src.config.settings import settings
from src.core.exactla import Field
from src.core.exceptions import DocumentError, IsoSearchError
from src.services.document_service import DocumentService
from src.services import report_service
from src.services.report_service import COMMANDS, EXPECTATIONS, ReportService, RunFlags
from tests.conftest import FIXTURES
from tests.test_document import A2_DOCUMENT


@pytest.fixture
def service():
    return ReportService()


@pytest.fixture
def a2_document():
    return DocumentService().parse_text(json.dumps(A2_DOCUMENT))


class TestRunFlags:
    """运行参数合并测试"""

    def test_flags_override_options(self, a2_document):
        doc = a2_document.model_copy(update={"options": a2_document.options.model_copy(update={"cutoff": 12})})
        assert RunFlags().merged(doc).cutoff == 12
        assert RunFlags(cutoff=5).merged(doc).cutoff == 5

    def test_settings_default(self, a2_document):
        merged = RunFlags().merged(a2_document)
        assert merged.cutoff == settings.default_cutoff
        assert merged.depth is None


class TestCommands:
    """单个命令测试"""

    def test_catalogue(self, service):
        assert set(service.commands()) == set(COMMANDS)
        assert "examples" in COMMANDS

    def test_gldim_of_algebra(self, service, a2_document):
        report = service.run_document("gldim", a2_document, RunFlags(cutoff=8))
        assert report.status == "ok"
        assert report.exit_code == 0
        assert report.results["algebra"]["gldim"] == {"kind": "finite", "value": 1, "witness": None}
        assert report.cutoff == 8
        assert report.inputs_digest == DocumentService().digest(a2_document)

    def test_gldim_of_context(self, service):
        report = service.run_path("gldim", FIXTURES / "ex5_1.json", RunFlags(cutoff=16))
        assert report.status == "ok"
        assert report.results["Lambda"]["gldim"]["kind"] == "infinite"
        assert report.results["A"]["gldim"]["value"] == 0
        assert report.field == "QQ"

    def test_gldim_decided_by_named_module(self, service):
        """D 的合冲周期为 2，整体维数在小截断下即判定为无穷"""
        report = service.run_path("gldim", FIXTURES / "ex4_13.json")
        assert report.cutoff == 8
        gl = report.results["Lambda"]["gldim"]
        assert gl["kind"] == "infinite"
        assert gl["witness"]["period"] == 2
        assert report.results["Lambda"]["decided"] is True

    def test_zero_context_iso_undecided_on_search_failure(self, service, monkeypatch):
        def exhausted(a, b, limit=None):
            raise IsoSearchError("search exhausted")

        monkeypatch.setattr(report_service, "find_algebra_iso", exhausted)
        loaded = service.documents.load(service.documents.parse_document(FIXTURES / "ex4_13.json"))
        entries = EXPECTATIONS["zero_context_iso"](service, loaded, {"exists": True}, RunFlags(cutoff=8))
        assert [e.verdict for e in entries] == ["undecided"]

    def test_field_override(self, service, a2_document):
        report = service.run_document("gldim", a2_document, RunFlags(cutoff=8), Field.prime(7))
        assert report.field == "GF(7)"

    def test_resolve_single_module(self, service, a2_document):
        report = service.run_document("resolve", a2_document, RunFlags(module="S1"))
        entry = report.results["S1"]
        assert entry["status"] == "terminated"
        assert entry["terms"] == [2, 1]
        assert entry["verdict"] == "satisfied"

    def test_loewy_of_algebra(self, service, a2_document):
        assert service.run_document("loewy", a2_document).results == {"loewy": 2}

    def test_check_context(self, service):
        report = service.run_path("check", FIXTURES / "ex5_1.json")
        assert report.results["context"]["verdict"] == "satisfied"
        assert report.results["pierce_iso"]["verdict"] == "satisfied"
        assert report.results["context"]["zero_pairings"] is True

    def test_bounds(self, service):
        report = service.run_path("bounds", FIXTURES / "ex5_10.json", RunFlags(theorem="5.9", cutoff=16))
        bound = report.results["5.9"]
        assert bound["verdict"] == "satisfied"
        assert bound["sharp"] is True
        assert bound["lhs"]["value"] == 4

    def test_unknown_theorem_is_error(self, service):
        report = service.run_path("bounds", FIXTURES / "ex5_1.json", RunFlags(theorem="9.99"))
        assert report.status == "error"
        assert report.exit_code == 1
        assert report.error["error_type"] == "PreconditionError"

    def test_context_required(self, service, a2_document):
        report = service.run_document("simples", a2_document)
        assert report.status == "error"
        assert report.error["context"]["location"] == "context"

    def test_missing_document(self, service, tmp_path):
        report = service.run_path("gldim", tmp_path / "absent.json")
        assert report.status == "error"
        assert report.error["error_type"] == "DocumentError"
        assert report.inputs_digest == ""


class TestRendering:
    """渲染测试"""

    def test_json_is_deterministic(self, service, a2_document):
        first = service.render_json(service.run_document("gldim", a2_document, RunFlags(cutoff=8)))
        second = service.render_json(service.run_document("gldim", a2_document, RunFlags(cutoff=8)))
        assert first == second
        assert json.loads(first)["command"] == "gldim"

    def test_text(self, service, a2_document):
        text = service.render_text(service.run_document("gldim", a2_document, RunFlags(cutoff=8)))
        lines = text.splitlines()
        assert 'status: "ok"' in lines
        assert "results.algebra.gldim.value: 1" in lines


class TestExamples:
    """示例语料测试"""

    @pytest.mark.slow
    def test_bundled_corpus(self, service):
        report = service.examples_corpus(FIXTURES)
        assert set(report.results) == {p.stem for p in FIXTURES.glob("*.json")}
        failing = {k: v for k, v in report.results.items() if v["verdict"] != "satisfied"}
        assert not failing
        assert report.status == "ok"

    @pytest.mark.slow
    def test_corpus_output_is_reproducible(self):
        """两次独立运行整个语料，JSON 输出逐字节相同"""
        first = ReportService()
        first_json = first.render_json(first.examples_corpus(FIXTURES))
        second = ReportService()
        second_json = second.render_json(second.examples_corpus(FIXTURES))
        assert first_json.encode("utf-8") == second_json.encode("utf-8")

    def test_empty_directory(self, service, tmp_path):
        with pytest.raises(DocumentError):
            service.examples_corpus(tmp_path)

    def test_broken_document(self, service, tmp_path):
        (tmp_path / "broken.json").write_text("{", encoding="utf-8")
        report = service.examples_corpus(tmp_path)
        assert report.results["broken"]["verdict"] == "violated"
        assert report.status == "violated"

    def test_unknown_expectation(self, service, tmp_path):
        doc = json.loads(json.dumps(A2_DOCUMENT))
        doc["options"] = {"expected": {"nonsense": 1}}
        (tmp_path / "odd.json").write_text(json.dumps(doc), encoding="utf-8")
        report = service.examples_corpus(tmp_path)
        assert report.results["odd"]["verdict"] == "violated"

    def test_expectations_checked(self, service, tmp_path):
        doc = json.loads(json.dumps(A2_DOCUMENT))
        doc["options"] = {"expected": {"algebra_dim": 3, "gldim": 1}}
        (tmp_path / "a2.json").write_text(json.dumps(doc), encoding="utf-8")
        report = service.examples_corpus(tmp_path, RunFlags(cutoff=8))
        assert report.results["a2"]["verdict"] == "satisfied"
        assert report.status == "ok"
