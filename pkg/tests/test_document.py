"""
文档服务测试
"""

import json

import pytest

from src.core.exactla import Field
from src.core.exceptions import DocumentError
from src.services.document_service import DocumentService
from tests.conftest import FIXTURES

A2_DOCUMENT = {
    "algebra": {
        "kind": "quiver",
        "name": "A2",
        "vertices": ["v1", "v2"],
        "arrows": [{"label": "a", "source": "v1", "target": "v2"}],
        "truncation_length": 2,
    },
    "modules": {
        "S1": {"kind": "simple", "index": 1},
        "P1": {"kind": "projective", "index": 1},
        "X": {
            "kind": "generators",
            "matrices": {"v1": [[1, 0], [0, 0]], "v2": [[0, 0], [0, 1]], "a": [[0, 0], [1, 0]]},
        },
    },
}


@pytest.fixture
def service():
    return DocumentService()


def _text(doc):
    return json.dumps(doc)


class TestParsing:
    """解析与校验测试"""

    def test_json_syntax_error(self, service):
        with pytest.raises(DocumentError) as exc_info:
            service.parse_text("{", source="broken.json")
        assert "broken.json" in exc_info.value.message

    def test_schema_error_location(self, service):
        doc = json.loads(_text(A2_DOCUMENT))
        doc["modules"]["S1"]["index"] = -1
        with pytest.raises(DocumentError) as exc_info:
            service.parse_text(_text(doc))
        assert "modules" in exc_info.value.context["location"]

    def test_missing_file(self, service, tmp_path):
        with pytest.raises(DocumentError):
            service.parse_document(tmp_path / "absent.json")

    def test_digest(self, service):
        first = service.parse_text(_text(A2_DOCUMENT))
        second = service.parse_text(_text(A2_DOCUMENT))
        assert service.digest(first) == service.digest(second)
        changed = json.loads(_text(A2_DOCUMENT))
        changed["modules"].pop("X")
        assert service.digest(service.parse_text(_text(changed))) != service.digest(first)


class TestLoading:
    """对象构造测试"""

    def test_modules(self, service):
        loaded = service.load(service.parse_text(_text(A2_DOCUMENT)))
        assert loaded.algebra.dim == 3
        assert loaded.module("S1").dim == 1
        assert loaded.module("P1").dim == 2
        assert loaded.module("X").dim == 2
        assert loaded.field.label == "QQ"

    def test_field_override(self, service):
        loaded = service.load(service.parse_text(_text(A2_DOCUMENT)), Field.prime(7))
        assert loaded.field.label == "GF(7)"
        assert loaded.algebra.field == Field.prime(7)

    def test_index_out_of_range(self, service):
        doc = json.loads(_text(A2_DOCUMENT))
        doc["modules"]["S1"]["index"] = 5
        with pytest.raises(DocumentError):
            service.load(service.parse_text(_text(doc)))

    def test_missing_generator(self, service):
        doc = json.loads(_text(A2_DOCUMENT))
        del doc["modules"]["X"]["matrices"]["a"]
        with pytest.raises(DocumentError):
            service.load(service.parse_text(_text(doc)))

    def test_lookups(self, service):
        loaded = service.load(service.parse_text(_text(A2_DOCUMENT)))
        with pytest.raises(DocumentError):
            loaded.module("nope")
        with pytest.raises(DocumentError):
            loaded.require_context()

    def test_pierce_fixture(self, service):
        loaded = service.load(service.parse_document(FIXTURES / "ex5_1.json"))
        c = loaded.require_context()
        assert c.algebra.dim == 4
        assert loaded.pierce is not None
        assert loaded.pierce.iso().verify()

    def test_trivial_extension_fixture(self, service):
        loaded = service.load(service.parse_document(FIXTURES / "trivext_a2.json"))
        assert loaded.trivext is not None
        assert loaded.algebra.dim == 6
