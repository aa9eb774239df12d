"""
Tests for the command-line entry point.
"""
import json
import logging

import pytest

from src.cli import main
from src.config.settings import settings
from src.utils import logger as logger_module
from tests.conftest import FIXTURES


@pytest.fixture(autouse=True)
def quiet_logging(monkeypatch):
    """Let main() configure logging without writing log files."""
    monkeypatch.setattr(logger_module, "_configured", False)
    monkeypatch.setattr(settings, "log_dir", "")
    root = logging.getLogger()
    handlers = list(root.handlers)
    yield
    for handler in root.handlers[:]:
        if handler not in handlers:
            root.removeHandler(handler)


def test_json_report(capsys):
    code = main(["gldim", str(FIXTURES / "ex5_1.json"), "--cutoff", "16"])

    out = capsys.readouterr().out
    data = json.loads(out)
    assert code == 0
    assert data["command"] == "gldim"
    assert data["status"] == "ok"
    assert data["cutoff"] == 16


def test_text_report(capsys):
    code = main(["loewy", str(FIXTURES / "ex5_1.json"), "--text"])

    out = capsys.readouterr().out
    assert code == 0
    assert 'command: "loewy"' in out.splitlines()


def test_document_required():
    with pytest.raises(SystemExit) as exc_info:
        main(["gldim"])
    assert exc_info.value.code == 2


@pytest.mark.parametrize("flag", ["--cutoff", "--window"])
def test_positive_flags(flag):
    with pytest.raises(SystemExit):
        main(["gldim", str(FIXTURES / "ex5_1.json"), flag, "0"])


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate", str(FIXTURES / "ex5_1.json")])


def test_missing_file_reports_error(capsys, tmp_path):
    code = main(["gldim", str(tmp_path / "absent.json")])

    data = json.loads(capsys.readouterr().out)
    assert code == 1
    assert data["status"] == "error"


def test_bad_prime(capsys):
    code = main(["gldim", str(FIXTURES / "ex5_1.json"), "--field", "prime", "--prime", "4"])

    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == ""


def test_prime_field(capsys):
    code = main(["gldim", str(FIXTURES / "ex5_1.json"), "--prime", "5", "--cutoff", "16"])

    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["field"] == "GF(5)"


def test_examples_empty_directory(capsys, tmp_path):
    code = main(["examples", "--fixtures", str(tmp_path)])

    assert code == 1
    assert capsys.readouterr().out == ""


def test_metrics_go_to_stderr(capsys):
    main(["loewy", str(FIXTURES / "ex5_1.json"), "--metrics"])

    captured = capsys.readouterr()
    json.loads(captured.out)
    assert "command:loewy" in captured.err
