"""
Tests for logging functionality.
"""
import pytest
import logging
from pathlib import Path
from src.utils import logger as logger_module
from src.core.exceptions import DocumentError
from src.utils.logger import setup_logging, get_logger, log_error, log_performance


@pytest.fixture
def fresh_logging(monkeypatch):
    """Allow setup_logging to run again inside a test."""
    monkeypatch.setattr(logger_module, "_configured", False)
    root = logging.getLogger()
    handlers = list(root.handlers)
    yield
    for handler in root.handlers[:]:
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()


def test_setup_logging(fresh_logging, tmp_path):
    """Test logging setup."""
    setup_logging(log_dir=str(tmp_path / "logs"))

    assert (tmp_path / "logs").exists()

    logger = get_logger("test")
    assert logger is not None


def test_setup_logging_without_files(fresh_logging, tmp_path, monkeypatch):
    """Test that an empty log directory disables the file handlers."""
    monkeypatch.chdir(tmp_path)
    setup_logging(log_dir="")

    assert not Path("logs").exists()


def test_setup_logging_is_idempotent(fresh_logging, tmp_path):
    """Test that a second call adds no handlers."""
    setup_logging(log_dir=str(tmp_path))
    count = len(logging.getLogger().handlers)
    setup_logging(log_dir=str(tmp_path))

    assert len(logging.getLogger().handlers) == count


def test_log_error():
    """Test error logging function."""
    try:
        raise ValueError("Test error")
    except ValueError as e:
        log_error(e, {"context": "test"})


def test_log_performance():
    """Test performance logging function."""
    log_performance("minimal_resolution", 1.5, slow=True)


def test_get_logger():
    """Test logger retrieval."""
    logger1 = get_logger("test1")
    logger2 = get_logger("test2")
    logger3 = get_logger("test1")

    assert logger1 is not None
    assert logger2 is not None
    assert logger1._context == logger3._context


def test_errors_reach_error_log(fresh_logging, tmp_path):
    """Test that errors land in error.log and info records do not."""
    setup_logging(log_dir=str(tmp_path))
    logging.getLogger("src.test").info("resolution step")
    try:
        raise DocumentError("broken document", location="modules.S")
    except DocumentError as e:
        log_error(e, {"command": "gldim"})

    for handler in logging.getLogger().handlers:
        handler.flush()
    error_log = (tmp_path / "error.log").read_text(encoding="utf-8")
    assert "broken document" in error_log
    assert "resolution step" not in error_log
    assert "resolution step" in (tmp_path / "moritakit.log").read_text(encoding="utf-8")
