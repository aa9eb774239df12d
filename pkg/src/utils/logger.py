"""
Structured logging for MoritaKit.

Reports own stdout, so every log record goes to stderr. When LOG_DIR is
set, records are also written to ``moritakit.log``, and errors to a
separate ``error.log``.
"""
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import structlog
from structlog.stdlib import LoggerFactory

from src.config.settings import settings

_configured = False

_FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _renderer() -> Any:
    if settings.debug:
        return structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())
    return structlog.processors.JSONRenderer(sort_keys=True)


def _file_handlers(directory: Path) -> List[logging.Handler]:
    directory.mkdir(parents=True, exist_ok=True)
    handlers: List[logging.Handler] = []
    for filename, level in (("moritakit.log", logging.INFO), ("error.log", logging.ERROR)):
        handler = logging.FileHandler(directory / filename, encoding="utf-8")
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(_FILE_FORMAT))
        handlers.append(handler)
    return handlers


def setup_logging(level: Optional[str] = None, log_dir: Optional[str] = None) -> None:
    """Configure structlog on top of stdlib logging. Later calls are no-ops."""
    global _configured
    if _configured:
        return
    level_name = (level or settings.log_level).upper()

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            _renderer(),
        ],
        context_class=dict,
        logger_factory=LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    root = logging.getLogger()
    root.setLevel(getattr(logging, level_name, logging.INFO))
    stderr = logging.StreamHandler(sys.stderr)
    stderr.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(stderr)

    directory = log_dir if log_dir is not None else settings.log_dir
    if directory:
        for handler in _file_handlers(Path(directory)):
            root.addHandler(handler)
    _configured = True


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    return structlog.get_logger(name)


def log_error(error: Exception, context: Optional[Dict[str, Any]] = None) -> None:
    """Log an unexpected exception together with its request or command context."""
    details = error.to_dict() if hasattr(error, "to_dict") else {}
    get_logger("error").error(
        "Unhandled error",
        error_type=type(error).__name__,
        error_message=str(error),
        details=details,
        context=context or {},
    )


def log_performance(operation: str, duration: float, **kwargs: Any) -> None:
    """Log a computation that exceeded SLOW_OPERATION_SECONDS."""
    get_logger("performance").warning(
        f"Slow computation: {operation}",
        duration_seconds=round(duration, 4),
        **kwargs,
    )
