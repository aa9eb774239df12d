"""
Command-line entry point: ``moritakit <command> <document> [flags]``.

Reports go to stdout as JSON (default) or flattened text; logs and the
optional metrics summary go to stderr. The exit code is 0 when every check
holds, 1 on a violated check or an error, 2 when a check stays undecided.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from src.config.settings import settings
from src.core.exactla import Field
from src.core.exceptions import MoritaKitError
from src.services import ReportService, RunFlags
from src.services.report_service import COMMANDS
from src.utils.logger import get_logger, setup_logging
from src.utils.performance import performance_monitor


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="moritakit",
        description="Exact computations over Morita rings of finite-dimensional algebras.",
        epilog="commands: " + ", ".join(COMMANDS),
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="what to compute")
    parser.add_argument("document", nargs="?", type=Path, help="JSON input document")
    parser.add_argument("--cutoff", type=int, help=f"resolution cutoff (default {settings.default_cutoff})")
    parser.add_argument("--depth", type=int, help="resolution depth or word length")
    parser.add_argument("--window", type=int, help="Ext window for Gorenstein-projective tests")
    parser.add_argument("--theorem", help="5.9 | 5.14:<variant|all>:<s> | 5.17 | bel | trivext")
    parser.add_argument("--module", help="restrict to one named module")
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    output.add_argument("--text", dest="fmt", action="store_const", const="text", help="flattened text report")
    parser.add_argument("--field", choices=("rational", "prime"), help="override the document's field")
    parser.add_argument("--prime", type=int, help=f"characteristic for --field prime (default {settings.field_prime})")
    parser.add_argument("--fixtures", type=Path, help="example corpus directory")
    parser.add_argument("--metrics", action="store_true", help="print timing summary to stderr")
    parser.add_argument("--log-level", help="override LOG_LEVEL")
    args = parser.parse_args(argv)
    if args.command != "examples" and args.document is None:
        parser.error(f"{args.command} requires a document")
    for name in ("cutoff", "window"):
        value = getattr(args, name)
        if value is not None and value < 1:
            parser.error(f"--{name} must be at least 1")
    if args.depth is not None and args.depth < 0:
        parser.error("--depth must be non-negative")
    return args


def _field_override(args: argparse.Namespace) -> Optional[Field]:
    if args.field == "rational":
        return Field.rational()
    if args.field == "prime" or args.prime is not None:
        return Field.prime(args.prime or settings.field_prime)
    return None


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    setup_logging(level=args.log_level)
    logger = get_logger("cli")
    service = ReportService()
    flags = RunFlags(
        cutoff=args.cutoff,
        depth=args.depth,
        window=args.window,
        theorem=args.theorem,
        module=args.module,
    )
    try:
        field = _field_override(args)
        if args.command == "examples":
            report = service.examples_corpus(args.fixtures or args.document, flags)
        else:
            report = service.run_path(args.command, args.document, flags, field)
    except MoritaKitError as e:
        logger.error("Command failed", command=args.command, error=e.to_dict())
        print(e.message, file=sys.stderr)
        return 1

    rendered = service.render_text(report) if args.fmt == "text" else service.render_json(report)
    print(rendered)
    if args.metrics:
        for line in performance_monitor.summary_lines():
            print(line, file=sys.stderr)
    logger.info("Command finished", command=args.command, status=report.status)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
