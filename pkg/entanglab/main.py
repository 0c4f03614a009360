"""Command-line entry point: ``entanglab <subcommand> --config <path>``."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from entanglab import __version__
from entanglab.core.config import settings
from entanglab.core.errors import AuditFailure, ConfigError, EntanglabError
from entanglab.core.logging import configure_logging
from entanglab.schemas import AuditReport, ExperimentConfig
from entanglab.services import AuditService, GroundStateService, ModelService, OracleService, ScanService

logger = logging.getLogger("entanglab")

SUBCOMMANDS = {
    "ground": "solve or build the state and persist it",
    "entropy-scan": "entanglement entropy over block families",
    "buffer-scan": "decoupling sweep over buffer widths",
    "mutual-info": "mutual information against block separation",
    "audit": "full inequality suite",
    "oracle": "brute-force cross-checks on small windows",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entanglab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"entanglab {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    for name, help_text in SUBCOMMANDS.items():
        command = commands.add_parser(name, help=help_text)
        command.add_argument("--config", required=True, type=Path, help="experiment config (JSON)")
        command.add_argument("--out-dir", type=Path, default=None, help="output directory (default: config out_dir)")
        command.add_argument("--threads", type=int, default=None, help="worker threads (default: ENTANGLAB_THREADS)")
        command.add_argument("--seed", type=int, default=None, help="override the config seed")
        command.add_argument("--log-level", default=settings.LOG_LEVEL, help="logging level (default: %(default)s)")
    return parser


def _field_path(loc: Sequence) -> str:
    return ".".join(str(part) for part in loc) or "config"


def load_config(path: Path, command: str, seed: Optional[int] = None) -> ExperimentConfig:
    """Read and validate a config; every failure becomes a ConfigError naming the line or field."""
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    if data.get("experiment") not in (None, command):
        logger.warning("config names experiment %r, running %r", data["experiment"], command)
    data["experiment"] = command
    if seed is not None:
        data["seed"] = seed
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        problems = "; ".join(f"{_field_path(error['loc'])}: {error['msg']}" for error in exc.errors())
        raise ConfigError(f"{path}: {problems}") from exc


def run(args: argparse.Namespace) -> list[Path]:
    config = load_config(args.config, args.command, args.seed)
    threads = args.threads if args.threads is not None else settings.THREADS
    if threads < 1:
        raise ConfigError(f"--threads must be at least 1, got {threads}")
    out_dir = args.out_dir or Path(config.out_dir)
    models = ModelService(config, threads)
    header = models.header(__version__)
    reports: list[AuditReport] = []
    if args.command == "ground":
        paths = GroundStateService(models, out_dir, header).run()
    elif args.command == "entropy-scan":
        paths = ScanService(models, out_dir, header).entropy_scan()
    elif args.command == "buffer-scan":
        paths, reports = ScanService(models, out_dir, header).buffer_scan()
    elif args.command == "mutual-info":
        paths, reports = ScanService(models, out_dir, header).mutual_info()
    elif args.command == "audit":
        paths, reports = AuditService(models, out_dir, header).run()
    else:
        paths, reports = OracleService(models, out_dir, header).run()
    for path in paths:
        print(path)
    failed = sorted({report.inequality for report in reports if report.failed})
    if failed:
        count = sum(report.failed for report in reports)
        raise AuditFailure(f"{count} audit(s) failed: {', '.join(failed)}")
    return paths


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        run(args)
    except EntanglabError as exc:
        logger.error("%s", exc.detail)
        return exc.exit_code
    except Exception:
        logger.exception("unexpected failure")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
