"""Shared plumbing of the ir2vi management commands.

Exit codes::

    0  success
    1  unexpected error
    2  usage error (bad flags)
    3  configuration failed validation
    4  checkpoint missing or unreadable
    5  malformed manifest
    6  data or I/O failure
    7  non-finite loss during training
"""

from django.core.management.base import BaseCommand, CommandError

from ir2vi.exceptions import (
    CheckpointError,
    ConfigError,
    IR2VIError,
    ManifestError,
    NonFiniteLossError,
)
from ir2vi.logging_config import logger, setup_logging
from ir2vi.run_config import RunConfig, load_run_config, parse_override

# Most specific first
EXIT_CODES: list[tuple[type[BaseException], int]] = [
    (ConfigError, 3),
    (CheckpointError, 4),
    (ManifestError, 5),
    (NonFiniteLossError, 7),
    (IR2VIError, 6),
    (OSError, 6),
]


def exit_code_for(exc: BaseException) -> int:
    for kind, code in EXIT_CODES:
        if isinstance(exc, kind):
            return code
    return 1


class IR2VICommand(BaseCommand):
    """Adds logging flags and maps ir2vi errors to documented exit codes."""

    uses_run_config = True

    def add_arguments(self, parser) -> None:
        if self.uses_run_config:
            parser.add_argument(
                "--config",
                "--profile",
                dest="config",
                default=None,
                help="Registered profile name or JSON config file (default: published)",
            )
            parser.add_argument(
                "--set",
                dest="overrides",
                action="append",
                default=[],
                metavar="SECTION.KEY=VALUE",
                help="Override one config value; repeatable, wins over the file",
            )
        parser.add_argument("--log-level", default="INFO")
        parser.add_argument("--no-log-file", action="store_true", help="Log to stderr only")

    def run_config(self, options: dict, extra: dict | None = None) -> RunConfig:
        overrides = dict(parse_override(text) for text in options.get("overrides") or [])
        overrides |= extra or {}
        return load_run_config(options.get("config"), overrides)

    def handle(self, *args, **options):
        setup_logging(level=options["log_level"].upper(), log_file=not options["no_log_file"])
        try:
            return self.run(**options)
        except CommandError:
            raise
        except Exception as exc:
            code = exit_code_for(exc)
            if code == 1:
                logger.exception(f"{self.__module__.rsplit('.', 1)[-1]} failed")
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=code) from exc

    def run(self, **options):
        raise NotImplementedError
