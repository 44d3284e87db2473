import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from loguru import logger

from ir2vi.django_settings import IR2VI_DATA_ROOT

# Workspace-wide rotating log under <workspace>/data/ir2vi.log.
# Every training / evaluation run also keeps its own log in its output dir.
LOG_FILE = IR2VI_DATA_ROOT / "ir2vi.log"

STDERR_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<magenta>{extra[run]}</magenta> | "
    "<cyan>{module}</cyan>:<cyan>{function}</cyan> - {message}"
)
FILE_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[run]} | "
    "{module}:{function}:{line} - {message}"
)

# Lines logged outside of a run carry "-" as their run tag
logger.configure(extra={"run": "-"})


@dataclass
class Stopwatch:
    elapsed: float = 0.0


@contextmanager
def timed(label: str, level: str = "DEBUG"):
    """Log how long a block of code takes.

    Usage::

        with timed("epoch 3") as clock:
            run_epoch()
        clock.elapsed  # seconds, once the block is done

    Emits a single log line like ``"epoch 3 took 1.23s"``.
    """
    clock = Stopwatch()
    start = time.perf_counter()
    try:
        yield clock
    finally:
        clock.elapsed = time.perf_counter() - start
        logger.log(level, f"{label} took {clock.elapsed:.2f}s")


def setup_logging(
    *,
    level: str = "DEBUG",
    log_file: bool = True,
) -> None:
    """Configure the stderr and workspace-file loguru handlers."""
    logger.remove()
    logger.add(sys.stderr, level=level, format=STDERR_FORMAT)

    if log_file:
        LOG_FILE.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            str(LOG_FILE),
            level=level,
            rotation="10 MB",
            retention=5,
            enqueue=True,
            format=FILE_FORMAT,
        )


@contextmanager
def run_log(run_dir: Path, run: str, filename: str, level: str = "DEBUG"):
    """Tag every line with ``run`` and copy it to ``run_dir/filename`` while the block runs."""
    path = Path(run_dir) / filename
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logger.add(str(path), level=level, format=FILE_FORMAT)
    try:
        with logger.contextualize(run=run):
            yield path
    finally:
        logger.remove(handler)
