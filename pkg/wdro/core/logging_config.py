import logging
import sys
from pathlib import Path
from typing import Optional

from wdro.core.config import settings


def configure_logging(level: Optional[str] = None) -> None:
    """Log to stderr with the package format; replaces earlier handlers."""
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def attach_run_log(out_dir: Path) -> Path:
    """Also write the log stream to <out_dir>/run.log (timestamps stay out of artifacts)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / settings.LOG_FILENAME
    root = logging.getLogger()
    for handler in root.handlers:
        if isinstance(handler, logging.FileHandler) and Path(handler.baseFilename) == path.resolve():
            return path
    handler = logging.FileHandler(path, mode="w")
    handler.setFormatter(logging.Formatter(settings.LOG_FORMAT))
    root.addHandler(handler)
    return path
