import csv
import json
import logging
import os
import tempfile
from datetime import datetime
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Union

from pydantic import BaseModel

from core.errors import IOFailure

logger = logging.getLogger(__name__)

TIMESTAMP_FORMAT = "%Y%m%dT%H%M%S"


def format_value(value: Any) -> str:
    """CSV cell text; floats keep 17 significant digits and never depend on the locale."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


class ArtifactWriter:
    """Writes ``<output_dir>/<name>-<timestamp>.<ext>`` files via temp file and rename."""

    def __init__(self, output_dir: Union[str, Path], stamp: Optional[str] = None):
        self.output_dir = Path(output_dir)
        self.stamp = stamp or datetime.now().strftime(TIMESTAMP_FORMAT)
        self.written: List[Path] = []

    def path(self, name: str, ext: str) -> Path:
        return self.output_dir / f"{name}-{self.stamp}.{ext}"

    def _atomic_write(self, path: Path, write) -> Path:
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.output_dir, prefix=f".{path.name}.", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                    write(handle)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as e:
            logger.error(f"Failed to write {path}: {str(e)}")
            raise IOFailure(f"Cannot write report {path}: {e}", {"path": str(path)}) from e
        self.written.append(path)
        logger.info(f"Wrote {path}")
        return path

    def write_json(self, name: str, document: Union[BaseModel, dict]) -> Path:
        if isinstance(document, BaseModel):
            text = document.model_dump_json(indent=2)
        else:
            text = json.dumps(document, indent=2)
        return self._atomic_write(self.path(name, "json"), lambda handle: handle.write(text + "\n"))

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        def write(handle):
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(v) for v in row])

        return self._atomic_write(self.path(name, "csv"), write)
