"""
Run Storage

Run-directory layout and artifact writing for experiments.
"""

import hashlib
import logging
from pathlib import Path
from typing import Optional

import orjson
import pandas as pd
from pydantic import BaseModel

from tactile.config import get_settings

logger = logging.getLogger(__name__)

SNAPSHOT_NAME = "config.snapshot"
RESULTS_NAME = "results.csv"


def canonical_json(model: BaseModel) -> bytes:
    """Sorted-key JSON of a validated config."""
    return orjson.dumps(model.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS)


def config_hash(model: BaseModel) -> str:
    """SHA-256 hex digest of the canonical config JSON."""
    return hashlib.sha256(canonical_json(model)).hexdigest()


class RunStorage:
    """Manages the directory and files of one experiment run."""

    def __init__(self, kind: str, cfg_hash: str, base_path: Optional[str] = None):
        self.settings = get_settings()
        self.kind = kind
        self.config_hash = cfg_hash
        self.base_path = Path(base_path or self.settings.output_base_path)

    @property
    def run_dir(self) -> Path:
        """
        Directory of this run, named after the kind and the config hash.

        Creates the directory if it doesn't exist.
        """
        dir_path = self.base_path / f"{self.kind}-{self.config_hash[:12]}"
        dir_path.mkdir(parents=True, exist_ok=True)
        return dir_path

    def path(self, relative: str) -> Path:
        """
        Get full path for an artifact, creating parent directories.

        Args:
            relative: Path relative to the run directory

        Returns:
            Full path to the artifact
        """
        file_path = self.run_dir / relative
        file_path.parent.mkdir(parents=True, exist_ok=True)
        return file_path

    def _write_bytes(self, file_path: Path, payload: bytes) -> Path:
        """Write atomically using a temp file."""
        temp_path = file_path.with_suffix(file_path.suffix + ".tmp")
        try:
            temp_path.write_bytes(payload)
            temp_path.replace(file_path)
        except Exception:
            if temp_path.exists():
                temp_path.unlink()
            raise
        return file_path

    def write_snapshot(self, cfg: BaseModel) -> Path:
        """Write the validated config the run was started with."""
        payload = orjson.dumps(
            cfg.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2
        )
        return self._write_bytes(self.path(SNAPSHOT_NAME), payload)

    def write_json(self, relative: str, data: dict) -> Path:
        payload = orjson.dumps(data, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)
        return self._write_bytes(self.path(relative), payload)

    def write_csv(self, frame: pd.DataFrame, relative: str = RESULTS_NAME) -> Path:
        """
        Write a table with a trailing config_hash column.

        Args:
            frame: Rows to write
            relative: Path relative to the run directory

        Returns:
            Path to the CSV file
        """
        table = frame.copy()
        table["config_hash"] = self.config_hash
        payload = table.to_csv(index=False, float_format="%.10g", lineterminator="\n")
        file_path = self._write_bytes(self.path(relative), payload.encode("utf-8"))
        logger.debug(f"Wrote {len(table)} rows to {file_path}")
        return file_path
