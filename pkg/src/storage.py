"""Scheme config files (JSON) and serialized table files.

A scheme config file looks like:

    {
      "version": 1,
      "family": "standard-indel",
      "construction": "all-cols+1",
      "n": 16,
      "d": 3,
      "counter_bits": 1
    }

Table files start with the magic bytes ``IBLT1`` followed by the canonical
cell layout of `src.schemes.to_bytes`.
"""

import inspect
import json
import logging
from pathlib import Path
from typing import Literal

from pydantic import ValidationError

from src.core.errors import ConfigError, TableFormatError
from src.schemes import SchemeConfig, Table, from_bytes, to_bytes

logger = logging.getLogger(__name__)

TABLE_MAGIC = b"IBLT1"
CONFIG_VERSION = 1


class SchemeConfigFile(SchemeConfig):
    """On-disk form of a SchemeConfig: the same fields plus a format version."""

    version: Literal[1] = CONFIG_VERSION

    def to_config(self) -> SchemeConfig:
        return SchemeConfig(**self.model_dump(exclude={"version"}))

    @classmethod
    def from_config(cls, config: SchemeConfig) -> "SchemeConfigFile":
        return cls(**config.model_dump())


def parse_config(text: str) -> SchemeConfig:
    """Parse and validate a scheme config document.

    Raises:
        ConfigError: On malformed JSON, unknown fields or an invalid combination.
    """
    try:
        model = SchemeConfigFile.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(f"Invalid scheme config: {e}") from e
    return model.to_config()


def load_config(path: Path) -> SchemeConfig:
    logger.debug(f" * {inspect.currentframe().f_code.co_name} > Loading scheme config: {path}")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    return parse_config(text)


def dump_config(config: SchemeConfig) -> str:
    data = SchemeConfigFile.from_config(config).model_dump(mode="json", exclude_none=True)
    return json.dumps(data, indent=2) + "\n"


def _write_atomic(path: Path, data: bytes) -> None:
    """Write through a sibling temp file so `path` is either old or new, never partial."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_bytes(data)
        tmp.replace(path)
    except OSError:
        tmp.unlink(missing_ok=True)
        raise


def save_config(config: SchemeConfig, path: Path) -> Path:
    path = Path(path)
    try:
        _write_atomic(path, dump_config(config).encode("utf-8"))
    except OSError as e:
        raise ConfigError(f"Cannot write config {path}: {e}") from e
    logger.debug(f"    -> Saved scheme config to {path}")
    return path


def encode_table(table: Table) -> bytes:
    return TABLE_MAGIC + to_bytes(table)


def decode_table(config: SchemeConfig, data: bytes) -> Table:
    """Parse table file contents for the given scheme.

    Raises:
        TableFormatError: On a missing magic header or a size mismatch.
    """
    if not data.startswith(TABLE_MAGIC):
        raise TableFormatError("Not a table file (missing IBLT1 header)")
    return from_bytes(config, data[len(TABLE_MAGIC) :])


def save_table(table: Table, path: Path) -> Path:
    path = Path(path)
    try:
        _write_atomic(path, encode_table(table))
    except OSError as e:
        raise TableFormatError(f"Cannot write table {path}: {e}") from e
    logger.debug(f"    -> Saved {len(table.counts)}-cell table to {path}")
    return path


def load_table(config: SchemeConfig, path: Path) -> Table:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise TableFormatError(f"Cannot read table {path}: {e}") from e
    return decode_table(config, data)


def descriptor_path(table_path: Path) -> Path:
    """Scheme config stored next to a table file (same stem, .json suffix)."""
    return Path(table_path).with_suffix(".json")
