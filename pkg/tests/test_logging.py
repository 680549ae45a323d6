"""Tests for logging setup."""

import logging

from src.core.config import reset_settings
from src.core.logging import get_logger, setup_logging


def test_file_logging(monkeypatch, tmp_path):
    monkeypatch.setenv("LOG_TO_FILE", "true")
    reset_settings()
    setup_logging("DEBUG")

    get_logger("src.test").error("table corrupted")
    for handler in logging.getLogger().handlers:
        handler.flush()

    assert "table corrupted" in (tmp_path / "logs" / "app.log").read_text()
    assert "table corrupted" in (tmp_path / "logs" / "errors.log").read_text()


def test_level_override(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "WARNING")
    reset_settings()
    setup_logging()
    assert logging.getLogger().level == logging.WARNING
    setup_logging("debug")
    assert logging.getLogger().level == logging.DEBUG
