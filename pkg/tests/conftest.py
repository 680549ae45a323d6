"""Shared fixtures: isolated settings and ready-made scheme configs."""

import pytest

from src.core.config import reset_settings
from src.schemes import SchemeConfig


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Keep log files out of the working tree and start each test from fresh settings."""
    monkeypatch.setenv("LOG_TO_FILE", "false")
    monkeypatch.setenv("OUTPUT_ROOT_DIR", str(tmp_path))
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def example2_config() -> SchemeConfig:
    return SchemeConfig(family="standard", construction="example2", n=6, d=2, counter_bits=3)


@pytest.fixture
def onebit16_config() -> SchemeConfig:
    return SchemeConfig(family="standard-indel", construction="all-cols+1", n=16, d=3, counter_bits=1)


@pytest.fixture
def twobit16_config() -> SchemeConfig:
    return SchemeConfig(family="standard-indel", construction="all-cols+1", n=16, d=3, counter_bits=2)


@pytest.fixture
def bchbin15_config() -> SchemeConfig:
    return SchemeConfig(family="standard-indel", construction="bch-bin+1", n=15, d=4, counter_bits=2)


@pytest.fixture
def bch15_config() -> SchemeConfig:
    return SchemeConfig(family="general", construction="bch-gf", n=15, d=2, r=4)
