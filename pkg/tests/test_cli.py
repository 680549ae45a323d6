"""Tests for CLI interface."""

import io
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from src.cli import cli, parse_ops
from src.core.config import reset_settings
from src.core.errors import OpsStreamError

EXAMPLE2 = {"family": "standard", "construction": "example2", "n": 6, "d": 2, "counter_bits": 3}
ONEBIT16 = {"family": "standard-indel", "construction": "all-cols+1", "n": 16, "d": 3, "counter_bits": 1}
BCH15 = {"family": "general", "construction": "bch-gf", "n": 15, "d": 2, "r": 4}


@pytest.fixture
def runner():
    return CliRunner()


def write_config(tmp_path, name, data):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.fixture
def example2_table(tmp_path, runner):
    """Example 2 scheme built into tmp_path; returns the table path."""
    config = write_config(tmp_path, "example2", EXAMPLE2)
    result = runner.invoke(cli, ["build", "--config", str(config)])
    assert result.exit_code == 0, result.output
    return tmp_path / "example2.iblt"


def test_cli_help(runner):
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "IBLT schemes" in result.output


def test_cli_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "0.1.0" in result.output


def test_parse_ops():
    stream = io.StringIO("I 1\n\nD 3\n")
    assert parse_ops(stream) == [(1, "I", 1), (3, "D", 3)]


@pytest.mark.parametrize("line", ["X 1", "I", "I one", "I 1 2"])
def test_parse_ops_rejects(line):
    with pytest.raises(OpsStreamError) as exc:
        parse_ops(io.StringIO(f"I 2\n{line}\n"))
    assert exc.value.line_number == 2


class TestBuild:
    def test_prints_shape(self, runner, tmp_path):
        config = write_config(tmp_path, "onebit16", ONEBIT16)
        result = runner.invoke(cli, ["build", "--config", str(config)])
        assert result.exit_code == 0
        assert result.stdout.strip() == "m=5 b=5 s=25"
        assert (tmp_path / "onebit16.iblt").exists()

    def test_staircase_shape(self, runner, tmp_path):
        config = write_config(tmp_path, "h2", {"family": "general", "construction": "h2", "n": 256, "d": 4, "r": 8})
        result = runner.invoke(cli, ["build", "--config", str(config)])
        assert result.exit_code == 0
        assert result.stdout.startswith("m=19 ")

    def test_descriptor_written_next_to_custom_table(self, runner, tmp_path):
        config = write_config(tmp_path, "bch15", BCH15)
        table = tmp_path / "out" / "t.iblt"
        result = runner.invoke(cli, ["build", "--config", str(config), "--table", str(table)])
        assert result.exit_code == 0
        assert json.loads((tmp_path / "out" / "t.json").read_text())["construction"] == "bch-gf"

    def test_invalid_config_exits_64(self, runner, tmp_path):
        config = write_config(tmp_path, "bad", {**EXAMPLE2, "counter_bits": 1})
        result = runner.invoke(cli, ["build", "--config", str(config)])
        assert result.exit_code == 64

    def test_missing_config_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(cli, ["build", "--config", str(tmp_path / "absent.json")])
        assert result.exit_code == 64


class TestApplyAndList:
    def test_example2_counters(self, runner, example2_table):
        result = runner.invoke(cli, ["apply", "--table", str(example2_table)], input="I 1\nI 3\nI 4\n")
        assert result.exit_code == 0, result.output

        shown = runner.invoke(cli, ["show", "--config", str(example2_table.with_suffix(".json")), "--table", str(example2_table)])
        assert shown.exit_code == 0
        assert "counts: 2 1 2 0 1" in shown.stdout

    def test_list_after_apply(self, runner, example2_table):
        runner.invoke(cli, ["apply", "--table", str(example2_table)], input="I 6\nI 2\n")
        result = runner.invoke(cli, ["list", "--table", str(example2_table)])
        assert result.exit_code == 0
        assert result.stdout.strip() == "2 6"

    def test_list_empty_table(self, runner, example2_table):
        result = runner.invoke(cli, ["list", "--table", str(example2_table)])
        assert result.exit_code == 0
        assert result.stdout == ""

    def test_list_failure(self, runner, example2_table):
        runner.invoke(cli, ["apply", "--table", str(example2_table)], input="I 1\nI 2\nI 4\nI 5\n")
        result = runner.invoke(cli, ["list", "--table", str(example2_table)])
        assert result.exit_code == 1
        assert result.stdout.strip() == "FAIL"

    def test_bad_line_leaves_table_untouched(self, runner, example2_table):
        before = example2_table.read_bytes()
        result = runner.invoke(cli, ["apply", "--table", str(example2_table)], input="I 1\nI 9\n")
        assert result.exit_code == 64
        assert "line 2" in result.output
        assert example2_table.read_bytes() == before

    def test_interrupted_write_leaves_table_untouched(self, runner, example2_table, monkeypatch):
        before = example2_table.read_bytes()
        real_write = Path.write_bytes

        def write_half(self, data):
            real_write(self, data[: len(data) // 2])
            raise OSError("disk full")

        monkeypatch.setattr(Path, "write_bytes", write_half)
        result = runner.invoke(cli, ["apply", "--table", str(example2_table)], input="I 1\nI 3\n")
        assert result.exit_code == 64
        assert example2_table.read_bytes() == before

    def test_ops_from_file(self, runner, example2_table, tmp_path):
        ops = tmp_path / "ops.txt"
        ops.write_text("I 3\nI 5\nD 3\n")
        runner.invoke(cli, ["apply", "--table", str(example2_table), "--ops", str(ops)])
        result = runner.invoke(cli, ["list", "--table", str(example2_table), "--algorithm", "oracle"])
        assert result.stdout.strip() == "5"

    def test_incompatible_algorithm(self, runner, example2_table):
        result = runner.invoke(cli, ["list", "--table", str(example2_table), "--algorithm", "pgz"])
        assert result.exit_code == 64

    def test_unknown_algorithm_is_usage_error(self, runner, example2_table):
        result = runner.invoke(cli, ["list", "--table", str(example2_table), "--algorithm", "magic"])
        assert result.exit_code == 64


class TestVerify:
    def test_pass(self, runner, tmp_path):
        config = write_config(tmp_path, "bch15", BCH15)
        result = runner.invoke(cli, ["verify", "--config", str(config), "--property", "uniqueness", "--out", "json"])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["verdict"] == "pass"
        assert report["instances"] == 121

    def test_counterexample_exit_code(self, runner, tmp_path):
        config = write_config(tmp_path, "example2", EXAMPLE2)
        result = runner.invoke(cli, ["verify", "--config", str(config), "--property", "listing", "--d", "4", "--algorithm", "peel"])
        assert result.exit_code == 2
        assert "counterexample: {1, 2, 4, 5}" in result.stdout

    def test_budget_refusal(self, runner, tmp_path):
        config = write_config(tmp_path, "onebit16", ONEBIT16)
        result = runner.invoke(cli, ["verify", "--config", str(config), "--budget", "10", "--out", "json"])
        assert result.exit_code == 3

    def test_budget_from_environment(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("IBLT_BUDGET", "10")
        reset_settings()
        config = write_config(tmp_path, "onebit16", ONEBIT16)
        result = runner.invoke(cli, ["verify", "--config", str(config), "--out", "json"])
        assert result.exit_code == 3

    def test_distance_text_report(self, runner, tmp_path):
        config = write_config(tmp_path, "onebit16", ONEBIT16)
        result = runner.invoke(cli, ["verify", "--config", str(config), "--property", "distance"])
        assert result.exit_code == 0
        assert "distance=4" in result.stdout

    def test_bh_on_binary_scheme_is_usage_error(self, runner, tmp_path):
        config = write_config(tmp_path, "onebit16", ONEBIT16)
        result = runner.invoke(cli, ["verify", "--config", str(config), "--property", "bh"])
        assert result.exit_code == 64

    def test_unknown_property(self, runner, tmp_path):
        config = write_config(tmp_path, "onebit16", ONEBIT16)
        result = runner.invoke(cli, ["verify", "--config", str(config), "--property", "speed"])
        assert result.exit_code == 64


class TestBoundsAndBench:
    def test_bounds_json(self, runner):
        result = runner.invoke(cli, ["bounds", "--n", "16", "--d", "3", "--family", "standard-indel", "--out", "json"])
        assert result.exit_code == 0
        rows = {row["source"]: row["value"] for row in json.loads(result.stdout)}
        assert rows["indel-d3-onebit"] == 25.0
        assert rows["indel-d3-xpeel"] == 30.0

    def test_bounds_text(self, runner):
        result = runner.invoke(cli, ["bounds", "--n", "256", "--d", "4", "--k", "2"])
        assert result.exit_code == 0
        assert "entropy" in result.output

    def test_bench_json(self, runner, tmp_path):
        config = write_config(tmp_path, "bch15", BCH15)
        result = runner.invoke(cli, ["bench", "--config", str(config), "--workload", "10", "--out", "json"])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["size_bits"] == 8
        assert report["list_successes"] == 10

    def test_show_matrix(self, runner, tmp_path):
        config = write_config(tmp_path, "example2", EXAMPLE2)
        result = runner.invoke(cli, ["show", "--config", str(config)])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == "1 1 1 0 0 0"
