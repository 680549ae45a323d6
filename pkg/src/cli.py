"""IBLT schemes CLI - build tables, run insert/delete sessions, list, verify and benchmark.

This module provides the command-line front end for the schemes library. Scheme
config files are JSON documents (see `src.storage`); tables are binary files
starting with the ``IBLT1`` magic, stored next to a copy of their config
(same stem, ``.json`` suffix).

Features:
- Build any shipped construction and report its exact size s(T) = m*b
- Apply insert/delete streams ("I <u>" / "D <u>", one per line)
- List a table with any compatible listing algorithm
- Exhaustively verify uniqueness, listing, B_h and distance properties
- Print the bound formulas applicable to (n, d, k)
- Benchmark insert/delete/list timings against table size

Exit codes:
    0   success / verification passed
    1   listing failure (FAIL)
    2   verification found a counterexample
    3   check refused because it exceeds the enumeration budget
    64  usage, config or construction error

Basic Usage:
    # Build a scheme and its empty table
    uv run iblt build --config schemes/onebit16.json

    # Insert elements and list them back
    printf "I 1\\nI 3\\nI 4\\n" | uv run iblt apply --table schemes/onebit16.iblt
    uv run iblt list --table schemes/onebit16.iblt

    # Exhaustive listing check with a JSON report
    uv run iblt verify --config schemes/bch15.json --property listing --out json

    # Bounds for n=256, d=4, k=2
    uv run iblt bounds --n 256 --d 4 --k 2
"""

import json
from dataclasses import asdict
from pathlib import Path
from typing import TextIO

import click
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.table import Table as RichTable

from src import __version__
from src.bench import run_benchmark
from src.core.config import get_settings
from src.core.errors import BudgetExceededError, IbltError, OpsStreamError
from src.core.logging import setup_logging
from src.listing import ALGORITHMS, default_algorithm, list_table
from src.schemes import Family, SchemeConfig, Table, build_scheme, size_bits
from src.storage import descriptor_path, load_config, load_table, save_config, save_table
from src.verify import (
    VerifyReport,
    bounds_table,
    check_bh,
    check_distance,
    check_listing,
    check_state_uniqueness,
)

console = Console()

EXIT_LIST_FAILURE = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64

PROPERTIES = ("uniqueness", "listing", "bh", "distance")
MATRIX_DISPLAY_MAX_COLUMNS = 64


class IbltGroup(click.Group):
    """Command group reporting usage errors with exit code 64."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise


def _fail(error: Exception) -> None:
    """Print a library error and exit with its code."""
    if isinstance(error, BudgetExceededError):
        console.print(f"[yellow]Refused:[/yellow] {error}")
        raise SystemExit(EXIT_BUDGET)
    console.print(f"[red]Error:[/red] {error}")
    raise SystemExit(EXIT_USAGE)


def _load_scheme(table_path: Path, config_path: Path | None) -> tuple[SchemeConfig, Table]:
    config = load_config(config_path or descriptor_path(table_path))
    return config, load_table(config, table_path)


def parse_ops(stream: TextIO) -> list[tuple[int, str, int]]:
    """Parse an operation stream into (line number, op, element) triples.

    Blank lines are skipped.

    Raises:
        OpsStreamError: On a line that is not "I <u>" or "D <u>".
    """
    ops = []
    for line_number, line in enumerate(stream, start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2 or parts[0] not in ("I", "D"):
            raise OpsStreamError(line_number, f"expected 'I <u>' or 'D <u>', got {line.strip()!r}")
        try:
            ops.append((line_number, parts[0], int(parts[1])))
        except ValueError as e:
            raise OpsStreamError(line_number, f"element {parts[1]!r} is not a decimal integer") from e
    return ops


def _progress() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        console=console,
        transient=True,
    )


@click.group(cls=IbltGroup)
@click.version_option(version=__version__, prog_name="iblt")
def cli() -> None:
    """IBLT schemes - lookup tables with worst-case listing guarantees."""
    setup_logging()


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Scheme config file (JSON)")
@click.option("--table", "table_path", default=None, type=click.Path(dir_okay=False, path_type=Path), help="Table file to write (default: config path with .iblt suffix)")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def build(config_path: Path, table_path: Path | None, verbose: bool) -> None:
    """Build a scheme and write its empty table.

    Prints the table shape as "m=<cells> b=<bits per cell> s=<total bits>".
    """
    if verbose:
        setup_logging("DEBUG")
    table_path = table_path or config_path.with_suffix(".iblt")
    try:
        config = load_config(config_path)
        table = build_scheme(config)
        save_table(table, table_path)
        descriptor = descriptor_path(table_path)
        if descriptor.resolve() != config_path.resolve():
            save_config(config, descriptor)
    except IbltError as e:
        _fail(e)

    click.echo(f"m={config.m} b={config.cell_bits} s={size_bits(config)}")
    if verbose:
        console.print(
            Panel(
                f"[bold]Family:[/bold] {config.family}\n"
                f"[bold]Construction:[/bold] {config.construction}\n"
                f"[bold]Universe:[/bold] {config.universe_base}..{config.universe_base + config.n - 1}\n"
                f"[bold]Listing:[/bold] {default_algorithm(config)}\n"
                f"[bold]Table:[/bold] {table_path}",
                title="Scheme built",
                border_style="green",
            )
        )


@cli.command()
@click.option("--table", "table_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Table file to update")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Scheme config (default: next to the table)")
@click.option("--ops", "ops_stream", default="-", type=click.File("r"), help="Operation stream, one 'I <u>' or 'D <u>' per line (default: stdin)")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def apply(table_path: Path, config_path: Path | None, ops_stream: TextIO, verbose: bool) -> None:
    """Apply inserts and deletes to a table file.

    All operations are applied in memory first; the file is only rewritten
    when every line succeeded.
    """
    if verbose:
        setup_logging("DEBUG")
    try:
        config, table = _load_scheme(table_path, config_path)
        ops = parse_ops(ops_stream)
        for line_number, op, u in ops:
            try:
                if op == "I":
                    table.insert(u)
                else:
                    table.delete(u)
            except IbltError as e:
                raise OpsStreamError(line_number, str(e)) from e
        save_table(table, table_path)
    except IbltError as e:
        _fail(e)

    console.print(f"Applied {len(ops)} operations to {table_path}")


@cli.command(name="list")
@click.option("--table", "table_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Table file to list")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Scheme config (default: next to the table)")
@click.option("--algorithm", type=click.Choice(list(ALGORITHMS)), default=None, help="Listing algorithm (default: the scheme's own)")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def list_command(table_path: Path, config_path: Path | None, algorithm: str | None, verbose: bool) -> None:
    """List the elements stored in a table, or print FAIL."""
    if verbose:
        setup_logging("DEBUG")
    try:
        _, table = _load_scheme(table_path, config_path)
        outcome = list_table(table, algorithm)
    except IbltError as e:
        _fail(e)

    if not outcome.success:
        click.echo("FAIL")
        raise SystemExit(EXIT_LIST_FAILURE)
    if outcome.elements:
        click.echo(" ".join(str(u) for u in outcome.elements))


def _run_check(config: SchemeConfig, prop: str, d: int | None, algorithm: str | None, budget: int | None, progress: Progress | None) -> VerifyReport:
    if prop == "bh":
        return check_bh(config, budget=budget)
    if prop == "distance":
        return check_distance(config)

    advance = None
    if progress is not None:
        task = progress.add_task(f"Checking {prop}...", total=config.n + 1)
        advance = lambda steps: progress.advance(task, steps)  # noqa: E731
    if prop == "uniqueness":
        return check_state_uniqueness(config, d, budget=budget, progress=advance)
    return check_listing(config, d, algorithm, budget=budget, progress=advance)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Scheme config file (JSON)")
@click.option("--property", "prop", type=click.Choice(PROPERTIES), default="listing", help="Property to check")
@click.option("--d", "d", type=click.IntRange(min=0), default=None, help="Set-size bound (default: the scheme's d)")
@click.option("--algorithm", type=click.Choice(list(ALGORITHMS)), default=None, help="Listing algorithm for --property listing")
@click.option("--budget", type=click.IntRange(min=1), default=None, help="Enumeration cap (default: IBLT_BUDGET)")
@click.option("--out", "out_format", type=click.Choice(["text", "json"]), default="text", help="Report format")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def verify(config_path: Path, prop: str, d: int | None, algorithm: str | None, budget: int | None, out_format: str, verbose: bool) -> None:
    """Exhaustively check a scheme property over all sets of at most d elements."""
    if verbose:
        setup_logging("DEBUG")
    try:
        config = load_config(config_path)
        if out_format == "text":
            with _progress() as progress:
                report = _run_check(config, prop, d, algorithm, budget, progress)
        else:
            report = _run_check(config, prop, d, algorithm, budget, None)
    except IbltError as e:
        _fail(e)

    if out_format == "json":
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        click.echo(report.to_text())
    if not report.passed:
        raise SystemExit(EXIT_COUNTEREXAMPLE)


@cli.command()
@click.option("--n", "n", required=True, type=click.IntRange(min=2), help="Universe size")
@click.option("--d", "d", required=True, type=click.IntRange(min=1), help="Decodability target")
@click.option("--k", "k", type=click.IntRange(min=1), default=None, help="Fixed column weight")
@click.option("--family", type=click.Choice([f.value for f in Family]), default=None, help="Restrict to one family")
@click.option("--out", "out_format", type=click.Choice(["text", "json"]), default="text", help="Output format")
def bounds(n: int, d: int, k: int | None, family: str | None, out_format: str) -> None:
    """Print every bound formula that applies to (n, d, k)."""
    rows = bounds_table(n, d, k, family)
    if out_format == "json":
        click.echo(json.dumps([asdict(row) for row in rows], indent=2))
        return

    table = RichTable(title=f"Bounds for n={n}, d={d}, k={'-' if k is None else k}")
    table.add_column("Source", style="cyan")
    table.add_column("Family")
    table.add_column("Kind")
    table.add_column("Bits", justify="right")
    table.add_column("Formula")
    table.add_column("Construction")
    for row in rows:
        construction = "(published, not shipped)" if row.prior else (row.construction or "-")
        table.add_row(row.source, row.family, row.kind, f"{row.value:g}", row.formula, construction)
    console.print(table)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Scheme config file (JSON)")
@click.option("--workload", type=click.IntRange(min=0), default=None, help="Number of random sets (default: BENCH_WORKLOAD)")
@click.option("--seed", type=int, default=None, help="Workload seed (default: BENCH_SEED)")
@click.option("--algorithm", type=click.Choice(list(ALGORITHMS)), default=None, help="Listing algorithm (default: the scheme's own)")
@click.option("--out", "out_format", type=click.Choice(["text", "json"]), default="text", help="Output format")
def bench(config_path: Path, workload: int | None, seed: int | None, algorithm: str | None, out_format: str) -> None:
    """Time insert, delete and listing against the table size."""
    settings = get_settings()
    workload = settings.BENCH_WORKLOAD if workload is None else workload
    seed = settings.BENCH_SEED if seed is None else seed
    try:
        report = run_benchmark(load_config(config_path), workload, seed, algorithm)
    except IbltError as e:
        _fail(e)

    if out_format == "json":
        click.echo(json.dumps(report.to_dict(), indent=2))
        return

    def fmt(value: float | None) -> str:
        return "-" if value is None else f"{value / 1000:.1f} us"

    table = RichTable(title=f"Benchmark: {report.construction} (n={report.n}, d={report.d})")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("s(T)", f"{report.size_bits} bits ({report.m} x {report.cell_bits})")
    table.add_row("workload", str(report.workload))
    table.add_row("median insert", fmt(report.median_insert_ns))
    table.add_row("median delete", fmt(report.median_delete_ns))
    table.add_row(f"median list ({report.algorithm})", fmt(report.median_list_ns))
    table.add_row("listings succeeded", f"{report.list_successes}/{report.workload}")
    table.add_row("listing complexity", report.complexity_note)
    console.print(table)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Scheme config file (JSON)")
@click.option("--table", "table_path", default=None, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Table file whose cells to show")
def show(config_path: Path, table_path: Path | None) -> None:
    """Print the mapping matrix and, optionally, the cells of a table."""
    try:
        config = load_config(config_path)
        table = load_table(config, table_path) if table_path else None
        matrix = config.mapping
    except IbltError as e:
        _fail(e)

    if matrix.n <= MATRIX_DISPLAY_MAX_COLUMNS:
        width = 1 if matrix.is_binary else len(f"{matrix.field.order:x}")
        for row in matrix.to_rows():
            click.echo(" ".join(f"{v:{width}x}" for v in row))
    else:
        console.print(f"[yellow]Matrix has {matrix.n} columns; not displayed[/yellow]")

    if table is not None:
        cells = RichTable(title=f"Cells of {table_path}")
        cells.add_column("Cell", justify="right")
        cells.add_column("Count", justify="right")
        cells.add_column("xorSum", justify="right")
        for i, cell in enumerate(table.cells):
            cells.add_row(str(i), str(cell.count), str(cell.xorsum))
        console.print(cells)
        click.echo("counts: " + " ".join(str(c) for c in table.counts))


if __name__ == "__main__":
    cli()
