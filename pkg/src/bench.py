"""Time vs memory benchmark for a scheme.

Builds a seeded workload of random sets of at most d elements, then times
every insert, delete and listing call. Timings are machine dependent and are
reported, never asserted.
"""

import inspect
import logging
import random
import time
from dataclasses import asdict, dataclass
from statistics import median

from src.listing import default_algorithm, list_table
from src.schemes import Family, SchemeConfig, Table, size_bits

logger = logging.getLogger(__name__)

LISTING_COMPLEXITY = {
    Family.STANDARD: "O(m) peeling",
    Family.STANDARD_INDEL: "O(m) peeling plus pair search",
    Family.GENERAL: "syndrome decoding, max{O(d*sqrt(n)), O(d^2*log n)} for d-decodable BCH schemes",
}


@dataclass
class BenchReport:
    """Benchmark summary. Medians are in nanoseconds and None for an empty workload."""

    construction: str
    family: str
    n: int
    d: int
    m: int
    cell_bits: int
    size_bits: int
    algorithm: str
    workload: int
    seed: int
    median_insert_ns: float | None = None
    median_delete_ns: float | None = None
    median_list_ns: float | None = None
    list_successes: int = 0
    complexity_note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def random_sets(config: SchemeConfig, workload: int, seed: int) -> list[list[int]]:
    """`workload` random sets, each of a uniformly chosen size in 0..d."""
    rng = random.Random(seed)
    universe = list(config.universe())
    return [rng.sample(universe, rng.randint(0, min(config.d, config.n))) for _ in range(workload)]


def run_benchmark(config: SchemeConfig, workload: int, seed: int = 0, algorithm: str | None = None) -> BenchReport:
    """Time insert, list and delete over a random workload.

    Args:
        config: Scheme to benchmark.
        workload: Number of random sets; 0 reports s(T) only.
        seed: Workload seed.
        algorithm: Listing algorithm name, defaulting to the scheme's own.

    Returns:
        BenchReport with medians per operation.
    """
    algorithm = algorithm or default_algorithm(config)
    logger.debug(f" * {inspect.currentframe().f_code.co_name} > {config.construction}, workload={workload}, seed={seed}")
    report = BenchReport(
        construction=config.construction,
        family=str(config.family),
        n=config.n,
        d=config.d,
        m=config.m,
        cell_bits=config.cell_bits,
        size_bits=size_bits(config),
        algorithm=algorithm,
        workload=workload,
        seed=seed,
        complexity_note=LISTING_COMPLEXITY[config.family],
    )
    if workload == 0:
        return report

    inserts: list[int] = []
    deletes: list[int] = []
    listings: list[int] = []
    for elements in random_sets(config, workload, seed):
        table = Table(config, track=False)
        for u in elements:
            started = time.perf_counter_ns()
            table.insert(u)
            inserts.append(time.perf_counter_ns() - started)

        started = time.perf_counter_ns()
        outcome = list_table(table, algorithm)
        listings.append(time.perf_counter_ns() - started)
        if outcome.success and outcome.elements == tuple(sorted(elements)):
            report.list_successes += 1

        for u in elements:
            started = time.perf_counter_ns()
            table.delete(u)
            deletes.append(time.perf_counter_ns() - started)

    report.median_insert_ns = median(inserts) if inserts else None
    report.median_delete_ns = median(deletes) if deletes else None
    report.median_list_ns = median(listings)
    logger.debug(f"    -> {report.list_successes}/{workload} listings succeeded")
    return report
