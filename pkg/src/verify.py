"""Exhaustive desk-scale checks of decodability and the memory bounds.

Every check enumerates its whole instance space (all sets of at most d
elements, all h-fold multisets, all column subsets) and refuses to start when
that space exceeds the configured budget. Enumeration is lexicographic over
sorted sets, split into partitions by smallest element so that several
workers can share the load while counterexamples stay deterministic.
"""

import inspect
import logging
import time
from collections import Counter
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from functools import reduce
from itertools import combinations, combinations_with_replacement
from math import ceil, comb, log2, sqrt
from operator import xor

from src.core.config import get_settings
from src.core.errors import BudgetExceededError, ConfigError, ConstructionInfeasibleError
from src.finite_field import FieldElement, default_spec
from src.listing import ListingOutcome, count_sets, default_algorithm, list_table, walk_states
from src.matrices import MappingSpec, bd_sequence, block_degree, minbinom
from src.schemes import Family, SchemeConfig, size_bits, state_key, state_of

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int], None]


@dataclass
class VerifyReport:
    """Outcome of one exhaustive check.

    Attributes:
        construction: Construction id of the checked scheme.
        n: Universe size.
        d: Set-size bound of the enumeration.
        k: Column weight parameter of the scheme, if any.
        property: Checked property (uniqueness, listing, bh, distance).
        instances: Number of instances actually tested.
        verdict: "pass" or "fail".
        counterexample: Offending sets, multisets or columns when the verdict is fail.
        detail: Free-form extra result (e.g. the computed distance).
        elapsed: Wall time in seconds.
    """

    construction: str
    n: int
    d: int
    k: int | None
    property: str
    instances: int = 0
    verdict: str = "pass"
    counterexample: list[list[int]] | None = None
    detail: str = ""
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_text(self) -> str:
        lines = [
            f"construction: {self.construction}",
            f"n: {self.n}",
            f"d: {self.d}",
            f"k: {'-' if self.k is None else self.k}",
            f"property: {self.property}",
            f"instances: {self.instances}",
            f"verdict: {self.verdict}",
        ]
        if self.counterexample is not None:
            sets = " | ".join("{" + ", ".join(map(str, s)) + "}" for s in self.counterexample)
            lines.append(f"counterexample: {sets}")
        if self.detail:
            lines.append(f"detail: {self.detail}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return asdict(self)


def _report(config: SchemeConfig, d: int, prop: str) -> VerifyReport:
    return VerifyReport(config.construction, config.n, d, config.k, prop)


def _check_budget(required: int, budget: int | None, what: str = "states") -> None:
    budget = budget if budget is not None else get_settings().IBLT_BUDGET
    if required > budget:
        logger.warning(f"Refusing check: {required} {what} exceed budget {budget}")
        raise BudgetExceededError(required, budget, what)


def _finish(report: VerifyReport, started: float) -> VerifyReport:
    report.elapsed = time.perf_counter() - started
    limit = get_settings().VERIFY_SOFT_LIMIT_SECONDS
    if report.elapsed > limit:
        logger.warning(f"{report.property} check took {report.elapsed:.1f}s (soft limit {limit:.0f}s)")
    logger.info(f"{report.property} check on {report.construction}: {report.verdict} over {report.instances} instances")
    return report


def _partitions(config: SchemeConfig) -> list[int | None]:
    """Smallest-element partitions; None stands for the empty set."""
    return [None, *config.universe()]


def _run_partitions(
    config: SchemeConfig,
    task: Callable[[int | None], object],
    workers: int | None,
    progress: ProgressCallback | None,
) -> list:
    parts = _partitions(config)
    workers = workers or get_settings().VERIFY_WORKERS
    results: list = [None] * len(parts)
    if workers <= 1:
        for idx, part in enumerate(parts):
            results[idx] = task(part)
            if progress:
                progress(1)
        return results
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(task, part): idx for idx, part in enumerate(parts)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
            if progress:
                progress(1)
    return results


def _states_in(config: SchemeConfig, d: int, first: int | None) -> list[tuple[bytes, tuple[int, ...]]]:
    if first is None:
        return [(state_key(state_of(config, ())), ())]
    return [(state_key(table), subset) for subset, table in walk_states(config, d, first)]


def check_state_uniqueness(
    config: SchemeConfig,
    d: int | None = None,
    budget: int | None = None,
    workers: int | None = None,
    progress: ProgressCallback | None = None,
) -> VerifyReport:
    """Check that all sets of at most d elements leave distinct table states.

    Raises:
        BudgetExceededError: If the number of sets exceeds the budget.
    """
    d = config.d if d is None else d
    _check_budget(count_sets(config.n, d), budget)
    logger.debug(f" * {inspect.currentframe().f_code.co_name} > {config.construction}, n={config.n}, d={d}")
    started = time.perf_counter()
    report = _report(config, d, "uniqueness")
    config.mapping  # materialise before workers share it

    seen: dict[bytes, tuple[int, ...]] = {}
    for states in _run_partitions(config, lambda first: _states_in(config, d, first), workers, progress):
        for key, subset in states:
            report.instances += 1
            if key not in seen:
                seen[key] = subset
            elif report.counterexample is None:
                report.verdict = "fail"
                report.counterexample = [list(seen[key]), list(subset)]
    return _finish(report, started)


def _listing_partition(
    config: SchemeConfig, d: int, first: int | None, algorithm: str
) -> tuple[int, tuple[int, ...] | None, ListingOutcome | None]:
    walk = walk_states(config, 0) if first is None else walk_states(config, d, first)
    tested = 0
    for subset, table in walk:
        tested += 1
        outcome = list_table(table, algorithm)
        if not outcome.success or outcome.elements != subset:
            return tested, subset, outcome
    return tested, None, None


def check_listing(
    config: SchemeConfig,
    d: int | None = None,
    algorithm: str | None = None,
    budget: int | None = None,
    workers: int | None = None,
    progress: ProgressCallback | None = None,
) -> VerifyReport:
    """Run a listing algorithm on the state of every set of at most d elements.

    Each partition stops at its first failure; the reported counterexample is
    the lexicographically first failing set.

    Raises:
        BudgetExceededError: If the number of sets exceeds the budget.
        IncompatibleAlgorithmError: If the algorithm cannot list this scheme.
    """
    d = config.d if d is None else d
    algorithm = algorithm or default_algorithm(config)
    _check_budget(count_sets(config.n, d), budget)
    logger.debug(f" * {inspect.currentframe().f_code.co_name} > {algorithm} on {config.construction}, n={config.n}, d={d}")
    started = time.perf_counter()
    report = _report(config, d, "listing")
    report.detail = f"algorithm={algorithm}"
    config.mapping
    list_table(state_of(config, ()), algorithm)  # builds shared caches (oracle) up front

    results = _run_partitions(
        config, lambda first: _listing_partition(config, d, first, algorithm), workers, progress
    )
    for tested, failed, outcome in results:
        report.instances += tested
        if failed is not None and report.counterexample is None:
            report.verdict = "fail"
            report.counterexample = [list(failed)]
            report.detail += f", outcome={outcome.status} {list(outcome.elements)}"
    return _finish(report, started)


@dataclass(frozen=True)
class BhCertificate:
    """Result of a B_h test with a witness pair of colliding multisets on failure."""

    holds: bool
    instances: int
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    value: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_bh_sequence(
    elems: Sequence[int | FieldElement],
    h: int,
    group: str = "gf2",
    mode: str = "multiset",
    budget: int | None = None,
) -> BhCertificate:
    """Check that all nonzero h-fold sums of the sequence are distinct.

    In "gf2" (GF(2^r) under XOR) repeated terms cancel in pairs and zero
    terms vanish, so two multisets only collide when their reduced forms
    differ. "integers" compares plain multisets. "multiset" mode allows
    repeated indices; "subset" mode uses distinct indices only.

    Raises:
        ValueError: If the elements are not distinct or the group/mode is unknown.
        BudgetExceededError: If the number of multisets exceeds the budget.
    """
    values = [int(x) for x in elems]
    if len(set(values)) != len(values):
        raise ValueError("B_h checks need distinct elements")
    if group not in ("gf2", "integers"):
        raise ValueError(f"Unknown group {group!r}")
    if mode == "multiset":
        required = comb(len(values) + h - 1, h)
        indices = combinations_with_replacement(range(len(values)), h)
    elif mode == "subset":
        required = comb(len(values), h)
        indices = combinations(range(len(values)), h)
    else:
        raise ValueError(f"Unknown mode {mode!r}")
    _check_budget(required, budget if budget is not None else get_settings().BH_BUDGET, "multisets")

    seen: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
    instances = 0
    for combo in indices:
        instances += 1
        if group == "gf2":
            total = reduce(xor, (values[i] for i in combo), 0)
            counts = Counter(combo)
            key = tuple(i for i in sorted(counts) if counts[i] % 2 and values[i])
        else:
            total = sum(values[i] for i in combo)
            key = combo
        if total == 0:
            continue
        earlier_key, earlier = seen.setdefault(total, (key, combo))
        if earlier_key != key:
            witness = (tuple(values[i] for i in earlier), tuple(values[i] for i in combo))
            return BhCertificate(False, instances, witness, total)
    return BhCertificate(True, instances)


def check_bh(config: SchemeConfig, budget: int | None = None) -> VerifyReport:
    """Check the block-diagonal sequence of a general scheme for every h' <= d."""
    if config.family is not Family.GENERAL:
        raise ConfigError("B_h checks apply to general schemes")
    started = time.perf_counter()
    report = _report(config, config.d, "bh")
    sequence = bd_sequence(config.field_spec, config.d)
    report.detail = f"sequence length={len(sequence)}"
    for h in range(1, config.d + 1):
        certificate = is_bh_sequence(sequence, h, budget=budget)
        report.instances += certificate.instances
        if not certificate:
            report.verdict = "fail"
            report.counterexample = [list(side) for side in certificate.witness]
            report.detail += f", h={h}, sum={certificate.value:#x}"
            break
    return _finish(report, started)


def _smallest_dependent_set(matrix: MappingSpec) -> tuple[int, ...] | None:
    limit = get_settings().DISTANCE_MAX_COLUMNS
    if matrix.n > limit:
        raise BudgetExceededError(matrix.n, limit, "columns")
    masks = [matrix.column_mask(j) for j in range(matrix.n)]
    for size in range(1, matrix.n + 1):
        for combo in combinations(range(matrix.n), size):
            if reduce(xor, (masks[j] for j in combo)) == 0:
                return combo
    return None


def min_distance(matrix: MappingSpec) -> int:
    """Fewest columns of a binary matrix with zero XOR-sum, or n + 1 if none.

    Raises:
        BudgetExceededError: If the matrix has more than DISTANCE_MAX_COLUMNS columns.
    """
    dependent = _smallest_dependent_set(matrix)
    return matrix.n + 1 if dependent is None else len(dependent)


def check_distance(config: SchemeConfig) -> VerifyReport:
    """Minimum distance of the full mapping matrix; passes when it exceeds d."""
    if not config.is_binary:
        raise ConfigError("Distance checks apply to binary schemes")
    started = time.perf_counter()
    report = _report(config, config.d, "distance")
    dependent = _smallest_dependent_set(config.mapping)
    distance = config.n + 1 if dependent is None else len(dependent)
    report.instances = sum(comb(config.n, i) for i in range(1, min(distance, config.n) + 1))
    report.detail = f"distance={distance}"
    if distance <= config.d:
        report.verdict = "fail"
        report.counterexample = [[j + config.universe_base for j in dependent]]
    return _finish(report, started)


def lower_bounds(n: int, d: int) -> tuple[float, float]:
    """(log2 of the number of sets of size <= d, d*log2(n) - d*log2(d))."""
    if d == 0:
        return 0.0, 0.0
    return log2(count_sets(n, d)), d * log2(n) - d * log2(d)


@dataclass(frozen=True)
class BoundRow:
    source: str
    kind: str
    value: float
    formula: str
    family: str
    construction: str | None = None
    prior: bool = False


def _is_pow2(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def _standard_rows(n: int, d: int, k: int | None) -> list[BoundRow]:
    c = ceil(log2(n))
    rows: list[tuple[bool, str, float, str]] = [
        (d == 3 and k is None, "standard-d3", 2 * ceil(3 / log2(3) * log2(n)) * c, "2*ceil(3/log3*log n)*ceil(log n)"),
        (d == 3 and k == 2, "standard-d3-k2", 2 * ceil(2 * sqrt(n)) * c, "2*ceil(2*sqrt n)*ceil(log n)"),
        (d == 5 and k == 3, "standard-d5-k3", 6 * (2 * ceil(sqrt(n / 6)) + 1) * c, "6*(2*ceil(sqrt(n/6))+1)*ceil(log n)"),
        (d == 7 and k == 4, "standard-d7-k4", 8 * ceil(sqrt(2 * n)) * c, "8*ceil(sqrt(2n))*ceil(log n)"),
        (d == 4 and k == 2 * ceil(log2(n + 1)), "standard-d4-klog", 8 * ceil(log2(n + 1)) * c, "8*ceil(log(n+1))*ceil(log n)"),
        (k == d, "standard-k-eq-d", 2 * d * ceil(sqrt(n)) * c, "2d*ceil(sqrt n)*ceil(log n)"),
    ]
    result = [BoundRow(src, "upper", float(v), f, "standard", prior=True) for ok, src, v, f in rows if ok]
    if d == 3 and k == 2:
        result.append(BoundRow("standard-d3-k2", "lower", float(2 * ceil(2 * sqrt(n)) * c), "2*ceil(2*sqrt n)*ceil(log n)", "standard", prior=True))
    return result


def _indel_rows(n: int, d: int, k: int | None) -> list[BoundRow]:
    rows = []
    if d == 3 and _is_pow2(n) and k is None:
        lg = log2(n)
        rows.append(BoundRow("indel-d3-xpeel", "upper", (lg + 2) * (lg + 1), "(log n+2)(log n+1)", "standard-indel", "all-cols+1"))
        rows.append(BoundRow("indel-d3-onebit", "upper", (lg + 1) ** 2, "(log n+1)^2", "standard-indel", "all-cols+1"))
    if d == 3 and k is not None:
        rows.append(
            BoundRow("indel-d3-const-weight", "upper", (ceil(log2(n)) + 1) * (minbinom(n, k) + 1), "(log n+1)(minbinom(n,k)+1)", "standard-indel", "const-wt+1")
        )
    if d == 4 and _is_pow2(n + 1) and k is None:
        lg = log2(n + 1)
        rows.append(BoundRow("indel-d4-bch", "upper", (lg + 2) * (2 * lg + 1), "(log(n+1)+2)(2log(n+1)+1)", "standard-indel", "bch-bin+1"))
    return rows


def _general_rows(n: int, d: int, k: int | None) -> list[BoundRow]:
    rows = []
    if k is None and _is_pow2(n + 1):
        rows.append(BoundRow("general-bch", "upper", d * log2(n + 1), "d*log(n+1)", "general", "bch-gf"))
    if k is not None and k >= d and _is_pow2(n + 1):
        rows.append(BoundRow("general-bch-padded", "upper", k * log2(n + 1), "k*log(n+1)", "general", "bch-gf"))
    if k == 1 and _is_pow2(n):
        lg = log2(n)
        try:
            psi = 1 << block_degree(int(lg), d)
            rows.append(BoundRow("general-k1-sequence", "upper", ceil(n / (psi - 1)) * lg, "ceil(n/(Psi-1))*log n", "general", "bd-diag"))
        except ConstructionInfeasibleError:
            logger.debug(f"    -> no block sequence for n={n}, d={d}")
        root = n ** (1 / d)
        if root > 2:
            rows.append(BoundRow("general-k1-envelope", "upper", ceil(2 * n / (root - 2)) * lg, "ceil(2n/(n^(1/d)-2))*log n", "general"))
    if k == 2 and d > 2 and d % 2 == 0 and _is_pow2(n):
        lg = log2(n)
        root = n ** (2 / d)
        if root > 2:
            rows.append(BoundRow("general-k2-staircase", "upper", (ceil(2 * n / (root - 2)) + 1) * lg, "(ceil(2n/(n^(2/d)-2))+1)*log n", "general", "h2"))
    if k == 2 and d == 4 and _is_pow2(n):
        lg = log2(n)
        denominator = 3 * sqrt(n) - 4
        if denominator > 0:
            rows.append(BoundRow("general-k2-d4-tiled", "upper", (2 * ceil(2 * n / denominator) + 1) * lg, "(2*ceil(2n/(3sqrt n-4))+1)*log n", "general", "h2hat"))
    return rows


def bounds_table(n: int, d: int, k: int | None = None, family: str | None = None) -> list[BoundRow]:
    """Every applicable bound formula for (n, d, k), with its source id.

    Rows flagged `prior` are published standard-scheme results listed for
    comparison only; lower bounds apply to every family.
    """
    if n < 2 or d < 1:
        raise ValueError(f"Bounds need n >= 2 and d >= 1, got n={n}, d={d}")
    entropy, counting = lower_bounds(n, d)
    rows = [
        BoundRow("entropy", "lower", entropy, "log2(sum_{i<=d} C(n,i))", "any"),
        BoundRow("general-lower", "lower", counting, "d(log n - log d)", "any"),
    ]
    if family in (None, "standard"):
        rows += _standard_rows(n, d, k)
    if family in (None, "standard-indel"):
        rows += _indel_rows(n, d, k)
    if family in (None, "general"):
        rows += _general_rows(n, d, k)
    return rows


def capacity_ratio(config: SchemeConfig) -> tuple[float, float, float]:
    """(s(T) / (d log n), 1 - log d / log n, log(n+1) / log n) for comparing against the envelope."""
    lg = log2(config.n)
    return size_bits(config) / (config.d * lg), 1 - log2(config.d) / lg, log2(config.n + 1) / lg


def check_padding(config: SchemeConfig, extra: int, budget: int | None = None) -> VerifyReport:
    """Uniqueness of the BCH scheme padded with `extra` redundant rows."""
    if config.construction != "bch-gf":
        raise ConfigError("Padding checks apply to the bch-gf construction")
    padded = config.with_updates(k=(config.k or config.d) + extra)
    report = check_state_uniqueness(padded, budget=budget)
    report.detail = f"padded to k={padded.k}, m={padded.m}"
    return report


def psi_exhaustive(r: int, h: int, node_budget: int = 5_000_000) -> int:
    """Largest B_h sequence in GF(2^r) found by exhaustive backtracking.

    Only practical for r <= 6.

    Raises:
        BudgetExceededError: If the search visits more than node_budget nodes.
    """
    if r > 6:
        raise ConfigError(f"Exhaustive search is limited to r <= 6, got r={r}")
    size = default_spec(r).size
    best: list[int] = [0]
    nodes = 0

    def extend(chosen: list[int], start: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError(nodes, node_budget, "search nodes")
        if len(chosen) > best[0]:
            best[0] = len(chosen)
        for value in range(start, size):
            if len(chosen) + 1 + (size - value - 1) <= best[0]:
                return
            candidate = chosen + [value]
            if is_bh_sequence(candidate, h, budget=node_budget):
                extend(candidate, value + 1)

    extend([0], 1)
    logger.debug(f"    -> exhaustive search for r={r}, h={h} visited {nodes} nodes")
    return best[0]


__all__ = [
    "BhCertificate",
    "BoundRow",
    "VerifyReport",
    "bounds_table",
    "capacity_ratio",
    "check_bh",
    "check_distance",
    "check_listing",
    "check_padding",
    "check_state_uniqueness",
    "is_bh_sequence",
    "lower_bounds",
    "min_distance",
    "psi_exhaustive",
]
