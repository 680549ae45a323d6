"""Listing algorithms: recover the stored set from a table, or report Failure.

Every algorithm works on a private copy of the table, emits elements sorted
ascending, and only reports Success after re-checking that the recovered set
reproduces the input table.

    peel     pure-cell peeling (standard and standard-indel schemes)
    xpeel    peeling plus the counter-difference pair step for stalled tables
    d3       case analysis on the all-ones cell for 1-bit counters, |S| <= 3
    pgz      syndrome decoding for BCH general schemes
    k1bd     per-cell syndrome decoding for block-diagonal (d,1) schemes
    oracle   precomputed state -> set lookup for any scheme at desk scale
"""

import inspect
import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import galois
import numpy as np

from src.core.config import get_settings
from src.core.errors import BudgetExceededError, IncompatibleAlgorithmError
from src.finite_field import FieldSpec, default_spec
from src.matrices import block_degree, field_unpack
from src.schemes import Family, SchemeConfig, Table, state_key, state_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ListingOutcome:
    """Result of a listing attempt.

    Attributes:
        success: Whether the algorithm listed the table.
        elements: Recovered elements, sorted ascending (empty on Failure).
        reason: Short diagnostic for Failure outcomes.
    """

    success: bool
    elements: tuple[int, ...] = ()
    reason: str = ""

    @classmethod
    def ok(cls, elements) -> "ListingOutcome":
        return cls(True, tuple(sorted(elements)))

    @classmethod
    def fail(cls, reason: str) -> "ListingOutcome":
        return cls(False, (), reason)

    @property
    def status(self) -> str:
        return "Success" if self.success else "Failure"


def _require_binary(table: Table, name: str) -> None:
    if not table.config.is_binary:
        raise IncompatibleAlgorithmError(f"{name} needs a binary scheme, got {table.config.family}")


def _valid(config: SchemeConfig, u: int) -> bool:
    return config.universe_base <= u < config.universe_base + config.n


def _peel_step(work: Table, recovered: list[int]) -> bool:
    """Remove one element through the lowest pure cell. Returns False if none qualifies."""
    config = work.config
    for i, count in enumerate(work.counts):
        if count != 1:
            continue
        u = work.sums[i]
        if not _valid(config, u) or u in recovered:
            continue
        if i not in config.mapping.support(u - config.universe_base):
            continue
        work.delete(u)
        recovered.append(u)
        return True
    return False


def peel(table: Table) -> ListingOutcome:
    """Classic peeling: repeatedly list and delete the element of the lowest pure cell."""
    _require_binary(table, "peel")
    work = table.copy()
    recovered: list[int] = []
    while not work.is_zero():
        if not _peel_step(work, recovered):
            return ListingOutcome.fail("no pure cell")
    return ListingOutcome.ok(recovered)


def _pair_candidates(work: Table, d: int) -> Iterator[tuple[int, int]] | None:
    counts = work.counts
    modulus = work.config.modulus
    if work.config.mapping.has_all_ones_last_row():
        last = len(counts) - 1
        inferred = counts[last] or modulus
        if inferred > d:
            return None
        return ((last, j) for j in range(last) if (counts[last] - counts[j]) % modulus == 1)
    return (
        (i, j)
        for i in range(len(counts))
        for j in range(len(counts))
        if i != j and (counts[i] - counts[j]) % modulus == 1
    )


def _pair_step(work: Table, d: int, recovered: list[int]) -> bool:
    config = work.config
    candidates = _pair_candidates(work, d)
    if candidates is None:
        return False
    for i, j in candidates:
        e = work.sums[i] ^ work.sums[j]
        if not _valid(config, e) or e in recovered:
            continue
        support = config.mapping.support(e - config.universe_base)
        if i in support and j not in support:
            work.delete(e)
            recovered.append(e)
            return True
    return False


def extended_peel(table: Table, d: int) -> ListingOutcome:
    """Peeling that, when stuck, recovers an element from two cells whose counters differ by one.

    The cardinality guard uses the all-ones row when the matrix has one:
    its counter (or the modulus, for a zero counter on a nonzero table) is
    the number of stored elements.
    """
    _require_binary(table, "extended_peel")
    work = table.copy()
    recovered: list[int] = []
    while not work.is_zero():
        if _peel_step(work, recovered):
            continue
        if not _pair_step(work, d, recovered):
            return ListingOutcome.fail("stalled with no qualifying cell pair")
    return ListingOutcome.ok(recovered)


def _parity(work: Table, i: int) -> int:
    return work.counts[i] & 1


def list_d3_onebit(table: Table) -> ListingOutcome:
    """Listing for all-ones-row matrices with one-bit counters and at most three elements.

    Works from the last (all-ones) cell: its parity is |S| mod 2 and its
    xorSum is the XOR of all stored elements.
    """
    _require_binary(table, "list_d3_onebit")
    config = table.config
    if not config.mapping.has_all_ones_last_row():
        raise IncompatibleAlgorithmError("list_d3_onebit needs a matrix whose last row is all ones")
    work = table.copy()
    last = config.m - 1
    found: list[int] = []

    def take(u: int, cell: int | None = None) -> bool:
        if not _valid(config, u) or u in found:
            return False
        if cell is not None and cell not in config.mapping.support(u - config.universe_base):
            return False
        work.delete(u)
        found.append(u)
        return True

    if _parity(work, last) == 1:
        total = work.sums[last]
        if _valid(config, total) and state_of(config, [total]) == work:
            return ListingOutcome.ok([total])
        # Three elements: split one off, then fall through to the two-element case.
        pure = next((i for i in range(last) if _parity(work, i) == 1 and work.sums[i] != total), None)
        if pure is not None:
            split = take(work.sums[pure], pure)
        else:
            double = next((i for i in range(last) if _parity(work, i) == 0 and work.sums[i] != 0), None)
            split = double is not None and take(total ^ work.sums[double])
        if not split or _parity(work, last) != 0:
            return ListingOutcome.fail("could not reduce an odd table to two elements")

    total = work.sums[last]
    if total != 0:
        pure = next((i for i in range(last) if _parity(work, i) == 1), None)
        if pure is None:
            return ListingOutcome.fail("no cell separates the remaining pair")
        u = work.sums[pure]
        if not take(u, pure) or not take(u ^ total):
            return ListingOutcome.fail("recovered pair outside the universe")

    if not work.is_zero():
        return ListingOutcome.fail("table not empty after case analysis")
    return ListingOutcome.ok(found)


@lru_cache(maxsize=None)
def _galois_field(r: int, poly: int) -> type[galois.FieldArray]:
    return galois.GF(2**r, irreducible_poly=poly)


def _pgz_locate(field: FieldSpec, odd_syndromes: list[int], columns: int) -> list[int] | None:
    """Column indices j whose alpha^j are the error locators, or None.

    `odd_syndromes` are S_1, S_3, ..., S_{2t-1}; even syndromes follow from
    S_{2j} = S_j^2. The locator degree is the largest nu <= t with a
    nonsingular syndrome system.
    """
    t = len(odd_syndromes)
    if not any(odd_syndromes):
        return []
    syndromes = [0] * (2 * t + 1)
    for k in range(1, 2 * t + 1):
        syndromes[k] = odd_syndromes[k // 2] if k % 2 else field.mul(syndromes[k // 2], syndromes[k // 2])

    gf = _galois_field(field.r, field.poly)
    positions = {field.alpha_power(-j): j for j in range(columns)}
    for nu in range(t, 0, -1):
        system = gf([[syndromes[i + nu - j] for j in range(1, nu + 1)] for i in range(1, nu + 1)])
        if np.linalg.det(system) == 0:
            continue
        locator = np.linalg.solve(system, gf([syndromes[i + nu] for i in range(1, nu + 1)]))
        # Coefficients run from x^nu down to the constant term 1.
        roots = galois.Poly([*reversed(locator.tolist()), 1], field=gf).roots()
        found = sorted(positions[int(x)] for x in roots if int(x) in positions)
        return found if len(found) == nu else None
    return None


def _reencodes(config: SchemeConfig, elements: list[int], table: Table) -> bool:
    return len(set(elements)) == len(elements) and state_of(config, elements) == table


def pgz_decode(table: Table) -> ListingOutcome:
    """Decode a BCH general table by treating its first d cells as odd syndromes."""
    config = table.config
    if config.family is not Family.GENERAL or config.construction != "bch-gf":
        raise IncompatibleAlgorithmError("pgz_decode needs a general scheme over the BCH matrix")
    roots = _pgz_locate(config.field_spec, table.sums[: config.d], config.n)
    if roots is None:
        return ListingOutcome.fail("syndromes do not match a locator of degree <= d")
    elements = [j + 1 for j in roots]
    if not _reencodes(config, elements, table):
        return ListingOutcome.fail("decoded set does not reproduce the table")
    return ListingOutcome.ok(elements)


def list_k1_bd(table: Table) -> ListingOutcome:
    """Decode each cell of a block-diagonal (d,1) table independently over the small field."""
    config = table.config
    if config.family is not Family.GENERAL or config.construction != "bd-diag":
        raise IncompatibleAlgorithmError("list_k1_bd needs a block-diagonal general scheme")
    w = block_degree(config.r, config.d)
    sub = default_spec(w)
    width = sub.order
    elements: list[int] = []
    for row, value in enumerate(table.sums):
        if not value:
            continue
        roots = _pgz_locate(sub, field_unpack(value, w, config.d), width)
        if roots is None:
            return ListingOutcome.fail(f"cell {row} does not decode")
        elements.extend(row * width + j + 1 for j in roots)
    if any(u > config.n for u in elements) or not _reencodes(config, elements, table):
        return ListingOutcome.fail("decoded set does not reproduce the table")
    return ListingOutcome.ok(elements)


def walk_states(config: SchemeConfig, max_size: int, first: int | None = None) -> Iterator[tuple[tuple[int, ...], Table]]:
    """Depth-first walk over all sets of at most max_size elements, in lexicographic order.

    Yields (sorted set, table) pairs. The same table object is updated in place
    between yields, so callers must copy or key it before advancing. With
    `first` set, only sets whose smallest element is `first` are visited.
    """
    table = Table(config, track=False)
    universe = list(config.universe())
    chosen: list[int] = []

    def descend(start: int) -> Iterator[tuple[tuple[int, ...], Table]]:
        yield tuple(chosen), table
        if len(chosen) == max_size:
            return
        for idx in range(start, len(universe)):
            u = universe[idx]
            table.insert(u)
            chosen.append(u)
            yield from descend(idx + 1)
            chosen.pop()
            table.delete(u)

    if first is None:
        yield from descend(0)
        return
    idx = universe.index(first)
    table.insert(first)
    chosen.append(first)
    if max_size >= 1:
        yield from descend(idx + 1)


def count_sets(n: int, max_size: int) -> int:
    """Number of subsets of an n-set with at most max_size elements."""
    return sum(comb(n, i) for i in range(min(max_size, n) + 1))


class ListingOracle:
    """Precomputed map from canonical table state to the unique set producing it.

    States reached by more than one set map to None and fail on lookup.
    """

    def __init__(self, config: SchemeConfig, budget: int | None = None) -> None:
        budget = budget if budget is not None else get_settings().ORACLE_BUDGET
        required = count_sets(config.n, config.d)
        if required > budget:
            logger.warning(f"Oracle for {config.construction} needs {required} states, budget {budget}")
            raise BudgetExceededError(required, budget)
        logger.debug(f" * {inspect.currentframe().f_code.co_name} > Precomputing {required} states")
        self.config = config
        self.states: dict[bytes, tuple[int, ...] | None] = {}
        for subset, table in walk_states(config, config.d):
            key = state_key(table)
            self.states[key] = None if key in self.states else subset
        ambiguous = sum(1 for v in self.states.values() if v is None)
        logger.debug(f"    -> {len(self.states)} distinct states, {ambiguous} ambiguous")

    def lookup(self, table: Table) -> ListingOutcome:
        key = state_key(table)
        if key not in self.states:
            return ListingOutcome.fail("state not reachable by any set of at most d elements")
        found = self.states[key]
        if found is None:
            return ListingOutcome.fail("state shared by several sets")
        return ListingOutcome.ok(found)


@lru_cache(maxsize=8)
def _oracle(config: SchemeConfig, budget: int) -> ListingOracle:
    return ListingOracle(config, budget)


def list_oracle(config: SchemeConfig, table: Table, budget: int | None = None) -> ListingOutcome:
    """Answer a listing query from the precomputed oracle, building it on first use.

    Raises:
        BudgetExceededError: If the oracle would need more states than the budget.
    """
    if budget is None:
        budget = get_settings().ORACLE_BUDGET
    return _oracle(config, budget).lookup(table)


@dataclass(frozen=True)
class Algorithm:
    name: str
    run: Callable[[Table], ListingOutcome]
    families: frozenset[Family]
    description: str


_BINARY = frozenset({Family.STANDARD, Family.STANDARD_INDEL})

ALGORITHMS: dict[str, Algorithm] = {
    "peel": Algorithm("peel", peel, _BINARY, "pure-cell peeling"),
    "xpeel": Algorithm(
        "xpeel", lambda t: extended_peel(t, t.config.d), _BINARY, "peeling with counter-difference pairs"
    ),
    "d3": Algorithm("d3", list_d3_onebit, _BINARY, "one-bit counter case analysis, d <= 3"),
    "pgz": Algorithm("pgz", pgz_decode, frozenset({Family.GENERAL}), "BCH syndrome decoding"),
    "k1bd": Algorithm("k1bd", list_k1_bd, frozenset({Family.GENERAL}), "per-cell B_d decoding"),
    "oracle": Algorithm(
        "oracle", lambda t: list_oracle(t.config, t), frozenset(Family), "precomputed state lookup"
    ),
}


def default_algorithm(config: SchemeConfig) -> str:
    """Name of the listing algorithm a scheme is designed for."""
    if config.family is Family.STANDARD:
        return "peel"
    if config.family is Family.STANDARD_INDEL:
        if config.counter_bits == 1 and config.d <= 3 and config.mapping.has_all_ones_last_row():
            return "d3"
        return "xpeel"
    return {"bch-gf": "pgz", "bd-diag": "k1bd"}.get(config.construction, "oracle")


def list_table(table: Table, algorithm: str | None = None) -> ListingOutcome:
    """Run a registered listing algorithm (the scheme's default when None).

    Raises:
        IncompatibleAlgorithmError: If the algorithm is unknown or cannot run on this scheme.
    """
    config = table.config
    name = algorithm or default_algorithm(config)
    entry = ALGORITHMS.get(name)
    if entry is None:
        raise IncompatibleAlgorithmError(f"Unknown listing algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    if config.family not in entry.families:
        raise IncompatibleAlgorithmError(f"{name} cannot list {config.family} schemes")
    outcome = entry.run(table)
    if not outcome.success:
        logger.info(f"Listing with {name} failed: {outcome.reason}")
    return outcome
