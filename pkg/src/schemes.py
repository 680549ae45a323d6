"""Lookup tables and the insert/delete/mapping protocol for every scheme family.

Families:
    standard        binary matrix, counters of ceil(log2 n) bits, peeling listing
    standard-indel  binary matrix, 1-bit, 2-bit or ceil(log2 d)-bit counters
    general         GF(2^r) matrix, one r-bit field element per cell

A `Table` stores counters and xorSum payloads as two flat integer lists. The
canonical byte layout written by `to_bytes` is: cells in index order, each as
counter bits then payload bits, most significant bit first, zero padding to a
byte boundary only at the very end.
"""

import inspect
import logging
from collections.abc import Iterable
from enum import StrEnum
from functools import cached_property
from typing import Any, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.config import get_settings
from src.core.errors import ConfigError, ElementRangeError, SchemeError, TableFormatError
from src.finite_field import FieldSpec, default_spec
from src.matrices import (
    BINARY_KINDS,
    FIELD_KINDS,
    MappingSpec,
    all_columns_plus_ones,
    bch_binary_plus_ones,
    bch_gf,
    bd_sequence,
    block_diagonal,
    block_h2,
    block_h2_hat,
    constant_weight_plus_ones,
    example2_matrix,
    from_columns,
    pad_redundant,
    restrict_columns,
)

logger = logging.getLogger(__name__)

# Constructions whose universe is {1..n}; the rest use {0..n-1}.
ONE_BASED_KINDS = frozenset({"example2", *FIELD_KINDS})


class Family(StrEnum):
    STANDARD = "standard"
    STANDARD_INDEL = "standard-indel"
    GENERAL = "general"


def ceil_log2(value: int) -> int:
    return (value - 1).bit_length() if value > 1 else 0


class SchemeConfig(BaseModel):
    """Everything that determines a scheme: family, matrix and bit layout.

    Attributes:
        family: Scheme family.
        construction: Matrix construction id (see `src.matrices`).
        n: Universe size.
        d: Decodability target.
        k: Fixed column weight parameter, or None for variable weight.
            For const-wt+1 it is the weight above the all-ones row; for
            bch-gf a value k > d pads k - d redundant rows.
        r: Field degree for general schemes; for binary BCH/all-columns
            constructions it defaults to the smallest degree that fits n.
        counter_bits: Width of each cell counter (0 for the general family).
        poly: Optional reduction polynomial replacing the default for degree r.
        columns: Explicit 0/1 columns for the custom construction.

    Invalid combinations raise `ConfigError`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: Family
    construction: str
    n: int = Field(ge=1)
    d: int = Field(ge=1)
    k: int | None = Field(default=None, ge=1)
    r: int | None = Field(default=None, ge=1)
    counter_bits: int = Field(default=0, ge=0)
    poly: int | None = Field(default=None, description="Reduction polynomial override, bit i = coefficient of x^i")
    columns: tuple[tuple[int, ...], ...] | None = Field(
        default=None, repr=False, description="Explicit 0/1 columns for the custom construction"
    )

    def __init__(self, **data: Any) -> None:
        try:
            super().__init__(**data)
        except ValidationError as e:
            raise ConfigError(f"Invalid scheme config: {e}") from e

    @field_validator("construction")
    @classmethod
    def validate_construction(cls, v: str) -> str:
        if v not in BINARY_KINDS + FIELD_KINDS:
            raise ValueError(f"Unknown construction {v!r}")
        return v

    @model_validator(mode="after")
    def validate_family(self) -> "SchemeConfig":
        if self.family is Family.GENERAL:
            if self.construction not in FIELD_KINDS:
                raise ValueError(f"Construction {self.construction!r} is binary; general schemes need a GF(2^r) matrix")
            if self.counter_bits != 0:
                raise ValueError(f"General schemes have no counters, got counter_bits={self.counter_bits}")
            if self.r is None:
                raise ValueError("General schemes need a field degree r")
        else:
            if self.construction in FIELD_KINDS:
                raise ValueError(f"Construction {self.construction!r} needs the general family")
            if self.poly is not None:
                raise ValueError("A polynomial override only applies to general schemes")
        return self

    @model_validator(mode="after")
    def validate_counter_bits(self) -> "SchemeConfig":
        if self.family is Family.STANDARD:
            expected = ceil_log2(self.n)
            if self.counter_bits != expected:
                raise ValueError(f"Standard schemes use ceil(log2 n)={expected} counter bits, got {self.counter_bits}")
        elif self.family is Family.STANDARD_INDEL:
            allowed = {1, 2, max(1, ceil_log2(self.d))}
            if self.counter_bits not in allowed:
                raise ValueError(f"Standard-indel counters must be one of {sorted(allowed)} bits, got {self.counter_bits}")
        return self

    @model_validator(mode="after")
    def validate_construction_parameters(self) -> "SchemeConfig":
        if self.construction == "custom" and not self.columns:
            raise ValueError("The custom construction needs explicit columns")
        if self.construction == "const-wt+1" and not self.k:
            raise ValueError("const-wt+1 needs the column weight k")
        return self

    def with_updates(self, **changes: Any) -> "SchemeConfig":
        """A validated copy with some fields replaced."""
        return SchemeConfig(**{**self.model_dump(), **changes})

    @property
    def is_binary(self) -> bool:
        return self.family is not Family.GENERAL

    @property
    def universe_base(self) -> int:
        return 1 if self.construction in ONE_BASED_KINDS else 0

    def universe(self) -> range:
        return range(self.universe_base, self.universe_base + self.n)

    @cached_property
    def field_spec(self) -> FieldSpec | None:
        if self.is_binary:
            return None
        if self.poly is not None:
            return FieldSpec.from_poly(self.r, self.poly)
        return default_spec(self.r)

    @cached_property
    def mapping(self) -> MappingSpec:
        """The mapping matrix, restricted to exactly n columns."""
        logger.debug(f" * {inspect.currentframe().f_code.co_name} > Building {self.construction} matrix for n={self.n}")
        matrix = _build_matrix(self)
        if matrix.n < self.n:
            raise ConfigError(f"{self.construction} provides {matrix.n} columns, fewer than n={self.n}")
        matrix = restrict_columns(matrix, range(self.n))
        logger.debug(f"    -> m={matrix.m}, b={self.cell_bits}")
        return matrix

    @property
    def m(self) -> int:
        return self.mapping.m

    @property
    def modulus(self) -> int:
        return 1 << self.counter_bits

    @property
    def xorsum_bits(self) -> int:
        """Payload width: r for general schemes, else bit length of the largest element."""
        if not self.is_binary:
            return self.r
        return max(1, (self.universe_base + self.n - 1).bit_length())

    @property
    def cell_bits(self) -> int:
        return self.counter_bits + self.xorsum_bits


def _binary_degree(config: SchemeConfig, minimum_columns: int) -> int:
    if config.r is not None:
        return config.r
    return max(1, ceil_log2(minimum_columns))


def _build_matrix(config: SchemeConfig) -> MappingSpec:
    kind = config.construction
    if kind == "example2":
        return example2_matrix()
    if kind == "custom":
        return from_columns(config.columns)
    if kind == "all-cols+1":
        return all_columns_plus_ones(_binary_degree(config, config.n))
    if kind == "const-wt+1":
        return constant_weight_plus_ones(config.n, config.k)
    if kind == "bch-bin+1":
        return bch_binary_plus_ones(_binary_degree(config, config.n + 1))

    spec = config.field_spec
    if kind == "bch-gf":
        extra = 0
        if config.k is not None:
            if config.k < config.d:
                raise ConfigError(f"Padding needs k >= d, got k={config.k}, d={config.d}")
            extra = config.k - config.d
        return pad_redundant(bch_gf(spec, config.d, config.n), extra)
    if kind == "bd-diag":
        _expect_weight(config, 1)
        return block_diagonal(bd_sequence(spec, config.d)[1:], config.n)
    _expect_weight(config, 2)
    if kind == "h2":
        return block_h2(spec, config.d, config.n)
    if config.d != 4:
        raise ConfigError(f"h2hat is defined for d=4 only, got d={config.d}")
    return block_h2_hat(spec, config.n)


def _expect_weight(config: SchemeConfig, weight: int) -> None:
    if config.k is not None and config.k != weight:
        raise ConfigError(f"{config.construction} has column weight {weight}, got k={config.k}")


class Cell(NamedTuple):
    count: int
    xorsum: int


class Table:
    """The lookup table T of one scheme.

    `insert` and `delete` modify the table in place and return it. When
    `SHADOW_SET` is enabled at creation, the table also tracks which elements
    it stores and rejects double inserts and deletes of absent elements.
    """

    def __init__(self, config: SchemeConfig, track: bool | None = None) -> None:
        self.config = config
        self.counts = [0] * config.m
        self.sums = [0] * config.m
        if track is None:
            track = get_settings().SHADOW_SET
        self.members: set[int] | None = set() if track else None

    @property
    def cells(self) -> list[Cell]:
        return [Cell(c, s) for c, s in zip(self.counts, self.sums)]

    def cell(self, i: int) -> Cell:
        return Cell(self.counts[i], self.sums[i])

    def copy(self) -> "Table":
        """Untracked copy sharing the same config."""
        clone = Table.__new__(Table)
        clone.config = self.config
        clone.counts = list(self.counts)
        clone.sums = list(self.sums)
        clone.members = None
        return clone

    def is_zero(self) -> bool:
        return not any(self.counts) and not any(self.sums)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Table):
            return NotImplemented
        return self.config == other.config and self.counts == other.counts and self.sums == other.sums

    __hash__ = None

    def __repr__(self) -> str:
        cells = ", ".join(f"({c}, {s:#x})" for c, s in zip(self.counts, self.sums))
        return f"Table({self.config.construction}, [{cells}])"

    def _toggle(self, u: int, step: int) -> None:
        config = self.config
        j = _column_index(config, u)
        matrix = config.mapping
        if config.is_binary:
            mask = config.modulus - 1
            for i in matrix.support(j):
                self.counts[i] = (self.counts[i] + step) & mask
                self.sums[i] ^= u
        else:
            col = matrix.column(j)
            for i in matrix.support(j):
                self.sums[i] ^= col[i]

    def insert(self, u: int) -> "Table":
        if self.members is not None:
            if u in self.members:
                raise SchemeError(f"Element {u} is already stored")
            self.members.add(u)
        self._toggle(u, 1)
        return self

    def delete(self, u: int) -> "Table":
        if self.members is not None:
            if u not in self.members:
                raise SchemeError(f"Element {u} is not stored")
            self.members.discard(u)
        self._toggle(u, -1)
        return self


def _column_index(config: SchemeConfig, u: int) -> int:
    j = u - config.universe_base
    if not 0 <= j < config.n:
        first = config.universe_base
        raise ElementRangeError(f"Element {u} outside universe {first}..{first + config.n - 1}")
    return j


def new_table(config: SchemeConfig) -> Table:
    """All-zero table for the given scheme."""
    return Table(config)


def mapping(config: SchemeConfig, u: int) -> frozenset[int]:
    """Cell indices touched by element u.

    Raises:
        ElementRangeError: If u is outside the scheme's universe.
    """
    return frozenset(config.mapping.support(_column_index(config, u)))


def insert(table: Table, u: int) -> Table:
    return table.insert(u)


def delete(table: Table, u: int) -> Table:
    return table.delete(u)


def state_of(config: SchemeConfig, elements: Iterable[int]) -> Table:
    """Table obtained by inserting every element of the set into an empty table."""
    table = Table(config, track=False)
    for u in elements:
        table.insert(u)
    return table


def size_bits(config: SchemeConfig) -> int:
    """s(T) = m * b."""
    return config.m * config.cell_bits


def apply_ops(table: Table, ops: Iterable[tuple[str, int]]) -> Table:
    """Apply a batch of ("I" | "D", element) operations in order."""
    for op, u in ops:
        if op == "I":
            table.insert(u)
        elif op == "D":
            table.delete(u)
        else:
            raise SchemeError(f"Unknown operation {op!r}")
    return table


def to_bytes(table: Table) -> bytes:
    """Canonical serialization of the table cells."""
    config = table.config
    counter_bits, payload_bits = config.counter_bits, config.xorsum_bits
    acc = 0
    for count, xorsum in zip(table.counts, table.sums):
        acc = (acc << counter_bits) | count
        acc = (acc << payload_bits) | xorsum
    total = config.m * config.cell_bits
    padding = -total % 8
    return (acc << padding).to_bytes((total + padding) // 8, "big")


def from_bytes(config: SchemeConfig, data: bytes) -> Table:
    """Inverse of to_bytes.

    Raises:
        TableFormatError: If the length or padding does not match the scheme.
    """
    total = config.m * config.cell_bits
    padding = -total % 8
    if len(data) != (total + padding) // 8:
        raise TableFormatError(f"Expected {(total + padding) // 8} bytes for this scheme, got {len(data)}")
    acc = int.from_bytes(data, "big")
    if acc & ((1 << padding) - 1):
        raise TableFormatError("Nonzero padding bits")
    acc >>= padding
    table = Table(config, track=False)
    counter_mask = (1 << config.counter_bits) - 1
    payload_mask = (1 << config.xorsum_bits) - 1
    for i in reversed(range(config.m)):
        table.sums[i] = acc & payload_mask
        acc >>= config.xorsum_bits
        table.counts[i] = acc & counter_mask
        acc >>= config.counter_bits
    return table


def state_key(table: Table) -> bytes:
    """Hashable canonical state, equal for equal tables of the same scheme."""
    return to_bytes(table)


def build_scheme(config: SchemeConfig) -> Table:
    """Validate the config by materialising its matrix and return an empty table."""
    table = new_table(config)
    logger.info(f"Built {config.family} scheme {config.construction}: m={config.m}, b={config.cell_bits}, s(T)={size_bits(config)}")
    return table
