"""Mapping matrices as deterministic column generators.

Each construction returns a `MappingSpec`: an m x n matrix exposed one column
at a time. Binary matrices hold 0/1 entries; GF(2^r) matrices hold field
values as plain integers. Construction ids used in scheme config files:

    example2, all-cols+1, const-wt+1, bch-bin+1, custom   (binary)
    bch-gf, bd-diag, h2, h2hat                            (GF(2^r))

Packing layout for the block constructions: a column of H^d over
GF(2^w) becomes one wider field value whose sub-element i occupies bits
[i*w, (i+1)*w). Unused high bits stay zero.
"""

import logging
from collections.abc import Callable, Iterable, Sequence
from itertools import combinations, islice
from math import ceil, comb

from src.core.errors import ConstructionError, ConstructionInfeasibleError
from src.finite_field import MAX_DEGREE, FieldElement, FieldSpec, default_spec

logger = logging.getLogger(__name__)

BINARY_KINDS = ("example2", "all-cols+1", "const-wt+1", "bch-bin+1", "custom")
FIELD_KINDS = ("bch-gf", "bd-diag", "h2", "h2hat")

EXAMPLE2_ROWS = (
    (1, 1, 1, 0, 0, 0),
    (0, 0, 0, 1, 1, 1),
    (1, 0, 0, 1, 0, 0),
    (0, 1, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 1),
)


class MappingSpec:
    """Column-generator view of an m x n mapping matrix.

    Columns are computed on first access and memoised; the generator must be
    a pure function of the column index.

    Attributes:
        m: Number of rows (table cells).
        n: Number of columns (universe size).
        kind: Construction id.
        field: The entries' field, or None for a binary matrix.
        fixed_weight: Column weight shared by every column, if the construction guarantees one.
    """

    def __init__(
        self,
        m: int,
        n: int,
        kind: str,
        generator: Callable[[int], Sequence[int]],
        field: FieldSpec | None = None,
        fixed_weight: int | None = None,
    ) -> None:
        if m < 1 or n < 1:
            raise ConstructionError(f"Matrix shape {m}x{n} must be positive")
        self.m = m
        self.n = n
        self.kind = kind
        self.field = field
        self.fixed_weight = fixed_weight
        self._generator = generator
        self._columns: dict[int, tuple[int, ...]] = {}
        self._supports: dict[int, tuple[int, ...]] = {}

    @property
    def is_binary(self) -> bool:
        return self.field is None

    def column(self, j: int) -> tuple[int, ...]:
        """Column j as a length-m tuple of entries.

        Raises:
            IndexError: If j is outside 0..n-1.
        """
        cached = self._columns.get(j)
        if cached is not None:
            return cached
        if not 0 <= j < self.n:
            raise IndexError(f"Column {j} out of range for {self.kind} matrix with n={self.n}")
        col = tuple(self._generator(j))
        if len(col) != self.m:
            raise ConstructionError(f"{self.kind} column {j} has length {len(col)}, expected {self.m}")
        self._columns[j] = col
        return col

    def support(self, j: int) -> tuple[int, ...]:
        """Row indices of the nonzero entries of column j, ascending."""
        cached = self._supports.get(j)
        if cached is None:
            cached = tuple(i for i, value in enumerate(self.column(j)) if value)
            self._supports[j] = cached
        return cached

    def weight(self, j: int) -> int:
        return len(self.support(j))

    def column_mask(self, j: int) -> int:
        """Binary column j as an int with bit i set for row i."""
        if not self.is_binary:
            raise ConstructionError("column_mask is only defined for binary matrices")
        return sum(1 << i for i in self.support(j))

    def to_rows(self) -> list[list[int]]:
        """Materialise the matrix row by row."""
        columns = [self.column(j) for j in range(self.n)]
        return [[col[i] for col in columns] for i in range(self.m)]

    def has_all_ones_last_row(self) -> bool:
        if not self.is_binary:
            return False
        return all(self.column(j)[-1] == 1 for j in range(self.n))

    def __repr__(self) -> str:
        domain = "GF(2)" if self.is_binary else f"GF(2^{self.field.r})"
        return f"MappingSpec(kind={self.kind!r}, m={self.m}, n={self.n}, over {domain})"


def field_pack(values: Iterable[int], width: int) -> int:
    """Pack sub-elements into one integer, sub-element i at bits [i*width, (i+1)*width)."""
    packed = 0
    for i, value in enumerate(values):
        packed |= value << (i * width)
    return packed


def field_unpack(packed: int, width: int, count: int) -> list[int]:
    """Inverse of field_pack for `count` sub-elements."""
    mask = (1 << width) - 1
    return [(packed >> (i * width)) & mask for i in range(count)]


def _bch_values(spec: FieldSpec, d: int, j: int) -> tuple[int, ...]:
    return tuple(spec.alpha_power((2 * c + 1) * j) for c in range(d))


def bch_parity_column(spec: FieldSpec, d: int, j: int) -> list[FieldElement]:
    """Column j of H^d_{n,alpha}: (alpha^j, alpha^3j, ..., alpha^(2d-1)j).

    Raises:
        IndexError: If j is outside 0..2^r-2.
        ConstructionError: If 2d-1 >= 2^r.
    """
    if d < 1 or 2 * d - 1 >= spec.size:
        raise ConstructionError(f"d={d} too large for GF(2^{spec.r})")
    if not 0 <= j < spec.order:
        raise IndexError(f"Column {j} out of range 0..{spec.order - 1}")
    return [FieldElement(value, spec) for value in _bch_values(spec, d, j)]


def bch_gf(spec: FieldSpec, d: int, n: int | None = None) -> MappingSpec:
    """H^d_{n,alpha} over GF(2^r), optionally shortened to its first n columns."""
    n = spec.order if n is None else n
    if d < 1 or 2 * d - 1 >= spec.size:
        raise ConstructionError(f"d={d} too large for GF(2^{spec.r})")
    if not 1 <= n <= spec.order:
        raise ConstructionError(f"BCH matrix over GF(2^{spec.r}) has at most {spec.order} columns, got n={n}")
    return MappingSpec(d, n, "bch-gf", lambda j: _bch_values(spec, d, j), field=spec, fixed_weight=d)


def all_columns_plus_ones(r: int) -> MappingSpec:
    """All 2^r binary columns of length r (bit i in row i) plus an all-ones row."""
    if r < 1:
        raise ConstructionError(f"r must be positive, got {r}")

    def generate(j: int) -> list[int]:
        return [(j >> i) & 1 for i in range(r)] + [1]

    return MappingSpec(r + 1, 1 << r, "all-cols+1", generate)


def minbinom(n: int, k: int) -> int:
    """Smallest m with C(m, k) >= n."""
    if n < 1 or k < 1:
        raise ValueError(f"minbinom needs positive n and k, got n={n}, k={k}")
    m = k
    while comb(m, k) < n:
        m += 1
    return m


def constant_weight_plus_ones(n: int, k: int) -> MappingSpec:
    """First n weight-k columns (lexicographic supports) plus an all-ones row."""
    height = minbinom(n, k)
    supports = list(islice(combinations(range(height), k), n))

    def generate(j: int) -> list[int]:
        col = [0] * (height + 1)
        for i in supports[j]:
            col[i] = 1
        col[height] = 1
        return col

    return MappingSpec(height + 1, n, "const-wt+1", generate, fixed_weight=k + 1)


def _binary_expand(values: Sequence[int], r: int) -> list[int]:
    return [(value >> i) & 1 for value in values for i in range(r)]


def bch_binary_plus_ones(r: int) -> MappingSpec:
    """Binary expansion of H^2 over GF(2^r) plus an all-ones row.

    Bit i of alpha^(cj) lands in row c*r + i, so m = 2r + 1 and n = 2^r - 1.
    """
    spec = default_spec(r)

    def generate(j: int) -> list[int]:
        return _binary_expand(_bch_values(spec, 2, j), r) + [1]

    return MappingSpec(2 * r + 1, spec.order, "bch-bin+1", generate)


def block_degree(bits: int, d: int) -> int:
    """Largest w >= 2 with d*w <= bits, i.e. log2(n'+1) for the block constructions.

    GF(2^w) must also carry H^d, so 2d-1 < 2^w.

    Raises:
        ConstructionInfeasibleError: If even w = 2 does not fit, or GF(2^w) is too small for H^d.
    """
    w = min(bits // d, MAX_DEGREE) if d > 0 else 0
    if w < 2:
        raise ConstructionInfeasibleError(f"No block field fits: d={d} needs {2 * d} bits, only {bits} available")
    if 2 * d - 1 >= 1 << w:
        raise ConstructionInfeasibleError(f"GF(2^{w}) is too small for H^{d}: needs 2d-1 < 2^w")
    return w


def _block_columns(w: int, d: int) -> list[tuple[int, ...]]:
    sub = default_spec(w)
    return [_bch_values(sub, d, j) for j in range(sub.order)]


def bd_sequence(spec: FieldSpec, d: int) -> list[FieldElement]:
    """A B_d-sequence 0, g_1, ..., g_n' in GF(2^r) from packed BCH columns over GF(n'+1).

    g_i is column i-1 of H^d over GF(2^w), packed into r bits, where 2^w = n'+1
    is the largest power of two with d*w <= r.
    """
    w = block_degree(spec.r, d)
    sequence = [0] + [field_pack(col, w) for col in _block_columns(w, d)]
    logger.debug(f"    -> B_{d} sequence in GF(2^{spec.r}) from GF(2^{w})")
    return [FieldElement(value, spec) for value in sequence]


def block_diagonal(g: Sequence[FieldElement | int], n: int, field: FieldSpec | None = None) -> MappingSpec:
    """Diagonal block matrix repeating g = (g_1..g_l) down the rows.

    Column j has its single entry g_{(j mod l)+1} in row j // l; the last
    block is g shortened to the remaining columns.
    """
    if not g:
        raise ConstructionError("block_diagonal needs a nonempty sequence")
    if field is None:
        field = g[0].spec if isinstance(g[0], FieldElement) else None
    if field is None:
        raise ConstructionError("block_diagonal needs a field for integer sequences")
    values = [int(x) for x in g]
    if any(v == 0 for v in values):
        raise ConstructionError("block_diagonal takes the nonzero part of the sequence")
    length = len(values)
    m = ceil(n / length)

    def generate(j: int) -> list[int]:
        col = [0] * m
        col[j // length] = values[j % length]
        return col

    return MappingSpec(m, n, "bd-diag", generate, field=field, fixed_weight=1)


def _split_halves(columns: list[tuple[int, ...]], w: int) -> tuple[list[int], list[int]]:
    half = len(columns[0]) // 2
    upper = [field_pack(col[:half], w) for col in columns]
    lower = [field_pack(col[half:], w) for col in columns]
    return upper, lower


def block_h2(spec: FieldSpec, d: int, n: int) -> MappingSpec:
    """Staircase of (g_U over g_L) blocks: block t sits in rows t and t+1.

    Raises:
        ConstructionError: If d is odd or d <= 2.
        ConstructionInfeasibleError: If no n'+1 satisfies d*log(n'+1) <= 2r with 2d-1 < n'+1.
    """
    if d <= 2 or d % 2:
        raise ConstructionError(f"Staircase construction needs an even d > 2, got d={d}")
    w = block_degree(2 * spec.r, d)
    upper, lower = _split_halves(_block_columns(w, d), w)
    width = len(upper)
    m = ceil(n / width) + 1

    def generate(j: int) -> list[int]:
        col = [0] * m
        block, idx = divmod(j, width)
        col[block] = upper[idx]
        col[block + 1] = lower[idx]
        return col

    logger.debug(f"    -> h2 over GF(2^{spec.r}): block width {width}, m={m}")
    return MappingSpec(m, n, "h2", generate, field=spec, fixed_weight=2)


# (row of g_U, row of g_L) inside one tile, per block of the 3x3 tile.
_TILE_ROWS = ((0, 1), (1, 2), (0, 2))


def block_h2_hat(spec: FieldSpec, n: int) -> MappingSpec:
    """Tiled 3x3 blocks built from H^4 without its first column.

    Tile t covers rows 2t..2t+2 and shares its last row with the first row of
    tile t+1. Within a tile the blocks place (g_U, g_L) in rows (0, 1), (1, 2)
    and (0, 2).

    Raises:
        ConstructionInfeasibleError: If no n'+1 >= 8 satisfies 4*log(n'+1) <= 2r.
    """
    w = block_degree(2 * spec.r, 4)
    upper, lower = _split_halves(_block_columns(w, 4)[1:], w)
    width = len(upper)
    tile_width = 3 * width
    tiles = ceil(n / tile_width)
    m = 2 * tiles + 1

    def generate(j: int) -> list[int]:
        col = [0] * m
        tile, within = divmod(j, tile_width)
        block, idx = divmod(within, width)
        upper_row, lower_row = _TILE_ROWS[block]
        col[2 * tile + upper_row] = upper[idx]
        col[2 * tile + lower_row] = lower[idx]
        return col

    logger.debug(f"    -> h2hat over GF(2^{spec.r}): block width {width}, {tiles} tiles, m={m}")
    return MappingSpec(m, n, "h2hat", generate, field=spec, fixed_weight=2)


def pad_redundant(spec: MappingSpec, extra: int) -> MappingSpec:
    """Append `extra` constant rows so every column weight grows by exactly `extra`.

    Binary matrices get all-ones rows; GF matrices get row t filled with alpha^t.
    """
    if extra < 0:
        raise ValueError(f"extra must be non-negative, got {extra}")
    if extra == 0:
        return spec
    field = spec.field
    constants = [1] * extra if field is None else [field.alpha_power(t) for t in range(extra)]

    def generate(j: int) -> list[int]:
        return list(spec.column(j)) + constants

    weight = None if spec.fixed_weight is None else spec.fixed_weight + extra
    return MappingSpec(spec.m + extra, spec.n, spec.kind, generate, field=field, fixed_weight=weight)


def restrict_rows(spec: MappingSpec, rows: Iterable[int]) -> MappingSpec:
    """View of the matrix keeping only the given rows, in the given order."""
    rows = list(rows)

    def generate(j: int) -> list[int]:
        col = spec.column(j)
        return [col[i] for i in rows]

    return MappingSpec(len(rows), spec.n, spec.kind, generate, field=spec.field)


def restrict_columns(spec: MappingSpec, columns: Iterable[int]) -> MappingSpec:
    """View of the matrix keeping only the given columns (new column t is old columns[t])."""
    columns = list(columns)
    if len(columns) == spec.n and columns == list(range(spec.n)):
        return spec
    return MappingSpec(
        spec.m, len(columns), spec.kind, lambda j: spec.column(columns[j]), field=spec.field, fixed_weight=spec.fixed_weight
    )


def from_columns(columns: Sequence[Sequence[int]], kind: str = "custom") -> MappingSpec:
    """Binary matrix from explicit 0/1 columns."""
    if not columns:
        raise ConstructionError("A matrix needs at least one column")
    m = len(columns[0])
    frozen = [tuple(int(bool(v)) for v in col) for col in columns]
    if any(len(col) != m for col in frozen):
        raise ConstructionError("All columns must have the same length")
    return MappingSpec(m, len(frozen), kind, lambda j: frozen[j])


def example2_matrix() -> MappingSpec:
    """The fixed 5x6 two-ones-per-column example matrix."""
    columns = [tuple(row[j] for row in EXAMPLE2_ROWS) for j in range(6)]
    return MappingSpec(5, 6, "example2", lambda j: columns[j], fixed_weight=2)
