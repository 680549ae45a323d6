"""Tests for mapping matrix constructions."""

from itertools import combinations

import pytest

from src.core.errors import ConstructionError, ConstructionInfeasibleError
from src.finite_field import FieldElement, default_spec
from src.matrices import (
    all_columns_plus_ones,
    bch_binary_plus_ones,
    bch_gf,
    bch_parity_column,
    bd_sequence,
    block_degree,
    block_diagonal,
    block_h2,
    block_h2_hat,
    constant_weight_plus_ones,
    example2_matrix,
    field_pack,
    field_unpack,
    from_columns,
    minbinom,
    pad_redundant,
    restrict_columns,
    restrict_rows,
)

GF16 = default_spec(4)
GF256 = default_spec(8)


class TestBchParityColumn:
    def test_first_column_all_ones(self):
        assert [int(x) for x in bch_parity_column(GF16, 2, 0)] == [1, 1]

    def test_second_column(self):
        assert [int(x) for x in bch_parity_column(GF16, 2, 1)] == [0b0010, 0b1000]

    def test_returns_field_elements(self):
        assert all(isinstance(x, FieldElement) for x in bch_parity_column(GF16, 3, 5))

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            bch_parity_column(GF16, 2, 15)

    def test_any_four_columns_independent(self):
        # Over GF(2) combinations: any <= 2d columns of H^d have a nonzero sum.
        matrix = bch_gf(GF16, 2)
        columns = [matrix.column(j) for j in range(matrix.n)]
        for size in range(1, 5):
            for combo in combinations(columns, size):
                assert any(_xor(col[i] for col in combo) for i in range(2))


def _xor(values):
    result = 0
    for v in values:
        result ^= v
    return result


class TestAllColumnsPlusOnes:
    def test_small_columns(self):
        matrix = all_columns_plus_ones(2)
        assert matrix.column(2) == (0, 1, 1)
        assert matrix.column(0) == (0, 0, 1)

    def test_weight_is_popcount_plus_one(self):
        matrix = all_columns_plus_ones(4)
        assert (matrix.m, matrix.n) == (5, 16)
        for j in range(16):
            assert matrix.weight(j) == bin(j).count("1") + 1
        assert matrix.has_all_ones_last_row()


class TestConstantWeight:
    def test_minbinom(self):
        assert minbinom(6, 2) == 4
        assert minbinom(1, 3) == 3
        assert minbinom(7, 2) == 5

    def test_shape_and_first_column(self):
        matrix = constant_weight_plus_ones(6, 2)
        assert matrix.m == 5
        assert matrix.support(0) == (0, 1, 4)

    def test_single_element(self):
        assert constant_weight_plus_ones(1, 1).m == 2

    def test_columns_distinct_with_fixed_weight(self):
        matrix = constant_weight_plus_ones(20, 3)
        assert len({matrix.column(j) for j in range(20)}) == 20
        assert all(matrix.weight(j) == 4 for j in range(20))


class TestBchBinary:
    def test_shape(self):
        matrix = bch_binary_plus_ones(4)
        assert (matrix.m, matrix.n) == (9, 15)

    def test_first_column(self):
        assert bch_binary_plus_ones(4).column(0) == (1, 0, 0, 0, 1, 0, 0, 0, 1)

    def test_expansion_layout(self):
        # alpha^3 = 0b1000 lands in rows 4..7 of column 1.
        assert bch_binary_plus_ones(4).column(1) == (0, 1, 0, 0, 0, 0, 0, 1, 1)

    def test_any_four_columns_independent(self):
        matrix = restrict_rows(bch_binary_plus_ones(4), range(8))
        masks = [matrix.column_mask(j) for j in range(matrix.n)]
        for size in range(1, 5):
            for combo in combinations(masks, size):
                assert _xor(combo) != 0


class TestBdSequence:
    def test_gf256_d2(self):
        sequence = bd_sequence(GF256, 2)
        assert len(sequence) == 16
        assert int(sequence[0]) == 0
        assert len({int(g) for g in sequence}) == 16

    def test_packing_layout(self):
        # g_2 packs column 1 of H^2 over GF(16): (alpha, alpha^3) -> 0b1000_0010.
        assert int(bd_sequence(GF256, 2)[2]) == 0b10000010

    def test_infeasible(self):
        with pytest.raises(ConstructionInfeasibleError):
            bd_sequence(GF16, 8)

    def test_field_must_carry_hd(self):
        # d=3 at r=8 leaves w=2, and 2d-1 = 5 >= 4
        with pytest.raises(ConstructionInfeasibleError):
            bd_sequence(GF256, 3)
        assert block_degree(9, 3) == 3


class TestBlockDiagonal:
    def test_gf256_shape(self):
        matrix = block_diagonal(bd_sequence(GF256, 2)[1:], 256)
        assert matrix.m == 18
        assert all(matrix.weight(j) == 1 for j in range(256))
        assert matrix.support(15) == (1,)

    def test_single_block(self):
        g = bd_sequence(GF256, 2)[1:]
        assert block_diagonal(g, len(g)).m == 1

    def test_rejects_zero_entries(self):
        with pytest.raises(ConstructionError):
            block_diagonal(bd_sequence(GF256, 2), 16)


class TestBlockH2:
    def test_gf256_d4_shape(self):
        matrix = block_h2(GF256, 4, 256)
        assert matrix.m == 19
        assert all(matrix.weight(j) == 2 for j in range(256))

    def test_staircase_rows(self):
        matrix = block_h2(GF256, 4, 256)
        assert matrix.support(0) == (0, 1)
        assert matrix.support(15) == (1, 2)
        assert matrix.support(255) == (17, 18)

    def test_small_field_feasible(self):
        # GF(8) blocks: n' = 7
        assert block_h2(default_spec(6), 4, 9).m == 3

    def test_block_field_must_carry_h4(self):
        # GF(4) has alpha^3 = 1, so H^4 over it would repeat rows
        with pytest.raises(ConstructionInfeasibleError):
            block_h2(GF16, 4, 9)

    def test_infeasible(self):
        with pytest.raises(ConstructionInfeasibleError):
            block_h2(default_spec(2), 8, 4)

    @pytest.mark.parametrize("d", [3, 2])
    def test_rejects_odd_or_small_d(self, d):
        with pytest.raises(ConstructionError):
            block_h2(GF256, d, 16)


class TestBlockH2Hat:
    def test_tile_layout(self):
        matrix = block_h2_hat(GF256, 42)
        assert matrix.m == 3
        assert matrix.support(0) == (0, 1)
        assert matrix.support(14) == (1, 2)
        assert matrix.support(28) == (0, 2)
        assert all(matrix.weight(j) == 2 for j in range(42))

    def test_tiles_share_one_row(self):
        matrix = block_h2_hat(GF256, 45)
        assert matrix.m == 5
        assert matrix.support(42) == (2, 3)

    def test_infeasible(self):
        with pytest.raises(ConstructionInfeasibleError):
            block_h2_hat(default_spec(3), 10)


class TestPadRedundant:
    def test_zero_extra_is_identity(self):
        matrix = bch_gf(GF16, 2)
        assert pad_redundant(matrix, 0) is matrix

    def test_weight_grows_by_extra(self):
        padded = pad_redundant(bch_gf(GF16, 2), 2)
        assert padded.m == 4
        assert all(padded.weight(j) == 4 for j in range(15))
        assert padded.column(3)[2:] == (1, 0b10)


class TestExample2:
    def test_shape(self):
        matrix = example2_matrix()
        assert (matrix.m, matrix.n) == (5, 6)
        assert matrix.column(0) == (1, 0, 1, 0, 0)
        assert all(matrix.weight(j) == 2 for j in range(6))

    def test_rows_round_trip(self):
        rows = example2_matrix().to_rows()
        assert rows[0] == [1, 1, 1, 0, 0, 0]
        assert rows[4] == [0, 0, 1, 0, 0, 1]


def test_field_pack_unpack():
    packed = field_pack([0b01, 0b11, 0b10], 2)
    assert packed == 0b101101
    assert field_unpack(packed, 2, 3) == [0b01, 0b11, 0b10]


def test_restrict_columns_and_custom_matrix():
    matrix = from_columns([[1, 0], [0, 1], [1, 1]])
    view = restrict_columns(matrix, [2, 0])
    assert view.n == 2
    assert view.column(0) == (1, 1)
    with pytest.raises(IndexError):
        view.column(2)


def test_columns_are_deterministic():
    first = block_h2_hat(GF256, 84)
    second = block_h2_hat(GF256, 84)
    assert first.to_rows() == second.to_rows()
