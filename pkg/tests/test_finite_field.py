"""Tests for GF(2^r) arithmetic."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import FieldDivisionError, FieldMismatchError, UnsupportedFieldError
from src.finite_field import (
    PRIMITIVE_POLYS,
    FieldElement,
    FieldSpec,
    add,
    default_spec,
    div,
    element,
    inv,
    is_irreducible,
    is_primitive,
    mul,
    order,
    power,
    to_bits,
)

GF16 = default_spec(4)


def e16(value: int) -> FieldElement:
    return element(GF16, value)


class TestDefaultSpec:
    def test_gf16_polynomial(self):
        assert GF16.poly == 0b10011
        assert GF16.alpha == 0b10

    def test_gf256_polynomial(self):
        assert default_spec(8).poly == 0b100011101

    @pytest.mark.parametrize("r", [1, 33])
    def test_unsupported_degree(self, r):
        with pytest.raises(UnsupportedFieldError):
            default_spec(r)

    def test_table_is_primitive(self):
        for r in PRIMITIVE_POLYS:
            assert is_primitive(default_spec(r)), f"r={r}"

    def test_table_polynomials_irreducible(self):
        for r in range(2, 17):
            assert is_irreducible(PRIMITIVE_POLYS[r])


def test_add_examples():
    assert add(e16(0b0011), e16(0b0001)) == e16(0b0010)
    assert add(e16(0b0111), e16(0)) == e16(0b0111)
    assert add(e16(0b0111), e16(0b0111)) == e16(0)


def test_mul_examples():
    assert mul(e16(0b0010), e16(0b1000)) == e16(0b0011)
    assert mul(e16(0b0100), e16(0b1000)) == e16(0b0110)
    assert mul(e16(0b1011), e16(0)) == e16(0)
    assert mul(e16(0b1011), e16(1)) == e16(0b1011)


def test_power_examples():
    alpha = e16(0b10)
    assert power(alpha, 0) == e16(1)
    assert power(alpha, 4) == e16(0b0011)
    assert power(alpha, 15) == e16(1)
    assert power(e16(0), 0) == e16(1)


def test_inverse_examples():
    assert inv(e16(1)) == e16(1)
    assert inv(e16(0b10)) == e16(0b1001)
    with pytest.raises(FieldDivisionError):
        inv(e16(0))


def test_division_by_zero_is_zero_division_error():
    with pytest.raises(ZeroDivisionError):
        div(e16(3), e16(0))


def test_operator_overloads():
    a, b = e16(0b0110), e16(0b1010)
    assert a + b == add(a, b)
    assert a * b == mul(a, b)
    assert a**3 == power(a, 3)
    assert int(a) == 0b0110
    assert not e16(0)


def test_mismatched_fields_rejected():
    with pytest.raises(FieldMismatchError):
        add(e16(1), element(default_spec(8), 1))
    with pytest.raises(FieldMismatchError):
        mul(e16(1), element(default_spec(3), 1))


def test_element_out_of_range():
    with pytest.raises(FieldMismatchError):
        e16(16)


def test_from_poly_rejects_non_primitive():
    # x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
    assert is_irreducible(0b11111)
    with pytest.raises(UnsupportedFieldError):
        FieldSpec.from_poly(4, 0b11111)
    assert FieldSpec.from_poly(4, 0b11001).poly == 0b11001


def test_reducible_polynomial_detected():
    assert not is_irreducible(0b10101)  # (x^2 + x + 1)^2


def test_to_bits_lsb_first():
    assert to_bits(e16(0b0011)) == [1, 1, 0, 0]


@pytest.mark.parametrize("r", range(2, 13))
def test_alpha_generates_group(r):
    spec = default_spec(r)
    assert order(element(spec, spec.alpha)) == spec.order
    for a in range(1, min(spec.size, 64)):
        assert spec.order % spec.element_order(a) == 0


@pytest.mark.parametrize("r", [2, 3, 4])
def test_field_axioms_exhaustive(r):
    spec = default_spec(r)
    values = range(spec.size)
    for a in values:
        assert spec.power(a, 2) == spec.mul(a, a)
        if a:
            assert spec.mul(a, spec.inv(a)) == 1
        for b in values:
            assert spec.mul(a, b) == spec.mul(b, a)
            for c in values:
                assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
                assert spec.mul(a, b ^ c) == spec.mul(a, b) ^ spec.mul(a, c)


@pytest.mark.parametrize("r", [8, 20, 32])
@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_field_axioms_random(r, data):
    spec = default_spec(r)
    elements = st.integers(min_value=0, max_value=spec.size - 1)
    a, b, c = data.draw(elements), data.draw(elements), data.draw(elements)
    assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
    assert spec.mul(a, b ^ c) == spec.mul(a, b) ^ spec.mul(a, c)
    assert spec.power(a, 2) == spec.mul(a, a)
    if a:
        assert spec.mul(a, spec.inv(a)) == 1


def test_alpha_power_reduces_exponent():
    assert GF16.alpha_power(-1) == 0b1001
    assert GF16.alpha_power(15) == 1
