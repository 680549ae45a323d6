"""Arithmetic in GF(2^r).

Elements are plain unsigned integers in the polynomial basis (bit i is the
coefficient of x^i). A `FieldSpec` carries the degree and the reduction
polynomial; hot paths call its integer methods directly, while
`FieldElement` wraps a value together with its spec for the typed API.

Multiplication uses log/antilog tables for r <= 16 and carry-less
shift-and-reduce above that.
"""

import logging
from dataclasses import dataclass, field
from functools import cache, cached_property
from typing import Iterator

from src.core.errors import FieldDivisionError, FieldMismatchError, UnsupportedFieldError

logger = logging.getLogger(__name__)

MIN_DEGREE = 2
MAX_DEGREE = 32
TABLE_MAX_DEGREE = 16

# Primitive polynomials, bit i = coefficient of x^i.
PRIMITIVE_POLYS: dict[int, int] = {
    2: 0x7,  # x^2+x+1
    3: 0xB,  # x^3+x+1
    4: 0x13,  # x^4+x+1
    5: 0x25,  # x^5+x^2+1
    6: 0x43,  # x^6+x+1
    7: 0x83,  # x^7+x+1
    8: 0x11D,  # x^8+x^4+x^3+x^2+1
    9: 0x211,  # x^9+x^4+1
    10: 0x409,  # x^10+x^3+1
    11: 0x805,  # x^11+x^2+1
    12: 0x1053,  # x^12+x^6+x^4+x+1
    13: 0x201B,  # x^13+x^4+x^3+x+1
    14: 0x402B,  # x^14+x^5+x^3+x+1
    15: 0x8003,  # x^15+x+1
    16: 0x1002D,  # x^16+x^5+x^3+x^2+1
    17: 0x20009,  # x^17+x^3+1
    18: 0x40081,  # x^18+x^7+1
    19: 0x80027,  # x^19+x^5+x^2+x+1
    20: 0x100009,  # x^20+x^3+1
    21: 0x200005,  # x^21+x^2+1
    22: 0x400003,  # x^22+x+1
    23: 0x800021,  # x^23+x^5+1
    24: 0x100001B,  # x^24+x^4+x^3+x+1
    25: 0x2000009,  # x^25+x^3+1
    26: 0x4000047,  # x^26+x^6+x^2+x+1
    27: 0x8000027,  # x^27+x^5+x^2+x+1
    28: 0x10000009,  # x^28+x^3+1
    29: 0x20000005,  # x^29+x^2+1
    30: 0x40000053,  # x^30+x^6+x^4+x+1
    31: 0x80000009,  # x^31+x^3+1
    32: 0x100400007,  # x^32+x^22+x^2+x+1
}


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a: int, mod: int) -> int:
    """Remainder of GF(2) polynomial `a` divided by `mod`."""
    mod_len = mod.bit_length()
    while a.bit_length() >= mod_len:
        a ^= mod << (a.bit_length() - mod_len)
    return a


def is_irreducible(poly: int) -> bool:
    """Check irreducibility over GF(2) by trial division.

    Tries every polynomial of degree 1..deg(poly)//2, which is only practical
    for desk-scale degrees.
    """
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if poly_mod(poly, divisor) == 0:
            return False
    return True


def _prime_factors(value: int) -> list[int]:
    factors = []
    p = 2
    while p * p <= value:
        if value % p == 0:
            factors.append(p)
            while value % p == 0:
                value //= p
        p += 1
    if value > 1:
        factors.append(value)
    return factors


@dataclass(frozen=True)
class FieldSpec:
    """Descriptor of GF(2^r): degree, reduction polynomial and primitive element.

    Attributes:
        r: Field degree.
        poly: Irreducible polynomial of degree exactly r, bit i = coefficient of x^i.
        alpha: The canonical primitive element (the class of x by default).
    """

    r: int
    poly: int
    alpha: int = field(default=0b10)

    def __post_init__(self) -> None:
        if not MIN_DEGREE <= self.r <= MAX_DEGREE:
            raise UnsupportedFieldError(f"Field degree r={self.r} outside [{MIN_DEGREE}, {MAX_DEGREE}]")
        if self.poly.bit_length() != self.r + 1:
            raise UnsupportedFieldError(f"Polynomial {self.poly:#x} does not have degree {self.r}")
        if not 0 < self.alpha < self.size:
            raise UnsupportedFieldError(f"alpha={self.alpha:#x} is not a nonzero element of GF(2^{self.r})")

    @classmethod
    def from_poly(cls, r: int, poly: int) -> "FieldSpec":
        """Build a spec from a user-supplied polynomial, checking that x is primitive."""
        spec = cls(r=r, poly=poly)
        if not is_primitive(spec):
            raise UnsupportedFieldError(f"Polynomial {poly:#x} is not primitive for r={r}")
        return spec

    @property
    def size(self) -> int:
        return 1 << self.r

    @property
    def order(self) -> int:
        """Order of the multiplicative group, 2^r - 1."""
        return (1 << self.r) - 1

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]] | None:
        if self.r > TABLE_MAX_DEGREE:
            return None
        exp = [0] * (2 * self.order)
        log = [0] * self.size
        value = 1
        for i in range(self.order):
            exp[i] = value
            log[value] = i
            value = poly_mod(clmul(value, self.alpha), self.poly)
        for i in range(self.order, 2 * self.order):
            exp[i] = exp[i - self.order]
        logger.debug("Built log/antilog tables for GF(2^%d)", self.r)
        return exp, log

    def elements(self) -> Iterator[int]:
        """All field elements in increasing integer order."""
        return iter(range(self.size))

    def check(self, value: int) -> int:
        if not 0 <= value < self.size:
            raise FieldMismatchError(f"Value {value:#x} is not an element of GF(2^{self.r})")
        return value

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[log[a] + log[b]]
        return poly_mod(clmul(a, b), self.poly)

    def power(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError(f"Negative exponent {e}")
        if e == 0:
            return 1
        if a == 0:
            return 0
        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[(log[a] * e) % self.order]
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionError(f"Zero has no inverse in GF(2^{self.r})")
        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[(self.order - log[a]) % self.order]
        return self.power(a, self.order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def alpha_power(self, e: int) -> int:
        """alpha^e, with e reduced modulo the group order."""
        return self.power(self.alpha, e % self.order)

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldDivisionError("Zero has no multiplicative order")
        order = self.order
        for p in _prime_factors(self.order):
            while order % p == 0 and self.power(a, order // p) == 1:
                order //= p
        return order


def _plain_power(spec: FieldSpec, a: int, e: int) -> int:
    result = 1
    while e:
        if e & 1:
            result = poly_mod(clmul(result, a), spec.poly)
        a = poly_mod(clmul(a, a), spec.poly)
        e >>= 1
    return result


def is_primitive(spec: FieldSpec) -> bool:
    """Check that spec.poly is irreducible with alpha generating the multiplicative group.

    Works without the log tables (which assume primitivity) and uses the prime
    factors of 2^r - 1, so it stays fast up to r = 32. Trial-division
    irreducibility runs on top for r <= 16 only; above that a full-order alpha
    already rules out a reducible polynomial.
    """
    if spec.r <= TABLE_MAX_DEGREE and not is_irreducible(spec.poly):
        return False
    if _plain_power(spec, spec.alpha, spec.order) != 1:
        return False
    return all(_plain_power(spec, spec.alpha, spec.order // p) != 1 for p in _prime_factors(spec.order))


@cache
def default_spec(r: int) -> FieldSpec:
    """The fixed primitive-polynomial field for degree r, with alpha = x.

    Raises:
        UnsupportedFieldError: If r is outside [2, 32].
    """
    if r not in PRIMITIVE_POLYS:
        raise UnsupportedFieldError(f"No default polynomial for r={r}; supported range is [{MIN_DEGREE}, {MAX_DEGREE}]")
    return FieldSpec(r=r, poly=PRIMITIVE_POLYS[r])


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(2^r) tied to its field descriptor."""

    value: int
    spec: FieldSpec

    def __post_init__(self) -> None:
        self.spec.check(self.value)

    def _same(self, other: "FieldElement") -> None:
        if self.spec != other.spec:
            raise FieldMismatchError(f"Cannot combine GF(2^{self.spec.r}) with GF(2^{other.spec.r}) elements")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return add(self, other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return mul(self, other)

    def __pow__(self, e: int) -> "FieldElement":
        return power(self, e)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"GF(2^{self.spec.r})({self.value:#0{self.spec.r + 2}b})"


def element(spec: FieldSpec, value: int) -> FieldElement:
    return FieldElement(value, spec)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Field addition (bitwise XOR).

    Raises:
        FieldMismatchError: If the operands belong to different fields.
    """
    a._same(b)
    return FieldElement(a.value ^ b.value, a.spec)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Field multiplication modulo the spec's polynomial.

    Raises:
        FieldMismatchError: If the operands belong to different fields.
    """
    a._same(b)
    return FieldElement(a.spec.mul(a.value, b.value), a.spec)


def power(a: FieldElement, e: int) -> FieldElement:
    """a^e by repeated squaring; power(a, 0) is 1 for every a."""
    return FieldElement(a.spec.power(a.value, e), a.spec)


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse.

    Raises:
        FieldDivisionError: If a is zero.
    """
    return FieldElement(a.spec.inv(a.value), a.spec)


def div(a: FieldElement, b: FieldElement) -> FieldElement:
    a._same(b)
    return FieldElement(a.spec.div(a.value, b.value), a.spec)


def order(a: FieldElement) -> int:
    """Multiplicative order of a nonzero element."""
    return a.spec.element_order(a.value)


def to_bits(a: FieldElement) -> list[int]:
    """Polynomial-basis coefficients, index i holding the coefficient of x^i."""
    return [(a.value >> i) & 1 for i in range(a.spec.r)]
