"""Exact arithmetic on fixed-length bit vectors over GF(2).

A vector lives in B^m with 1 <= m <= 64 and is stored packed in a single
unsigned integer, little-endian: bit k of ``value`` is component b_k, so b_0
is the least significant bit.  String renderings are big-endian
(b_{m-1} ... b_0), matching the usual circuit-measurement labels.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_BITS = 64

# cip_census walks all 2^m vectors; refuse anything that would not stay cheap.
CIP_ENUMERATION_CAP = 20


@dataclass(frozen=True, slots=True)
class BitVector:
    """Element of B^m, packed into an unsigned machine word."""

    value: int
    length: int

    def __post_init__(self) -> None:
        if not isinstance(self.length, int) or not 1 <= self.length <= MAX_BITS:
            raise ValueError(f"length must be an int in [1, {MAX_BITS}], got {self.length!r}")
        if not isinstance(self.value, int) or not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value!r} does not fit in {self.length} bits")

    @classmethod
    def from_string(cls, text: str) -> BitVector:
        """Parse a big-endian digit string such as ``"110010"``."""
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text, 2), len(text))

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(0, length)

    @classmethod
    def random(cls, length: int, rng) -> BitVector:
        """Uniform element of B^length drawn from ``rng``."""
        raw = int.from_bytes(rng.bytes(8), "little")
        return cls(raw & ((1 << length) - 1), length)

    def bit(self, k: int) -> int:
        """Component b_k (little-endian index)."""
        if not 0 <= k < self.length:
            raise IndexError(f"bit index {k} out of range for length {self.length}")
        return (self.value >> k) & 1

    def bits(self) -> tuple[int, ...]:
        """All components, little-endian order (b_0 first)."""
        return tuple((self.value >> k) & 1 for k in range(self.length))

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __xor__(self, other: BitVector) -> BitVector:
        _check_same_length(self, other)
        return BitVector(self.value ^ other.value, self.length)

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b")

    def __repr__(self) -> str:
        return f"BitVector('{self}')"


def _check_same_length(a: BitVector, b: BitVector) -> None:
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} vs {b.length}")


def xor(a: BitVector, b: BitVector) -> BitVector:
    """Componentwise sum in GF(2).  Lengths must agree."""
    return a ^ b


def inner_product_mod2(a: BitVector, b: BitVector) -> int:
    """a . b = a_{m-1} b_{m-1} xor ... xor a_0 b_0."""
    _check_same_length(a, b)
    return (a.value & b.value).bit_count() & 1


def cip_census(c: BitVector, cap: int = CIP_ENUMERATION_CAP) -> tuple[int, int]:
    """Count x in B^m with c . x = 0 and with c . x = 1, by full enumeration.

    For c = 0 every x gives 0; for c != 0 the two fibers split B^m exactly in
    half.  The census recomputes that partition from scratch rather than
    assuming it.
    """
    if c.length > cap:
        raise ValueError(f"enumeration over 2^{c.length} vectors exceeds cap 2^{cap}")
    ones = 0
    for x in range(1 << c.length):
        ones += (c.value & x).bit_count() & 1
    return (1 << c.length) - ones, ones
