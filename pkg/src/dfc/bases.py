"""Two-bit coding of the determined nucleotides and per-byte quad packing.

The four determined bases map to fixed two-bit codes:

    A -> 00    T -> 01    G -> 10    C -> 11

One byte carries up to four bases. The earliest base occupies the two
most significant bits and later bases follow toward the least
significant end, so a hex dump reads left to right in sequence order.
When a byte carries fewer than four bases the encoder zeroes the unused
low bits (canonical padding); decoding ignores whatever is there.

This module is the bit-level contract for the stream codec. N is not a
codable symbol here: runs of N are stored by count in the section head,
never as payload bits.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import InvalidSymbolError


class Base(Enum):
    """The four determined nucleotides with their fixed two-bit codes."""

    A = 0b00
    T = 0b01
    G = 0b10
    C = 0b11

    @property
    def code(self) -> int:
        return self.value

    @property
    def symbol(self) -> str:
        return self.name


BASE_TO_CODE = {b.name: b.value for b in Base}
CODE_TO_BASE = "ATGC"  # indexable by code

BASES_PER_BYTE = 4
BITS_PER_BASE = 2


@dataclass(frozen=True)
class PackedQuad:
    """One payload byte together with how many of its bases are effective.

    ``byte`` may carry non-canonical (nonzero) padding; decoding is
    tolerant of that. Only the encoder promises zeroed padding.
    """

    byte: int
    count: int

    def __post_init__(self):
        if not 0 <= self.byte <= 0xFF:
            raise ValueError(f"byte out of range: {self.byte}")
        if not 1 <= self.count <= BASES_PER_BYTE:
            raise ValueError(f"count must be 1..4, got {self.count}")

    @property
    def is_canonical(self) -> bool:
        """True when all bits below the effective region are zero."""
        pad_bits = BITS_PER_BASE * (BASES_PER_BYTE - self.count)
        return self.byte & ((1 << pad_bits) - 1) == 0


def encode_base(symbol: str) -> int:
    """Return the two-bit code for one of A, T, G, C (uppercase).

    Case folding and N handling live in the ingest layer; anything but
    the four coding symbols raises InvalidSymbolError.
    """
    try:
        return BASE_TO_CODE[symbol]
    except (KeyError, TypeError):
        raise InvalidSymbolError(symbol) from None


def decode_base(code: int) -> str:
    """Return the nucleotide for a two-bit code. Inverse of encode_base."""
    if not 0 <= code <= 3:
        raise ValueError(f"base code must be 0..3, got {code}")
    return CODE_TO_BASE[code]


def pack_quad(bases) -> PackedQuad:
    """Pack 1 to 4 base symbols into one byte, earliest base in the high bits.

    Accepts a string or any iterable of single-character symbols.
    Unused low bits are zero.
    """
    symbols = bases if isinstance(bases, str) else "".join(bases)
    if not 1 <= len(symbols) <= BASES_PER_BYTE:
        raise ValueError(f"pack_quad takes 1..4 bases, got {len(symbols)}")
    byte = 0
    for i, symbol in enumerate(symbols):
        try:
            code = BASE_TO_CODE[symbol]
        except KeyError:
            raise InvalidSymbolError(symbol, offset=i) from None
        byte |= code << (6 - BITS_PER_BASE * i)
    return PackedQuad(byte, len(symbols))


def unpack_quad(quad: PackedQuad) -> str:
    """Recover the effective bases of a packed byte.

    Reads only the top ``2 * count`` bits, so non-canonical padding in
    the remainder of the byte is ignored.
    """
    return "".join(
        CODE_TO_BASE[(quad.byte >> (6 - BITS_PER_BASE * i)) & 0b11]
        for i in range(quad.count)
    )
