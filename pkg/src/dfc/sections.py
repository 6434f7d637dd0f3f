"""Section partitioning and the 8-byte section head.

A section is the codec's unit of work: a run of consecutive N symbols
followed by the run of determined bases that ends just before the next
N. On disk every section opens with an 8-byte head:

    bytes 0-3   count of N bases,        32-bit unsigned little-endian
    bytes 4-7   count of non-N bases,    32-bit unsigned little-endian

followed by ceil(b_count / 4) payload bytes of packed bases. The head
counters cap each field at 2**32 - 1; longer runs are split across
sections (see sectionize). There is no file-level header or trailer;
a compressed stream is just sections back to back.
"""

import re
import struct
from dataclasses import dataclass

from .errors import InvalidSymbolError, TruncatedHeaderError

HEADER_SIZE = 8
_HEADER = struct.Struct("<II")

# Field limit of the 32-bit head counters.
MAX_SECTION_N = 2**32 - 1
# Largest multiple of 4 that fits the counter, so payloads of split
# base runs stay byte-aligned with no interior padding.
MAX_SECTION_BASES = 2**32 - 4

_RUN = re.compile(r"N+|[^N]+")
_NON_BASE = re.compile(r"[^ACGT]")


@dataclass(frozen=True)
class SectionHeader:
    """The two 32-bit counters that open a section on disk."""

    n_count: int
    b_count: int

    def __post_init__(self):
        for name, value in (("n_count", self.n_count), ("b_count", self.b_count)):
            if not 0 <= value <= MAX_SECTION_N:
                raise ValueError(f"{name} out of 32-bit range: {value}")

    @property
    def payload_size(self) -> int:
        """Payload bytes following this head: ceil(b_count / 4)."""
        return (self.b_count + 3) // 4


@dataclass(frozen=True)
class Section:
    """A head plus the determined bases it covers."""

    header: SectionHeader
    bases: str = ""

    def __post_init__(self):
        if len(self.bases) != self.header.b_count:
            raise ValueError(
                f"bases length {len(self.bases)} != b_count {self.header.b_count}"
            )
        if self.header.n_count == 0 and self.header.b_count == 0:
            raise ValueError("empty section (n_count and b_count both zero)")
        bad = _NON_BASE.search(self.bases)
        if bad:
            raise InvalidSymbolError(bad.group(), offset=bad.start())

    @classmethod
    def of(cls, n_count: int, bases: str) -> "Section":
        return cls(SectionHeader(n_count, len(bases)), bases)


def write_header(header: SectionHeader) -> bytes:
    """Serialize a head to its 8-byte on-disk form."""
    return _HEADER.pack(header.n_count, header.b_count)


def read_header(data: bytes) -> SectionHeader:
    """Parse an 8-byte head. Inverse of write_header.

    Raises TruncatedHeaderError when fewer than 8 bytes are given.
    """
    if len(data) < HEADER_SIZE:
        raise TruncatedHeaderError(offset=0, available=len(data))
    n_count, b_count = _HEADER.unpack(data[:HEADER_SIZE])
    return SectionHeader(n_count, b_count)


def sectionize(sequence: str, *, max_n_run: int = MAX_SECTION_N,
               max_base_run: int = MAX_SECTION_BASES) -> list[Section]:
    """Greedy partition of a normalized sequence into sections.

    Each section takes a maximal N run (empty for a sequence that opens
    with bases) plus the maximal base run that follows. A sequence
    ending in Ns yields a final section with b_count 0; without that
    section trailing Ns would be unrecoverable. Runs longer than the
    head counters allow are split: oversized N runs emit (max_n_run, 0)
    sections until the remainder fits, and oversized base runs split at
    max_base_run with continuation sections carrying n_count 0.

    The run limits are parameters only so the splitting logic can be
    exercised without building multi-gigabyte strings; production
    callers use the defaults.
    """
    if max_n_run < 1 or max_n_run > MAX_SECTION_N:
        raise ValueError(f"max_n_run out of range: {max_n_run}")
    if not 4 <= max_base_run <= MAX_SECTION_BASES or max_base_run % 4:
        raise ValueError(f"max_base_run must be a multiple of 4: {max_base_run}")

    sections = []
    pending_n = 0
    for match in _RUN.finditer(sequence):
        run = match.group()
        if run[0] == "N":
            pending_n = len(run)
            while pending_n > max_n_run:
                sections.append(Section.of(max_n_run, ""))
                pending_n -= max_n_run
        else:
            bad = _NON_BASE.search(run)
            if bad:
                raise InvalidSymbolError(bad.group(), offset=match.start() + bad.start())
            while len(run) > max_base_run:
                sections.append(Section.of(pending_n, run[:max_base_run]))
                pending_n = 0
                run = run[max_base_run:]
            sections.append(Section.of(pending_n, run))
            pending_n = 0
    if pending_n:
        sections.append(Section.of(pending_n, ""))
    return sections


def compressed_size_bytes(sections: list[Section]) -> int:
    """Exact on-disk size of a section list: sum of 8 + ceil(b/4)."""
    return sum(HEADER_SIZE + s.header.payload_size for s in sections)


def compression_ratio(sections: list[Section], total_bases: int) -> float:
    """Bits per base: 8 * compressed size / total symbol count.

    2.0 is the floor for N-free input; each section adds a fixed
    64-bit head on top of the two bits per base.
    """
    if total_bases <= 0:
        raise ValueError("compression ratio undefined for zero bases")
    return 8 * compressed_size_bytes(sections) / total_bases
