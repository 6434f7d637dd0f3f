"""Streaming compression and decompression over the section format.

A compressed stream is zero or more sections, each an 8-byte head
followed by ceil(b_count / 4) payload bytes (see sections module for
the head layout and bases module for the bit packing). The compressor
is single pass. The head carries the base count, which is only known
once the section ends, so:

  * on a seekable sink the head is written with a placeholder count and
    patched in place when the section closes;
  * on a non-seekable sink (a pipe) the packed payload of the current
    section is buffered and written after its head. Auxiliary memory is
    bounded by one section's payload either way.

Both modes produce byte-identical output. A failed compress leaves the
sink in an undefined state; file-writing callers should write to a
temporary path and rename on success.
"""

import io
import struct
from dataclasses import dataclass
from time import perf_counter
from typing import Iterator

import numpy as np

from .bases import BASE_TO_CODE, CODE_TO_BASE, pack_quad
from .errors import (
    InvalidSymbolError,
    StreamFormatError,
    TruncatedHeaderError,
    TruncatedPayloadError,
)
from .sections import (
    HEADER_SIZE,
    MAX_SECTION_BASES,
    MAX_SECTION_N,
    SectionHeader,
    _HEADER,
    _RUN,
)

_CHUNK_SYMBOLS = 1 << 20
_N_WRITE_CHUNK = 1 << 20
_DECODE_CHUNK_BYTES = 1 << 18
_B_PATCH = struct.Struct("<I")

# Symbol byte -> 2-bit code, 0xFF marking anything outside ATGC.
_ENC_LUT = np.full(256, 0xFF, dtype=np.uint8)
for _sym, _code in BASE_TO_CODE.items():
    _ENC_LUT[ord(_sym)] = _code
# Payload byte -> its four symbols, so decode is one table gather.
_QUAD_LUT = np.empty((256, 4), dtype=np.uint8)
for _byte in range(256):
    for _i in range(4):
        _QUAD_LUT[_byte, _i] = ord(CODE_TO_BASE[(_byte >> (6 - 2 * _i)) & 0b11])


@dataclass(frozen=True)
class CodecStats:
    """Counters for one compress or decompress run.

    ``output_bytes`` is the size of the compressed stream in both
    directions (bytes written when compressing, bytes consumed when
    decompressing), so it always equals sections * 8 + sum(ceil(b/4)).
    """

    input_bases: int
    input_n_bases: int
    sections: int
    output_bytes: int
    elapsed: float

    @property
    def bits_per_base(self) -> float:
        if self.input_bases == 0:
            raise ValueError("compression ratio undefined for zero bases")
        return 8 * self.output_bytes / self.input_bases


@dataclass
class VerifyReport:
    """Result of walking a compressed stream without decoding it."""

    well_formed: bool
    sections: int
    total_bases: int
    n_bases: int
    canonical_padding: bool
    issues: list
    stream_bytes: int = 0

    def summary(self) -> str:
        state = "well-formed" if self.well_formed else "MALFORMED"
        pad = "canonical" if self.canonical_padding else "non-canonical padding"
        return (
            f"{state}, {self.sections} sections, {self.total_bases} bases "
            f"({self.n_bases} N), {pad}"
        )


def _encode_run(run: str, base_offset: int) -> np.ndarray:
    """Map a run of base symbols to their 2-bit codes, validating as we go."""
    try:
        raw = run.encode("ascii")
    except UnicodeEncodeError as exc:
        raise InvalidSymbolError(run[exc.start], offset=base_offset + exc.start) from None
    codes = _ENC_LUT[np.frombuffer(raw, dtype=np.uint8)]
    bad = codes == 0xFF
    if bad.any():
        i = int(bad.argmax())
        raise InvalidSymbolError(run[i], offset=base_offset + i)
    return codes


def _pack_aligned(codes: np.ndarray) -> bytes:
    """Pack a code array whose length is a multiple of 4, four per byte."""
    quads = codes.reshape(-1, 4)
    packed = (quads[:, 0] << 6) | (quads[:, 1] << 4) | (quads[:, 2] << 2) | quads[:, 3]
    return packed.astype(np.uint8).tobytes()


def _decode_payload(payload: bytes, count: int) -> str:
    """Unpack payload bytes back to `count` symbols, ignoring padding bits."""
    raw = np.frombuffer(payload, dtype=np.uint8)
    return _QUAD_LUT[raw].reshape(-1)[:count].tobytes().decode("ascii")


def _is_seekable(sink) -> bool:
    try:
        return sink.seekable()
    except AttributeError:
        return False


class SectionCompressor:
    """Incremental single-pass compressor.

    Feed normalized symbols ({A,C,G,T,N}) through write() in chunks of
    any size, then call close() to flush the final section. Counter
    attributes (bases, n_bases, sections, bytes_written) are valid once
    close() returns. peak_buffer_bytes records the largest payload
    buffer held at any point, which stays at zero on seekable sinks.
    """

    def __init__(self, sink, *, max_n_run: int = MAX_SECTION_N,
                 max_base_run: int = MAX_SECTION_BASES):
        if max_n_run < 1 or max_n_run > MAX_SECTION_N:
            raise ValueError(f"max_n_run out of range: {max_n_run}")
        if not 4 <= max_base_run <= MAX_SECTION_BASES or max_base_run % 4:
            raise ValueError(f"max_base_run must be a multiple of 4: {max_base_run}")
        self._sink = sink
        self._seekable = _is_seekable(sink)
        self._max_n = max_n_run
        self._max_b = max_base_run
        self._n = 0          # N count of the section being built
        self._b = 0          # base count of the section being built
        self._tail = ""      # 0..3 bases awaiting a full quad
        self._head_pos = None   # seekable mode: where the open head sits
        self._payload = None    # pipe mode: buffered payload of the open section
        self._offset = 0     # symbols consumed, for error reporting
        self._closed = False
        self.bases = 0
        self.n_bases = 0
        self.sections = 0
        self.bytes_written = 0
        self.peak_buffer_bytes = 0

    def write(self, symbols: str) -> None:
        if self._closed:
            raise ValueError("compressor is closed")
        for match in _RUN.finditer(symbols):
            run = match.group()
            if run[0] == "N":
                if self._b:
                    self._finish_section()
                self._n += len(run)
                while self._n > self._max_n:
                    self._write_n_only(self._max_n)
                    self._n -= self._max_n
            else:
                self._add_bases(run, self._offset + match.start())
        self._offset += len(symbols)

    def close(self) -> None:
        if self._closed:
            return
        if self._n or self._b:
            self._finish_section()
        self._closed = True

    # -- section assembly ------------------------------------------------

    def _add_bases(self, run: str, run_offset: int) -> None:
        while len(run) > self._max_b - self._b:
            take = self._max_b - self._b
            self._append(run[:take], run_offset)
            self._finish_section()  # split boundary; continuation has n = 0
            run = run[take:]
            run_offset += take
        self._append(run, run_offset)

    def _append(self, run: str, run_offset: int) -> None:
        if not run:
            return
        combined = self._tail + run
        codes = _encode_run(combined, run_offset - len(self._tail))
        if self._head_pos is None and self._payload is None:
            self._open_section()
        full = len(combined) & ~3
        if full:
            self._write_payload(_pack_aligned(codes[:full]))
        self._tail = combined[full:]
        self._b += len(run)

    def _open_section(self) -> None:
        if self._seekable:
            self._head_pos = self._sink.tell()
            self._sink.write(_HEADER.pack(self._n, 0))
        else:
            self._payload = bytearray()

    def _write_payload(self, data: bytes) -> None:
        if self._seekable:
            self._sink.write(data)
        else:
            self._payload.extend(data)
            if len(self._payload) > self.peak_buffer_bytes:
                self.peak_buffer_bytes = len(self._payload)

    def _finish_section(self) -> None:
        if self._tail:
            self._write_payload(bytes([pack_quad(self._tail).byte]))
            self._tail = ""
        if self._head_pos is not None:
            end = self._sink.tell()
            self._sink.seek(self._head_pos + 4)
            self._sink.write(_B_PATCH.pack(self._b))
            self._sink.seek(end)
            self._head_pos = None
        elif self._payload is not None:
            self._sink.write(_HEADER.pack(self._n, self._b))
            self._sink.write(self._payload)
            self._payload = None
        else:
            # No bases: a trailing-N or oversized-N section, head only.
            self._sink.write(_HEADER.pack(self._n, self._b))
        self._account(self._n, self._b)
        self._n = 0
        self._b = 0

    def _write_n_only(self, count: int) -> None:
        self._sink.write(_HEADER.pack(count, 0))
        self._account(count, 0)

    def _account(self, n: int, b: int) -> None:
        self.sections += 1
        self.n_bases += n
        self.bases += n + b
        self.bytes_written += HEADER_SIZE + (b + 3) // 4


def _iter_symbol_chunks(source) -> Iterator[str]:
    if isinstance(source, str):
        # Slice large strings so per-chunk working sets stay cache-sized.
        for start in range(0, len(source), _CHUNK_SYMBOLS):
            yield source[start:start + _CHUNK_SYMBOLS]
        return
    read = getattr(source, "read", None)
    if read is not None:
        while True:
            chunk = read(_CHUNK_SYMBOLS)
            if not chunk:
                return
            yield chunk.decode("latin-1") if isinstance(chunk, bytes) else chunk
    for chunk in source:
        if chunk:
            yield chunk


def compress(source, sink, *, max_n_run: int = MAX_SECTION_N,
             max_base_run: int = MAX_SECTION_BASES) -> CodecStats:
    """Compress normalized symbols into the section stream format.

    ``source`` may be a string, a file-like object, or an iterable of
    string chunks; it must yield only {A,C,G,T,N}. ``sink`` is a binary
    writable. Returns counters for the run.
    """
    start = perf_counter()
    comp = SectionCompressor(sink, max_n_run=max_n_run, max_base_run=max_base_run)
    for chunk in _iter_symbol_chunks(source):
        comp.write(chunk)
    comp.close()
    return CodecStats(
        input_bases=comp.bases,
        input_n_bases=comp.n_bases,
        sections=comp.sections,
        output_bytes=comp.bytes_written,
        elapsed=perf_counter() - start,
    )


def _read_exact(source, count: int) -> bytes:
    parts = []
    remaining = count
    while remaining:
        piece = source.read(remaining)
        if not piece:
            break
        parts.append(piece)
        remaining -= len(piece)
    return b"".join(parts)


def _walk_sections(source) -> Iterator[tuple[int, SectionHeader, bytes]]:
    """Yield (head offset, header, payload) for each section in a stream.

    Raises TruncatedHeaderError / TruncatedPayloadError at the exact
    byte the stream fell short; a stream ending on a section boundary
    ends the iteration cleanly.
    """
    offset = 0
    while True:
        head = _read_exact(source, HEADER_SIZE)
        if not head:
            return
        if len(head) < HEADER_SIZE:
            raise TruncatedHeaderError(offset=offset, available=len(head))
        n_count, b_count = _HEADER.unpack(head)
        header = SectionHeader(n_count, b_count)
        payload = _read_exact(source, header.payload_size)
        if len(payload) < header.payload_size:
            raise TruncatedPayloadError(
                offset=offset + HEADER_SIZE,
                expected=header.payload_size,
                available=len(payload),
            )
        yield offset, header, payload
        offset += HEADER_SIZE + header.payload_size


def decompress(source, sink) -> CodecStats:
    """Decode a compressed stream, writing symbols to a text sink.

    ``source`` is a binary readable or a bytes object. Each section
    contributes its Ns then its decoded bases. The stream must end on a
    section boundary; anything else raises a truncation error.
    """
    if isinstance(source, (bytes, bytearray, memoryview)):
        source = io.BytesIO(source)
    start = perf_counter()
    bases = n_bases = sections = consumed = 0
    for _, header, payload in _walk_sections(source):
        sections += 1
        remaining = header.n_count
        while remaining:
            step = min(remaining, _N_WRITE_CHUNK)
            sink.write("N" * step)
            remaining -= step
        if header.b_count:
            # Decode in bounded slices; one payload byte is four symbols.
            left = header.b_count
            for at in range(0, len(payload), _DECODE_CHUNK_BYTES):
                piece = payload[at:at + _DECODE_CHUNK_BYTES]
                take = min(4 * len(piece), left)
                sink.write(_decode_payload(piece, take))
                left -= take
        n_bases += header.n_count
        bases += header.n_count + header.b_count
        consumed += HEADER_SIZE + header.payload_size
    return CodecStats(
        input_bases=bases,
        input_n_bases=n_bases,
        sections=sections,
        output_bytes=consumed,
        elapsed=perf_counter() - start,
    )


def verify(source, *, permissive: bool = False) -> VerifyReport:
    """Walk a compressed stream without producing output.

    Checks structure (complete heads and payloads) and whether padding
    bits are canonical (all zero). Structural errors raise unless
    ``permissive`` is set, in which case they are collected into the
    report and the walk stops; degraded padding never raises.
    """
    if isinstance(source, (bytes, bytearray, memoryview)):
        source = io.BytesIO(source)
    report = VerifyReport(
        well_formed=True,
        sections=0,
        total_bases=0,
        n_bases=0,
        canonical_padding=True,
        issues=[],
    )
    walker = _walk_sections(source)
    while True:
        try:
            item = next(walker)
        except StopIteration:
            break
        except StreamFormatError as exc:
            report.well_formed = False
            report.issues.append(str(exc))
            if not permissive:
                raise
            break
        offset, header, payload = item
        report.sections += 1
        report.total_bases += header.n_count + header.b_count
        report.n_bases += header.n_count
        report.stream_bytes += HEADER_SIZE + header.payload_size
        if header.n_count == 0 and header.b_count == 0:
            report.issues.append(
                f"empty section (both counts zero) at byte {offset}"
            )
        pad_bases = header.b_count % 4
        if pad_bases:
            mask = (1 << (2 * (4 - pad_bases))) - 1
            if payload[-1] & mask:
                report.canonical_padding = False
                report.issues.append(
                    f"non-canonical padding bits in section at byte {offset}"
                )
    return report
