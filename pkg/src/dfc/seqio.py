"""Text ingestion and rendering around the codec's 5-symbol alphabet.

All whitespace, case, and header policy lives here so the codec only
ever sees {A,C,G,T,N}. Round-trip fidelity is defined over the
normalized symbol string: line breaks, lowercase, and FASTA headers are
not preserved, because the compressed format has nowhere to store them.
"""

import io
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import IngestError

ALPHABET = "ACGTN"
IUPAC_AMBIGUITY = "RYSWKMBDHV"

# LF, CR, space, and tab are stripped; anything else must survive the
# policy transforms or ingestion fails.
_WHITESPACE = " \t\r\n"
_DELETE_WS = str.maketrans("", "", _WHITESPACE)
_IUPAC_TO_N = str.maketrans(IUPAC_AMBIGUITY, "N" * len(IUPAC_AMBIGUITY))
_VALID = re.compile(r"[ACGTN]*\Z")
_LOWER_ALPHABET = "acgtn" + IUPAC_AMBIGUITY.lower()

_BATCH_HINT = 1 << 20


@dataclass(frozen=True)
class IngestPolicy:
    """Knobs for turning raw text into normalized symbols.

    strict rejects everything outside {A,C,G,T,N}; iupac_to_n instead
    maps the ten ambiguity letters to N (anything else still fails).
    The two are mutually exclusive.
    """

    fasta_mode: bool = False
    case_fold: bool = True
    iupac_to_n: bool = False
    strict: bool = True

    def __post_init__(self):
        if self.strict and self.iupac_to_n:
            raise ValueError("strict and iupac_to_n are mutually exclusive")


@dataclass
class IngestNote:
    """What ingestion changed on the way in."""

    whitespace_stripped: int = 0
    headers_dropped: int = 0
    case_folded: int = 0
    iupac_substituted: int = 0


@dataclass(frozen=True)
class NormalizedSequence:
    """A validated symbol string plus the record of how it was cleaned."""

    symbols: str
    origin_note: IngestNote = field(default_factory=IngestNote)

    def __len__(self):
        return len(self.symbols)


def _as_text_stream(text) -> io.TextIOBase:
    if isinstance(text, str):
        return io.StringIO(text)
    if isinstance(text, (bytes, bytearray)):
        # latin-1 maps every byte to one character, so stray bytes are
        # reported by the alphabet check with a real line and column.
        return io.StringIO(bytes(text).decode("latin-1"))
    if isinstance(text, io.TextIOBase):
        return text
    read = getattr(text, "read", None)
    if read is not None:
        return io.TextIOWrapper(text, encoding="latin-1")
    raise TypeError(f"cannot ingest from {type(text).__name__}")


def _normalize_piece(piece: str, policy: IngestPolicy, note: IngestNote) -> str:
    cleaned = piece.translate(_DELETE_WS)
    note.whitespace_stripped += len(piece) - len(cleaned)
    if policy.case_fold:
        note.case_folded += sum(cleaned.count(c) for c in _LOWER_ALPHABET)
        cleaned = cleaned.upper()
    if policy.iupac_to_n:
        note.iupac_substituted += sum(cleaned.count(c) for c in IUPAC_AMBIGUITY)
        cleaned = cleaned.translate(_IUPAC_TO_N)
    return cleaned


def _locate_bad_character(lines, first_line_number, policy):
    """Slow path: find the first original character a policy rejects."""
    throwaway = IngestNote()
    for line_index, line in enumerate(lines):
        if policy.fasta_mode and line.startswith(">"):
            continue
        for column, char in enumerate(line, start=1):
            if char in _WHITESPACE:
                continue
            if _VALID.match(_normalize_piece(char, policy, throwaway)):
                continue
            raise IngestError(char, line=first_line_number + line_index, column=column)
    raise AssertionError("validation failed but no offending character found")


def iter_normalized(text, policy: IngestPolicy = IngestPolicy(),
                    note: Optional[IngestNote] = None) -> Iterator[str]:
    """Stream normalized symbol chunks from raw or FASTA text.

    Processes input in line batches so files of any size pass through
    in bounded memory. Raises IngestError naming the first offending
    character with its line and column.
    """
    stream = _as_text_stream(text)
    if note is None:
        note = IngestNote()
    line_number = 1
    while True:
        lines = stream.readlines(_BATCH_HINT)
        if not lines:
            return
        if policy.fasta_mode:
            kept = [ln for ln in lines if not ln.startswith(">")]
            note.headers_dropped += len(lines) - len(kept)
        else:
            kept = lines
        chunk = _normalize_piece("".join(kept), policy, note)
        if not _VALID.match(chunk):
            _locate_bad_character(lines, line_number, policy)
        line_number += len(lines)
        if chunk:
            yield chunk


def ingest(text, policy: IngestPolicy = IngestPolicy()) -> NormalizedSequence:
    """Normalize raw or FASTA text into a symbol string over {A,C,G,T,N}."""
    note = IngestNote()
    symbols = "".join(iter_normalized(text, policy, note))
    return NormalizedSequence(symbols=symbols, origin_note=note)


class LineWriter:
    """Wraps a text sink, inserting LF every ``line_width`` symbols.

    With no width it passes symbols through untouched. finish() closes
    a partial final line; rendered output with a width always ends in a
    newline unless nothing was written at all.
    """

    def __init__(self, sink, line_width: Optional[int] = None):
        if line_width is not None and line_width < 1:
            raise ValueError(f"line_width must be >= 1, got {line_width}")
        self._sink = sink
        self._width = line_width
        self._column = 0
        self.bytes_written = 0

    def write(self, symbols: str) -> int:
        if self._width is None:
            self._sink.write(symbols)
            self.bytes_written += len(symbols)
            return len(symbols)
        written = 0
        width = self._width
        pos = 0
        while pos < len(symbols):
            room = width - self._column
            piece = symbols[pos:pos + room]
            self._sink.write(piece)
            written += len(piece)
            self._column += len(piece)
            pos += len(piece)
            if self._column == width:
                self._sink.write("\n")
                written += 1
                self._column = 0
        self.bytes_written += written
        return written

    def finish(self) -> None:
        if self._width is not None and self._column:
            self._sink.write("\n")
            self.bytes_written += 1
            self._column = 0


def render(symbols, sink, *, line_width: Optional[int] = None) -> int:
    """Write symbols as ASCII text, optionally wrapped to a fixed width.

    ``symbols`` is a string or an iterable of string chunks. Returns
    the number of bytes written including inserted newlines.
    """
    writer = LineWriter(sink, line_width)
    if isinstance(symbols, str):
        symbols = (symbols,)
    for chunk in symbols:
        writer.write(chunk)
    writer.finish()
    return writer.bytes_written
