"""dfc: a fixed-width lossless codec for DNA sequences.

Determined bases (A, C, G, T) are stored at two bits each, four to a
byte; runs of the unknown base N are stored by count. A compressed
stream is a sequence of sections, each an 8-byte head (N count and
base count, 32-bit little-endian) followed by the packed bases.
"""

from .bases import (
    Base,
    PackedQuad,
    decode_base,
    encode_base,
    pack_quad,
    unpack_quad,
)
from .codec import (
    CodecStats,
    SectionCompressor,
    VerifyReport,
    compress,
    decompress,
    verify,
)
from .errors import (
    CodecError,
    IngestError,
    InvalidSymbolError,
    StreamFormatError,
    TruncatedHeaderError,
    TruncatedPayloadError,
)
from .sections import (
    MAX_SECTION_BASES,
    MAX_SECTION_N,
    Section,
    SectionHeader,
    compressed_size_bytes,
    compression_ratio,
    read_header,
    sectionize,
    write_header,
)
from .seqio import (
    IngestNote,
    IngestPolicy,
    LineWriter,
    NormalizedSequence,
    ingest,
    iter_normalized,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "Base",
    "CodecError",
    "CodecStats",
    "IngestError",
    "IngestNote",
    "IngestPolicy",
    "InvalidSymbolError",
    "LineWriter",
    "MAX_SECTION_BASES",
    "MAX_SECTION_N",
    "NormalizedSequence",
    "PackedQuad",
    "Section",
    "SectionCompressor",
    "SectionHeader",
    "StreamFormatError",
    "TruncatedHeaderError",
    "TruncatedPayloadError",
    "VerifyReport",
    "compress",
    "compressed_size_bytes",
    "compression_ratio",
    "decode_base",
    "decompress",
    "encode_base",
    "ingest",
    "iter_normalized",
    "pack_quad",
    "read_header",
    "render",
    "sectionize",
    "unpack_quad",
    "verify",
    "write_header",
]
