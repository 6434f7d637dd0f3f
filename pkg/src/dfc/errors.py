"""Exception types raised by the dfc codec and its front ends."""


class CodecError(Exception):
    """Base class for all dfc errors."""


class InvalidSymbolError(CodecError, ValueError):
    """A symbol outside the coding alphabet was handed to the codec.

    ``offset`` is the zero-based position of the symbol in the input
    stream when known, else None.
    """

    def __init__(self, symbol, offset=None):
        self.symbol = symbol
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"invalid symbol {symbol!r}{where}")


class IngestError(CodecError, ValueError):
    """Raw input text contains a character the ingest policy rejects."""

    def __init__(self, character, line, column):
        self.character = character
        self.line = line
        self.column = column
        super().__init__(
            f"invalid character {character!r} at line {line}, column {column}"
        )


class StreamFormatError(CodecError, ValueError):
    """A compressed stream violates the section format."""


class TruncatedHeaderError(StreamFormatError):
    """The stream ended inside an 8-byte section head."""

    def __init__(self, offset, available):
        self.offset = offset
        self.available = available
        super().__init__(
            f"truncated section head at byte {offset}: "
            f"need 8 bytes, found {available}"
        )


class TruncatedPayloadError(StreamFormatError):
    """The stream ended inside a section payload."""

    def __init__(self, offset, expected, available):
        self.offset = offset
        self.expected = expected
        self.available = available
        super().__init__(
            f"truncated section payload at byte {offset}: "
            f"expected {expected} bytes, found {available}"
        )
