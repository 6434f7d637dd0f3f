"""Deliberately naive reference implementations used as test oracles.

Everything here works on bit strings and hand-rolled little-endian byte
lists, with no streaming, no struct, and no numpy, so it shares nothing
with the production code paths it checks.
"""

BIT_STRINGS = {"A": "00", "T": "01", "G": "10", "C": "11"}


def le32(value):
    return [value & 255, (value >> 8) & 255, (value >> 16) & 255, (value >> 24) & 255]


def naive_sectionize(seq):
    """Char-by-char partition into (n_count, bases) pairs."""
    out = []
    i = 0
    while i < len(seq):
        n = 0
        while i < len(seq) and seq[i] == "N":
            n += 1
            i += 1
        start = i
        while i < len(seq) and seq[i] != "N":
            i += 1
        out.append((n, seq[start:i]))
    return out


def naive_compress(seq):
    """Whole-stream compression via an in-memory bit list."""
    out = []
    for n_count, bases in naive_sectionize(seq):
        out += le32(n_count) + le32(len(bases))
        bits = "".join(BIT_STRINGS[c] for c in bases)
        while len(bits) % 8:
            bits += "0"
        out += [int(bits[i:i + 8], 2) for i in range(0, len(bits), 8)]
    return bytes(out)


def naive_pack(symbols):
    """MSB-first packing of 1..4 bases via a bit string."""
    bits = "".join(BIT_STRINGS[c] for c in symbols).ljust(8, "0")
    return int(bits, 2)


def naive_unpack(byte, count):
    bits = format(byte, "08b")[: 2 * count]
    inverse = {v: k for k, v in BIT_STRINGS.items()}
    return "".join(inverse[bits[i:i + 2]] for i in range(0, len(bits), 2))
