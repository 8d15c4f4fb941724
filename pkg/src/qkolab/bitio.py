"""Big-endian bit-level writer/reader used by the frozen binary formats."""
from __future__ import annotations

from .errors import DecodeError


class BitWriter:
    __slots__ = ("_bits",)

    def __init__(self):
        self._bits: list[int] = []

    def write_uint(self, value: int, width: int) -> None:
        if value < 0 or (width < 64 and value >> width):
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._bits.extend((value >> (width - 1 - i)) & 1 for i in range(width))

    def write_int(self, value: int, width: int) -> None:
        """Two's-complement signed write."""
        lo, hi = -(1 << (width - 1)), (1 << (width - 1)) - 1
        if not lo <= value <= hi:
            raise ValueError(f"value {value} does not fit in signed {width} bits")
        self.write_uint(value & ((1 << width) - 1), width)

    def align_to_byte(self) -> None:
        self._bits.extend([0] * (-len(self._bits) % 8))

    @property
    def bit_length(self) -> int:
        return len(self._bits)

    def to_bytes(self) -> bytes:
        """Zero-pad to a byte boundary and return the buffer."""
        bits = self._bits + [0] * (-len(self._bits) % 8)
        out = bytearray(len(bits) // 8)
        for i, b in enumerate(bits):
            out[i >> 3] |= b << (7 - (i & 7))
        return bytes(out)


class BitReader:
    __slots__ = ("_data", "_pos")

    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    @property
    def position(self) -> int:
        return self._pos

    def read_uint(self, width: int) -> int:
        end = self._pos + width
        if end > 8 * len(self._data):
            raise DecodeError("payload truncated", offset=self._pos)
        value = 0
        for i in range(self._pos, end):
            value = (value << 1) | ((self._data[i >> 3] >> (7 - (i & 7))) & 1)
        self._pos = end
        return value

    def align_to_byte(self) -> None:
        pad = -self._pos % 8
        if pad and self.read_uint(pad):
            raise DecodeError("nonzero padding bits", offset=self._pos - pad)

    def read_int(self, width: int) -> int:
        raw = self.read_uint(width)
        if raw >= 1 << (width - 1):
            raw -= 1 << width
        return raw
