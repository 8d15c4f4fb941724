"""Compression-based upper-bound surrogate for description length.

A single frozen compressor configuration (raw DEFLATE, level 9, no container
headers) stands in for the uncomputable shortest-program length. Values are
only ever compared against other values produced with the same method id.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass

from .bits import BitString

METHOD_ID = "deflate9-raw+16"
HEADER_BITS = 16  # fixed per-description header charge, recorded in METHOD_ID


@dataclass(frozen=True)
class ComplexitySurrogate:
    raw_length_bits: int
    compressed_length_bits: int
    method_id: str


def _deflate(data: bytes) -> bytes:
    co = zlib.compressobj(9, zlib.DEFLATED, -15)
    return co.compress(data) + co.flush()


def kcl_upper(w: BitString | bytes) -> ComplexitySurrogate:
    """Upper bound on the description length of ``w``, in bits.

    Deterministic for a fixed METHOD_ID. The empty input costs the header
    charge alone.
    """
    if isinstance(w, BitString):
        raw_bits, data = w.length, w.packed
    else:
        raw_bits, data = 8 * len(w), bytes(w)
    if raw_bits == 0:
        return ComplexitySurrogate(0, HEADER_BITS, METHOD_ID)
    compressed = 8 * len(_deflate(data)) + HEADER_BITS
    return ComplexitySurrogate(raw_bits, compressed, METHOD_ID)
