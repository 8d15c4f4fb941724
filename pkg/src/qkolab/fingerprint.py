"""Fingerprint states over codewords: construction, overlap law, the
preparation circuit, codeword extraction, and fixed-point state descriptions.

A fingerprint for message x is the uniform superposition of |i>|E_i(x)>
over the m codeword positions, on ceil(log2 m) index qubits plus one value
qubit (the least significant).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitio import BitReader, BitWriter
from .bits import BitString
from .circuits import (
    DEFAULT_ANGLE_BITS,
    Circuit,
    Gate,
    multi_controlled_x,
)
from .codes import LinearCode, decode_message, encode
from .errors import CapError, DecodeError, InputError
from .states import STATE_QUBIT_CAP, NORM_TOL, StateVector, fidelity


@dataclass(frozen=True)
class Fingerprint:
    x: BitString
    code: LinearCode
    state: StateVector
    M: int  # qubit count = ceil(log2 m) + 1


def build_fingerprint(code: LinearCode, x: BitString) -> Fingerprint:
    """Exact statevector with amplitude 1/sqrt(m) on the m states |i>|E_i(x)>.

    For codes whose m is not a power of two the amplitudes above index m
    are zero; the overlap law is unchanged.
    """
    word = encode(code, x)
    k = max(1, math.ceil(math.log2(code.m)))
    q = k + 1
    if q > STATE_QUBIT_CAP:
        raise CapError(f"fingerprint would need {q} qubits (cap {STATE_QUBIT_CAP})")
    amps = np.zeros(2**q, dtype=np.complex128)
    bits = word.bits()
    amps[2 * np.arange(code.m) + bits] = 1.0 / math.sqrt(code.m)
    return Fingerprint(x, code, StateVector(q, amps), q)


def overlap(code: LinearCode, x: BitString, y: BitString) -> float:
    """Fraction of positions where E(x) and E(y) agree; equals <h_x|h_y>."""
    agree = int((encode(code, x).bits() == encode(code, y).bits()).sum())
    return agree / code.m


def build_hx_circuit(
    code: LinearCode, x: BitString, p: int = DEFAULT_ANGLE_BITS
) -> Circuit:
    """Preparation circuit: Hadamards on the index qubits, then one
    multi-controlled X onto the value qubit per position carrying a 1.

    Requires m to be an exact power of two. Controls matching a 0 bit of the
    position index are X-conjugated. The multi-controlled X uses the frozen
    ancilla-free decomposition (see circuits.MCX_DECOMPOSITION_ID), which
    needs the quantized-rotation basis for two or more controls.
    """
    word = encode(code, x)
    k = int(math.log2(code.m))
    if 2**k != code.m:
        raise InputError(f"m={code.m} is not a power of two; build the state directly")
    q = k + 1
    gates: list[Gate] = [Gate("H", (j,)) for j in range(k)]
    for i in range(code.m):
        if not word[i]:
            continue
        conj = [Gate("X", (j,)) for j in range(k) if not (i >> (k - 1 - j)) & 1]
        gates.extend(conj)
        gates.extend(multi_controlled_x(range(k), k, p))
        gates.extend(reversed(conj))
    return Circuit(q, tuple(gates), basis="quantized", p=p)


@dataclass(frozen=True)
class ExtractionResult:
    word: BitString
    status: str  # "exact" | "corrected" | "not_a_codeword"
    message: BitString | None = None


_TIE_REL_TOL = 1e-12


def extract_codeword(state: StateVector, code: LinearCode) -> ExtractionResult:
    """Read off the codeword bits from a (possibly perturbed) fingerprint.

    Position i's bit is 1 when more than half the squared amplitude mass at
    index i sits on value 1; an exact tie or zero mass is unrecoverable.
    The read word is then membership-tested against the code; it is never
    error-corrected toward a different codeword.
    """
    k = max(1, math.ceil(math.log2(code.m)))
    if state.q != k + 1:
        raise InputError(f"state has {state.q} qubits, fingerprints for this code need {k + 1}")
    mass = (np.abs(state.amplitudes) ** 2).reshape(-1, 2)[: code.m]
    totals = mass.sum(axis=1)
    zeros = BitString.zeros(code.m)
    if (totals <= NORM_TOL).any():
        return ExtractionResult(zeros, "not_a_codeword")
    diff = mass[:, 1] - mass[:, 0]
    if (np.abs(diff) <= _TIE_REL_TOL * totals).any():
        return ExtractionResult(zeros, "not_a_codeword")
    word = BitString((diff > 0).astype(np.uint8))
    message = decode_message(code, word)
    if message is None:
        return ExtractionResult(word, "not_a_codeword")
    exact = fidelity(state, build_fingerprint(code, message).state) >= 1.0 - 1e-10
    return ExtractionResult(word, "exact" if exact else "corrected", message)


HEADER_BITS = 64  # 16-bit q, 16-bit p, 32-bit reserved


@dataclass(frozen=True)
class QuantizedDescription:
    q: int
    p: int  # bits per real component
    payload: bytes = field(repr=False)
    length_bits: int  # 2 * 2^q * p + HEADER_BITS, excludes byte padding


def quantize_state(s: StateVector, eps_a: float) -> QuantizedDescription:
    """Fixed-point description with p = ceil(log2(1/eps_a)) bits per real.

    Layout (bit-exact, big-endian): 16-bit q, 16-bit p, 32-bit reserved,
    then the 2^q real parts followed by the 2^q imaginary parts in basis
    rank order, each a p-bit two's-complement integer at scale 2^(1-p),
    zero-padded to a byte boundary.
    """
    if not 0 < eps_a < 1:
        raise InputError(f"need 0 < eps_a < 1, got {eps_a}")
    p = math.ceil(math.log2(1.0 / eps_a))
    if p < 2:
        p = 2
    if p > 62:
        raise InputError(f"p={p} exceeds 62 bits per component")
    scale = 2.0 ** (p - 1)
    lo, hi = -(2 ** (p - 1)), 2 ** (p - 1) - 1
    reals = np.concatenate([s.amplitudes.real, s.amplitudes.imag])
    ints = np.clip(np.round(reals * scale), lo, hi).astype(np.int64)
    unsigned = (ints & ((1 << p) - 1)).astype(np.uint64)
    header = BitWriter()
    header.write_uint(s.q, 16)
    header.write_uint(p, 16)
    header.write_uint(0, 32)
    header_bits = np.unpackbits(np.frombuffer(header.to_bytes(), dtype=np.uint8))
    body_bits = (
        (unsigned[:, None] >> np.arange(p - 1, -1, -1, dtype=np.uint64)) & 1
    ).astype(np.uint8)
    bits = np.concatenate([header_bits, body_bits.reshape(-1)])
    return QuantizedDescription(
        s.q, p, np.packbits(bits).tobytes(), 2 ** (s.q + 1) * p + HEADER_BITS
    )


def decode_state(d: QuantizedDescription | bytes) -> StateVector:
    """Inverse of quantize_state followed by renormalization."""
    data = d.payload if isinstance(d, QuantizedDescription) else bytes(d)
    reader = BitReader(data)
    q = reader.read_uint(16)
    p = reader.read_uint(16)
    if reader.read_uint(32):
        raise DecodeError("reserved field is nonzero", offset=32)
    if not 1 <= q <= STATE_QUBIT_CAP or not 2 <= p <= 62:
        raise DecodeError(f"implausible header q={q}, p={p}", offset=0)
    dim = 2**q
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    if bits.size < HEADER_BITS + 2 * dim * p:
        raise DecodeError("payload truncated", offset=bits.size)
    body = bits[HEADER_BITS : HEADER_BITS + 2 * dim * p].reshape(2 * dim, p)
    unsigned = (body.astype(np.int64) << np.arange(p - 1, -1, -1)).sum(axis=1)
    vals = np.where(unsigned >= 1 << (p - 1), unsigned - (1 << p), unsigned).astype(
        np.float64
    )
    vals *= 2.0 ** (1 - p)
    amps = vals[:dim] + 1j * vals[dim:]
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise DecodeError("decoded amplitudes are all zero")
    return StateVector(q, amps / norm)
