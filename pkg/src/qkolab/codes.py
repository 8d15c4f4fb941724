"""Linear error-correcting codes over GF(2) with verified distance.

A code is an n x m generator matrix; codeword positions are indexed 0..m-1.
``delta_verified`` is the agreement bound: distinct codewords agree in at
most delta*m positions, i.e. the minimum distance is at least (1-delta)*m.
Verification is exhaustive up to 2^n <= 4096 and sampled (with the sample
count recorded) beyond that.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bits import BitString
from .errors import CapError, InputError

EXHAUSTIVE_CAP = 4096  # max 2^n for exhaustive distance verification


@dataclass(frozen=True)
class LinearCode:
    name: str
    n: int
    m: int
    generator: np.ndarray = field(repr=False)  # n x m uint8, read-only
    delta_verified: float | None
    verification_mode: str  # "exhaustive" | "sampled(k)" | "unverified"

    def __post_init__(self):
        if not (self.m >= self.n >= 1):
            raise InputError(f"need m >= n >= 1, got n={self.n}, m={self.m}")
        gen = np.ascontiguousarray(self.generator, dtype=np.uint8)
        if gen.shape != (self.n, self.m):
            raise InputError(f"generator must be {self.n}x{self.m}")
        gen.setflags(write=False)
        object.__setattr__(self, "generator", gen)

    @property
    def rate_c(self) -> float:
        return self.m / self.n


def encode(code: LinearCode, x: BitString) -> BitString:
    """x * G over GF(2)."""
    if x.length != code.n:
        raise InputError(f"message length {x.length} != code.n {code.n}")
    return BitString((x.bits() @ code.generator) % 2)


def encode_blocks(code: LinearCode, x: BitString) -> BitString:
    """Encode a message whose length is a multiple of n, block by block."""
    if x.length == 0 or x.length % code.n:
        raise InputError(f"length {x.length} is not a positive multiple of n={code.n}")
    blocks = x.bits().reshape(-1, code.n)
    return BitString(((blocks @ code.generator) % 2).reshape(-1))


def _min_nonzero_weight(code: LinearCode, messages: np.ndarray) -> int:
    words = (messages @ code.generator) % 2
    return int(words.sum(axis=1).min())


def verify_distance(code: LinearCode, mode: str = "exhaustive") -> tuple[float, str]:
    """Measured agreement bound delta = 1 - (min distance)/m.

    For a linear code the minimum pairwise distance equals the minimum
    nonzero codeword weight, so the zero pair is excluded by construction.
    ``mode`` is "exhaustive" or "sampled(k)".
    """
    if mode == "exhaustive":
        if 2**code.n > EXHAUSTIVE_CAP:
            raise CapError(
                f"exhaustive verification needs 2^n <= {EXHAUSTIVE_CAP}; "
                f"use mode='sampled(k)' for n={code.n}"
            )
        count = 2**code.n - 1
        msgs = np.zeros((count, code.n), dtype=np.uint8)
        for v in range(1, 2**code.n):
            msgs[v - 1] = [(v >> (code.n - 1 - j)) & 1 for j in range(code.n)]
        return 1.0 - _min_nonzero_weight(code, msgs) / code.m, "exhaustive"
    if mode.startswith("sampled(") and mode.endswith(")"):
        k = int(mode[len("sampled(") : -1])
        if k < 1:
            raise InputError("sample count must be >= 1")
        rng = np.random.default_rng(0xC0DE)
        msgs = rng.integers(0, 2, (k, code.n), dtype=np.uint8)
        msgs = msgs[msgs.any(axis=1)]
        if not len(msgs):
            raise InputError("all sampled messages were zero; increase k")
        return 1.0 - _min_nonzero_weight(code, msgs) / code.m, f"sampled({k})"
    raise InputError(f"unknown verification mode {mode!r}")


def _verified(name: str, n: int, m: int, gen: np.ndarray, sample_k: int = 20000) -> LinearCode:
    code = LinearCode(name, n, m, gen, None, "unverified")
    mode = "exhaustive" if 2**n <= EXHAUSTIVE_CAP else f"sampled({sample_k})"
    delta, mode_used = verify_distance(code, mode)
    return LinearCode(name, n, m, gen, delta, mode_used)


def hadamard_code(n: int) -> LinearCode:
    """Code with m = 2^n positions z and bit values <x, z> mod 2.

    Positions run over all n-bit vectors in integer order; every nonzero
    codeword has weight 2^(n-1), so delta = 1/2 exactly.
    """
    if not 1 <= n <= 16:
        raise InputError(f"hadamard_code needs 1 <= n <= 16, got {n}")
    m = 2**n
    gen = np.zeros((n, m), dtype=np.uint8)
    for j in range(n):
        for z in range(m):
            gen[j, z] = (z >> (n - 1 - j)) & 1
    return _verified(f"hadamard-{n}", n, m, gen)


def simplex_code(n: int) -> LinearCode:
    """[2^n - 1, n] simplex code: columns are the nonzero n-bit vectors in
    integer order 1..2^n-1."""
    if not 1 <= n <= 16:
        raise InputError(f"simplex_code needs 1 <= n <= 16, got {n}")
    m = 2**n - 1
    gen = np.zeros((n, m), dtype=np.uint8)
    for j in range(n):
        for z in range(1, 2**n):
            gen[j, z - 1] = (z >> (n - 1 - j)) & 1
    return _verified(f"simplex-{n}", n, m, gen)


def _gf2_rank(mat: np.ndarray) -> int:
    a = mat.copy().astype(np.uint8)
    rank = 0
    rows, cols = a.shape
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, col]), None)
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        mask = a[:, col].copy()
        mask[rank] = 0
        a[mask == 1] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def concatenated_code(n: int, target_rate_c: int) -> LinearCode:
    """Deterministic rate-c code with m = c*n and measured distance.

    A full-rank seeded random generator stands in for an explicit
    concatenated construction; the distance is measured, never assumed.
    n = 1 degenerates to the repetition code (delta = 0).
    """
    if n < 1 or target_rate_c < 2:
        raise InputError("need n >= 1 and target_rate_c >= 2")
    m = target_rate_c * n
    if n == 1:
        return _verified(f"concat-1x{target_rate_c}", 1, m, np.ones((1, m), dtype=np.uint8))
    rng = np.random.default_rng(0x51ED_0000 + 65536 * n + target_rate_c)
    for _ in range(1000):
        gen = rng.integers(0, 2, (n, m), dtype=np.uint8)
        if _gf2_rank(gen) == n:
            return _verified(f"concat-{n}x{target_rate_c}", n, m, gen)
    raise InputError(f"could not build a full-rank generator for n={n}, c={target_rate_c}")


def decode_message(code: LinearCode, word: BitString) -> BitString | None:
    """Recover x with x*G = word, or None if word is not in the code.

    Membership testing only; this performs no error correction.
    """
    if word.length != code.m:
        raise InputError(f"word length {word.length} != code.m {code.m}")
    # Solve G^T x = w by elimination on the augmented (m x n+1) system.
    aug = np.concatenate(
        [code.generator.T.astype(np.uint8), word.bits().reshape(-1, 1)], axis=1
    )
    rank = 0
    pivot_cols = []
    for col in range(code.n):
        pivot = next((r for r in range(rank, aug.shape[0]) if aug[r, col]), None)
        if pivot is None:
            continue
        aug[[rank, pivot]] = aug[[pivot, rank]]
        mask = aug[:, col].copy()
        mask[rank] = 0
        aug[mask == 1] ^= aug[rank]
        pivot_cols.append(col)
        rank += 1
    if aug[rank:, code.n].any():
        return None  # inconsistent: not a codeword
    x = np.zeros(code.n, dtype=np.uint8)
    for r, col in enumerate(pivot_cols):
        x[col] = aug[r, code.n]
    return BitString(x)


def contains(code: LinearCode, word: BitString) -> bool:
    return decode_message(code, word) is not None


def to_descriptor(code: LinearCode) -> str:
    """JSON descriptor with generator rows as hex (MSB-first, zero-padded)."""
    rows = [BitString(row).packed.hex() for row in code.generator]
    return json.dumps(
        {
            "name": code.name,
            "n": code.n,
            "m": code.m,
            "generator": rows,
            "delta_verified": code.delta_verified,
            "verification_mode": code.verification_mode,
        },
        sort_keys=True,
    )


def from_descriptor(text: str) -> LinearCode:
    doc = json.loads(text)
    try:
        n, m = int(doc["n"]), int(doc["m"])
        rows = [
            BitString.from_packed(bytes.fromhex(h), m).bits() for h in doc["generator"]
        ]
        if len(rows) != n:
            raise InputError(f"descriptor has {len(rows)} rows, expected {n}")
        return LinearCode(
            str(doc["name"]),
            n,
            m,
            np.array(rows, dtype=np.uint8),
            doc["delta_verified"],
            str(doc["verification_mode"]),
        )
    except KeyError as exc:
        raise InputError(f"descriptor missing field {exc}") from exc
