"""Measurement demon on maximally mixed photons with total-entropy
bookkeeping: statistical entropy plus the algorithmic information of the
demon's records, and the Landauer work value of the ledger balance.

The measurement basis angle is encoded by the demon's random m-bit register
r as theta = k * pi / 2^m with k the integer value of r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitio import BitWriter
from .bits import BitString
from .compressor import METHOD_ID
from .complexity import cbe_upper
from .errors import CapError, InputError
from .states import StateVector

KB_JOULE_PER_KELVIN = 1.380649e-23

DEMON_M_CAP = 64
FORMULA_N_CAP = 16
SIMULATED_N_CAP = 8


@dataclass(frozen=True)
class DemonRecord:
    r: BitString
    outcome_bit: int
    full_record: BitString  # outcome bit then r; the binary fraction 0.br

    def __post_init__(self):
        if len(self.full_record) != len(self.r) + 1:
            raise InputError("full record must be the outcome bit plus r")


@dataclass(frozen=True)
class EntropyLedger:
    S_in: float
    I_in: float
    S_fin: float
    I_fin: float
    kB: float
    T: float
    strategy: str = "single"
    surrogate_method: str | None = None

    @property
    def delta_total(self) -> float:
        return (self.S_fin + self.I_fin) - (self.S_in + self.I_in)

    @property
    def work_joules(self) -> float:
        return self.delta_total * self.kB * self.T * math.log(2.0)


def angle_from_record(r: BitString) -> float:
    """theta_k = k * pi / 2^m, k read from r most significant bit first."""
    m = len(r)
    if m < 1:
        raise InputError("record is empty")
    return r.to_int() * math.pi / 2**m


def demon_step(
    m: int, seed: int, kB: float = KB_JOULE_PER_KELVIN, T: float = 300.0
) -> tuple[DemonRecord, StateVector, EntropyLedger]:
    """One randomize-then-measure cycle on a maximally mixed photon.

    The demon draws r, measures in the basis {Psi_theta, orthogonal}; both
    outcomes have probability 1/2 for rho = I/2. The photon's entropy (1 bit)
    is converted into an (m+1)-bit record, so the ledger balance is m bits
    and the associated work is m*kB*T*ln2.
    """
    if not 1 <= m <= DEMON_M_CAP:
        raise CapError(f"m must be in [1, {DEMON_M_CAP}]")
    rng = np.random.default_rng(seed)
    r = BitString.random(m, rng)
    theta = angle_from_record(r)
    outcome = int(rng.random() < 0.5)
    c, s = math.cos(theta), math.sin(theta)
    amps = np.array([c, s] if outcome == 0 else [-s, c], dtype=np.complex128)
    record = DemonRecord(r, outcome, BitString([outcome]) + r)
    ledger = EntropyLedger(
        S_in=1.0, I_in=0.0, S_fin=0.0, I_fin=float(m + 1), kB=kB, T=T
    )
    return record, StateVector(1, amps), ledger


@dataclass(frozen=True)
class MultiphotonComparison:
    product: EntropyLedger
    entangled: EntropyLedger
    entangled_exceeds_product: bool


def multiphoton_ledger(
    n: int,
    m: int,
    eps: float,
    mode: str = "formula",
    kB: float = KB_JOULE_PER_KELVIN,
    T: float = 300.0,
    seed: int = 0,
) -> MultiphotonComparison:
    """n-photon measurement strategies compared on the same ledger.

    Product strategy repeats the single-photon cycle, balance n*m. The
    entangled strategy projects onto a joint n-qubit state whose record is
    an amplitude list: formula mode books 2^n*log2(1/eps) bits of record,
    simulated mode books the compressed length of an actual amplitude-list
    description of a seeded random projection target.
    """
    if not 1 <= m <= DEMON_M_CAP:
        raise CapError(f"m must be in [1, {DEMON_M_CAP}]")
    if not 0 < eps < 1:
        raise InputError("need 0 < eps < 1")
    product = EntropyLedger(
        S_in=float(n), I_in=0.0, S_fin=0.0, I_fin=float(n * (m + 1)),
        kB=kB, T=T, strategy="product",
    )
    if mode == "formula":
        if not 1 <= n <= FORMULA_N_CAP:
            raise CapError(f"formula mode caps n at {FORMULA_N_CAP}")
        i_fin = 2**n * math.log2(1.0 / eps)
        method = None
    elif mode == "simulated":
        if not 1 <= n <= SIMULATED_N_CAP:
            raise CapError(f"simulated mode caps n at {SIMULATED_N_CAP}")
        target = StateVector.random(n, np.random.default_rng(seed))
        i_fin = float(cbe_upper(target, eps).compressed_length_bits)
        method = METHOD_ID
    else:
        raise InputError(f"unknown mode {mode!r}")
    entangled = EntropyLedger(
        S_in=float(n), I_in=0.0, S_fin=0.0, I_fin=i_fin,
        kB=kB, T=T, strategy="entangled", surrogate_method=method,
    )
    return MultiphotonComparison(
        product, entangled, entangled.delta_total > product.delta_total
    )


_FORMAT_TAG = 0x5142  # 16-bit descriptor tag
_SETTINGS = {"single": 0, "multi-product": 1, "multi-projection": 2}


@dataclass(frozen=True)
class BackgroundReport:
    setting: str
    descriptor_bits: int
    cbe_bits: int | None = None
    raw_cbe_bits: int | None = None
    surrogate_method: str | None = None


def background_information_report(
    setting: str,
    m: int,
    n: int | None = None,
    target: StateVector | None = None,
    eps_a: float = 2.0**-16,
) -> BackgroundReport:
    """Length of the shared description of the candidate-state list.

    The single-photon basis family is a fixed template plus the integer m;
    the product multi-photon family adds the integer n; an arbitrary
    projection target cannot be named by a template and its amplitude-list
    description dominates the report.
    """
    if setting not in _SETTINGS:
        raise InputError(f"unknown setting {setting!r}")
    w = BitWriter()
    w.write_uint(_FORMAT_TAG, 16)
    w.write_uint(_SETTINGS[setting], 8)
    w.write_uint(m, 64)
    if setting == "single":
        return BackgroundReport(setting, w.bit_length)
    if n is None or n < 1:
        raise InputError("multi-photon settings need n >= 1")
    w.write_uint(n, 64)
    if setting == "multi-product":
        return BackgroundReport(setting, w.bit_length)
    if target is None:
        raise InputError("multi-projection needs the projection target state")
    surrogate = cbe_upper(target, eps_a)
    return BackgroundReport(
        setting,
        w.bit_length + surrogate.compressed_length_bits,
        surrogate.compressed_length_bits,
        surrogate.raw_length_bits,
        surrogate.method_id,
    )
