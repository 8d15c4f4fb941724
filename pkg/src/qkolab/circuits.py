"""Gates, circuits, exact unitary application, and the multi-controlled-X
decomposition used by the fingerprint preparation circuits.

Two bases are declared. The exact-finite basis is {H, X, Z, S, T, CNOT}.
The quantized-rotation extension adds RY/RZ whose angles live on a 2^p-point
grid over [0, 2*pi); p is recorded on the circuit so encodings are bit-exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .states import StateVector

EXACT_BASIS = ("H", "X", "Z", "S", "T", "CNOT")
QUANTIZED_BASIS = EXACT_BASIS + ("RY", "RZ")

OPCODES = {name: i + 1 for i, name in enumerate(QUANTIZED_BASIS)}
OPNAMES = {v: k for k, v in OPCODES.items()}
PARAMETRIZED = frozenset({"RY", "RZ"})
TWO_QUBIT = frozenset({"CNOT"})

DEFAULT_ANGLE_BITS = 16

MCX_DECOMPOSITION_ID = "mcx-rootrec-v1"


@dataclass(frozen=True)
class Gate:
    name: str
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.name not in OPCODES:
            raise InputError(f"unknown gate {self.name!r}")
        arity = 2 if self.name in TWO_QUBIT else 1
        if len(self.targets) != arity or len(set(self.targets)) != arity:
            raise InputError(f"{self.name} needs {arity} distinct target(s)")
        if (self.angle is not None) != (self.name in PARAMETRIZED):
            raise InputError(f"angle must be present iff the gate is parametrized")


@dataclass(frozen=True)
class Circuit:
    q: int
    gates: tuple[Gate, ...]
    basis: str = "exact"  # "exact" | "quantized"
    p: int = 0  # angle bits; 0 for the exact basis

    def __post_init__(self):
        if self.basis not in ("exact", "quantized"):
            raise InputError(f"unknown basis {self.basis!r}")
        if (self.basis == "quantized") != (self.p > 0):
            raise InputError("quantized basis requires p > 0, exact requires p == 0")
        allowed = QUANTIZED_BASIS if self.basis == "quantized" else EXACT_BASIS
        for g in self.gates:
            if g.name not in allowed:
                raise InputError(f"gate {g.name} not in the {self.basis} basis")
            if any(t < 0 or t >= self.q for t in g.targets):
                raise InputError(f"gate target out of range for q={self.q}")

    def prefix(self, t: int) -> "Circuit":
        return Circuit(self.q, self.gates[:t], self.basis, self.p)


def quantize_angle(theta: float, p: int) -> float:
    """Snap an angle to the 2^p-point grid over [0, 2*pi)."""
    step = 2.0 * math.pi / 2**p
    return (round((theta % (2.0 * math.pi)) / step) % 2**p) * step


_SQ2 = 1.0 / math.sqrt(2.0)
_FIXED_1Q = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "S": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=np.complex128),
}


def gate_matrix(g: Gate) -> np.ndarray:
    if g.name in _FIXED_1Q:
        return _FIXED_1Q[g.name]
    half = (g.angle or 0.0) / 2.0
    if g.name == "RY":
        c, s = math.cos(half), math.sin(half)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if g.name == "RZ":
        return np.array(
            [[np.exp(-1j * half), 0], [0, np.exp(1j * half)]], dtype=np.complex128
        )
    raise InputError(f"no matrix for gate {g.name}")


def apply_circuit(c: Circuit, s0: StateVector) -> StateVector:
    """Exact gate-by-gate unitary action; norm is preserved."""
    if c.q != s0.q:
        raise InputError(f"circuit has {c.q} qubits, state has {s0.q}")
    state = s0.amplitudes.copy()
    for g in c.gates:
        if g.name == "CNOT":
            state = _apply_cnot(state, g.targets[0], g.targets[1], c.q)
        else:
            state = _apply_1q(state, gate_matrix(g), g.targets[0], c.q)
    return StateVector(c.q, state / np.linalg.norm(state))


def _apply_1q(state: np.ndarray, matrix: np.ndarray, qubit: int, q: int) -> np.ndarray:
    t = state.reshape([2] * q)
    t = np.moveaxis(t, qubit, -1)
    t = t @ matrix.T
    return np.moveaxis(t, -1, qubit).reshape(-1)


def _apply_cnot(state: np.ndarray, control: int, target: int, q: int) -> np.ndarray:
    t = state.reshape([2] * q).copy()
    idx = [slice(None)] * q
    idx[control] = 1
    axis = target - (target > control)
    t[tuple(idx)] = np.flip(t[tuple(idx)], axis=axis)
    return t.reshape(-1)


def _cphase(control: int, target: int, theta: float, p: int) -> list[Gate]:
    # controlled phase diag(1,1,1,e^{i theta}) up to a global phase
    return [
        Gate("RZ", (control,), quantize_angle(theta / 2, p)),
        Gate("RZ", (target,), quantize_angle(theta / 2, p)),
        Gate("CNOT", (control, target)),
        Gate("RZ", (target,), quantize_angle(-theta / 2, p)),
        Gate("CNOT", (control, target)),
    ]


def _emit_mcxroot(
    controls: Sequence[int], target: int, s: int, sign: int, p: int, out: list[Gate]
) -> None:
    """Controlled X^(sign / 2^s) with the given controls, ancilla-free.

    Standard root recursion: C-V, C^{k-1}X, C-V^dag, C^{k-1}X, C^{k-1}V with
    V the square root of the current gate.
    """
    theta = sign * math.pi / 2**s
    if not controls:
        if s == 0:
            out.append(Gate("X", (target,)))
        else:
            out.append(Gate("H", (target,)))
            out.append(Gate("RZ", (target,), quantize_angle(theta, p)))
            out.append(Gate("H", (target,)))
        return
    if len(controls) == 1:
        if s == 0:
            out.append(Gate("CNOT", (controls[0], target)))
        else:
            out.append(Gate("H", (target,)))
            out.extend(_cphase(controls[0], target, theta, p))
            out.append(Gate("H", (target,)))
        return
    last, rest = controls[-1], controls[:-1]
    _emit_mcxroot([last], target, s + 1, sign, p, out)
    _emit_mcxroot(rest, last, 0, 1, p, out)
    _emit_mcxroot([last], target, s + 1, -sign, p, out)
    _emit_mcxroot(rest, last, 0, 1, p, out)
    _emit_mcxroot(rest, target, s + 1, sign, p, out)


def multi_controlled_x(
    controls: Iterable[int], target: int, p: int = DEFAULT_ANGLE_BITS
) -> list[Gate]:
    """Ancilla-free multi-controlled X over the quantized-rotation basis.

    Decomposition id: MCX_DECOMPOSITION_ID (frozen so encoded circuit
    lengths are reproducible byte for byte). The rotation angles are exact
    grid points for p >= len(controls) + 2.
    """
    controls = list(controls)
    if target in controls:
        raise InputError("target cannot also be a control")
    if len(controls) + 2 > p:
        raise InputError(f"p={p} too small for {len(controls)} controls")
    out: list[Gate] = []
    _emit_mcxroot(controls, target, 0, 1, p, out)
    return out
