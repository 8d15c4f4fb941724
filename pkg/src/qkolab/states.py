"""Exact statevector and density-matrix simulation primitives.

Conventions: qubit 0 is the most significant bit of the computational basis
rank; a q-qubit statevector has 2^q complex amplitudes. Global tolerances:
1e-10 for normalization, 1e-9 eigenvalue floor, 1e-12 for analytic
identities.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CapError, InputError

NORM_TOL = 1e-10
EIG_FLOOR = 1e-9
STATE_QUBIT_CAP = 20
DENSITY_QUBIT_CAP = 10
POVM_QUBIT_CAP = 8


@dataclass(frozen=True)
class StateVector:
    q: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.q <= STATE_QUBIT_CAP:
            raise CapError(f"qubit count {self.q} outside [1, {STATE_QUBIT_CAP}]")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.q,):
            raise InputError(f"expected {2**self.q} amplitudes, got {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InputError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def computational(cls, q: int, rank: int = 0) -> "StateVector":
        amps = np.zeros(2**q, dtype=np.complex128)
        amps[rank] = 1.0
        return cls(q, amps)

    @classmethod
    def random(cls, q: int, rng: np.random.Generator) -> "StateVector":
        """Haar-random pure state."""
        v = rng.standard_normal(2**q) + 1j * rng.standard_normal(2**q)
        return cls(q, v / np.linalg.norm(v))

    def to_json(self) -> str:
        """JSON array of [re, im] pairs indexed by basis rank."""
        return json.dumps([[a.real, a.imag] for a in self.amplitudes])

    @classmethod
    def from_json(cls, text: str) -> "StateVector":
        pairs = json.loads(text)
        dim = len(pairs)
        q = dim.bit_length() - 1
        if 2**q != dim:
            raise InputError(f"amplitude count {dim} is not a power of two")
        return cls(q, np.array([complex(re, im) for re, im in pairs]))


@dataclass(frozen=True)
class DensityMatrix:
    q: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.q <= DENSITY_QUBIT_CAP:
            raise CapError(f"qubit count {self.q} outside [1, {DENSITY_QUBIT_CAP}]")
        mat = np.ascontiguousarray(self.entries, dtype=np.complex128)
        dim = 2**self.q
        if mat.shape != (dim, dim):
            raise InputError(f"expected {dim}x{dim} matrix")
        if np.abs(mat - mat.conj().T).max() > NORM_TOL:
            raise InputError("matrix is not Hermitian within tolerance")
        if abs(np.trace(mat).real - 1.0) > NORM_TOL:
            raise InputError("trace deviates from 1 beyond tolerance")
        if np.linalg.eigvalsh(mat).min() < -EIG_FLOOR:
            raise InputError("matrix has an eigenvalue below the PSD floor")
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    @classmethod
    def from_pure(cls, s: StateVector) -> "DensityMatrix":
        return cls(s.q, np.outer(s.amplitudes, s.amplitudes.conj()))

    @classmethod
    def maximally_mixed(cls, q: int) -> "DensityMatrix":
        return cls(q, np.eye(2**q) / 2**q)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    if a.q != b.q:
        raise InputError(f"dimension mismatch: {a.q} vs {b.q} qubits")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def swap_test(a: StateVector, b: StateVector) -> tuple[float, float]:
    """Closed-form ancilla outcome distribution (P(0), P(1))."""
    p0 = (1.0 + fidelity(a, b)) / 2.0
    return p0, 1.0 - p0


def swap_test_sample(
    a: StateVector, b: StateVector, k: int, rng: np.random.Generator
) -> np.ndarray:
    """k independent ancilla outcomes drawn from the closed form."""
    _, p1 = swap_test(a, b)
    return sample_swap_outcomes(p1, k, rng)


def sample_swap_outcomes(p1: float, k: int, rng: np.random.Generator) -> np.ndarray:
    """Shared sampling path so simulations with equal p1 and seed agree."""
    return (rng.random(k) < p1).astype(np.uint8)


def swap_test_circuit(a: StateVector, b: StateVector) -> tuple[float, float]:
    """Outcome distribution of the literal (2q+1)-qubit test circuit.

    Ancilla (qubit 0) Hadamard, one controlled-SWAP per qubit pair, ancilla
    Hadamard, then the ancilla marginal. Serves as the internal oracle for
    the closed form.
    """
    if a.q != b.q:
        raise InputError(f"dimension mismatch: {a.q} vs {b.q} qubits")
    q = a.q
    total = 2 * q + 1
    state = np.kron([1.0 + 0j, 0.0], np.kron(a.amplitudes, b.amplitudes))
    state = _apply_1q(state, _HADAMARD, 0, total)
    for i in range(q):
        state = _controlled_swap(state, 0, 1 + i, 1 + q + i, total)
    state = _apply_1q(state, _HADAMARD, 0, total)
    probs = np.abs(state.reshape(2, -1)) ** 2
    p0 = float(probs[0].sum())
    return p0, 1.0 - p0


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def _apply_1q(state: np.ndarray, matrix: np.ndarray, qubit: int, q: int) -> np.ndarray:
    t = state.reshape([2] * q)
    t = np.moveaxis(t, qubit, -1)
    t = t @ matrix.T
    return np.moveaxis(t, -1, qubit).reshape(-1)


def _controlled_swap(
    state: np.ndarray, control: int, q1: int, q2: int, q: int
) -> np.ndarray:
    t = state.reshape([2] * q).copy()
    idx = [slice(None)] * q
    idx[control] = 1
    block = t[tuple(idx)]
    # axes shift down by one for qubits past the control
    a1 = q1 - (q1 > control)
    a2 = q2 - (q2 > control)
    t[tuple(idx)] = np.swapaxes(block, a1, a2)
    return t.reshape(-1)


def partial_trace(state, keep) -> DensityMatrix:
    """Reduced density matrix on the kept qubits (ascending order)."""
    keep = sorted(set(int(k) for k in keep))
    if isinstance(state, StateVector):
        q = state.q
        _check_keep(keep, q)
        traced = [i for i in range(q) if i not in keep]
        t = state.amplitudes.reshape([2] * q)
        t = np.transpose(t, keep + traced)
        mat = t.reshape(2 ** len(keep), 2 ** len(traced))
        return DensityMatrix(len(keep), mat @ mat.conj().T)
    if isinstance(state, DensityMatrix):
        _check_keep(keep, state.q)
        return _partial_trace_dm(state, keep)
    raise InputError(f"unsupported state type {type(state)!r}")


def _check_keep(keep, q):
    if not keep:
        raise InputError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= q:
        raise InputError(f"keep indices must lie in [0, {q})")


def _partial_trace_dm(state: DensityMatrix, keep: list[int]) -> DensityMatrix:
    q = state.q
    traced = [i for i in range(q) if i not in keep]
    t = state.entries.reshape([2] * (2 * q))
    # reorder row axes to keep+traced, same for column axes
    perm = keep + traced + [q + i for i in keep] + [q + i for i in traced]
    t = np.transpose(t, perm)
    dk, dt = 2 ** len(keep), 2 ** len(traced)
    t = t.reshape(dk, dt, dk, dt)
    return DensityMatrix(len(keep), np.einsum("ixjx->ij", t))


def _psd_root(r: DensityMatrix) -> np.ndarray:
    vals, vecs = np.linalg.eigh(r.entries)
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


def uhlmann_fidelity(r: DensityMatrix, s: DensityMatrix) -> float:
    """F = tr sqrt(sqrt(r) s sqrt(r)) = nuclear norm of sqrt(r) sqrt(s).

    The singular-value form avoids the square root of clipped near-zero
    eigenvalues, which would amplify eigensolver noise.
    """
    if r.q != s.q:
        raise InputError(f"dimension mismatch: {r.q} vs {s.q} qubits")
    sv = np.linalg.svd(_psd_root(r) @ _psd_root(s), compute_uv=False)
    return float(min(1.0, sv.sum()))


def schmidt_rank(s: StateVector, partition) -> int:
    """Number of singular values above 1e-9 across the given bipartition."""
    part = sorted(set(int(i) for i in partition))
    if not part or len(part) >= s.q or part[0] < 0 or part[-1] >= s.q:
        raise InputError("partition must be a proper nonempty subset of the qubits")
    rest = [i for i in range(s.q) if i not in part]
    t = np.transpose(s.amplitudes.reshape([2] * s.q), part + rest)
    sv = np.linalg.svd(t.reshape(2 ** len(part), -1), compute_uv=False)
    return int((sv > EIG_FLOOR).sum())


# Tetrahedral informationally complete single-qubit POVM: four equal-weight
# rank-one elements along the regular tetrahedron directions. Its descriptor
# is a constant independent of system size.
_TETRA_DIRECTIONS = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / np.sqrt(3)


def _bloch_state(direction: np.ndarray) -> np.ndarray:
    x, y, z = direction
    theta = np.arccos(np.clip(z, -1, 1))
    phi = np.arctan2(y, x)
    return np.array(
        [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], dtype=np.complex128
    )


def tetrahedral_povm_elements() -> list[np.ndarray]:
    """The four 2x2 POVM elements (each |v><v| / 2); they sum to identity."""
    return [
        0.5 * np.outer(v, v.conj())
        for v in (_bloch_state(d) for d in _TETRA_DIRECTIONS)
    ]


@dataclass(frozen=True)
class PovmDistribution:
    probabilities: np.ndarray = field(repr=False)
    description: "object" = None  # ComplexitySurrogate of the serialization


def povm_outcome_distribution(s: StateVector) -> PovmDistribution:
    """Outcome distribution of the tensor-power tetrahedral POVM.

    Outcome index is base-4, qubit 0 most significant. Since every element
    is rank one, p_k = |<v_k1 ... v_kq | s>|^2 / 2^q.
    """
    from .compressor import kcl_upper  # local import to avoid a cycle

    if s.q > POVM_QUBIT_CAP:
        raise CapError(f"POVM distribution capped at q <= {POVM_QUBIT_CAP}")
    basis = np.array([_bloch_state(d) for d in _TETRA_DIRECTIONS])  # 4 x 2
    t = s.amplitudes.reshape([2] * s.q)
    for _ in range(s.q):
        # contract the leading qubit axis; its outcome axis lands at the end,
        # so the final axis order matches the qubit order
        t = np.tensordot(t, basis.conj(), axes=([0], [1]))
    probs = (np.abs(t) ** 2).reshape(-1) / 2**s.q
    payload = _fixed_point_serialize(probs)
    return PovmDistribution(probs, kcl_upper(payload))


def _fixed_point_serialize(probs: np.ndarray, bits: int = 16) -> bytes:
    scaled = np.round(probs * (2**bits - 1)).astype(np.uint16)
    return scaled.astype(">u2").tobytes()


def sample_measurement(s: StateVector, basis, seed: int) -> int:
    """Outcome index for one projective measurement; deterministic per seed.

    ``basis`` is "computational" or a (2^q, 2^q) matrix whose rows are the
    basis vectors.
    """
    if isinstance(basis, str):
        if basis != "computational":
            raise InputError(f"unknown basis spec {basis!r}")
        probs = np.abs(s.amplitudes) ** 2
    else:
        mat = np.asarray(basis, dtype=np.complex128)
        if mat.shape != (2**s.q, 2**s.q):
            raise InputError("basis matrix has wrong shape")
        probs = np.abs(mat.conj() @ s.amplitudes) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    return int(rng.choice(len(probs), p=probs))
