"""Dense pure-state simulation: gate application, inner products, measurement,
single-qubit partial traces.

Convention: qubit 0 is the most significant bit of the amplitude index, so
|s⟩ for bit string s = s_0 s_1 ... s_{n-1} sits at index int(s, 2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .circuit import Circuit, Gate

NORM_ATOL = 1e-9


@dataclass(frozen=True)
class PureState:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        if amps.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def computational(cls, num_qubits: int, index: int = 0) -> "PureState":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def plus(cls, num_qubits: int) -> "PureState":
        dim = 1 << num_qubits
        return cls(num_qubits, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


@dataclass(frozen=True)
class DensityMatrix:
    num_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.entries, dtype=np.complex128)
        dim = 1 << self.num_qubits
        if m.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {m.shape}")
        if np.abs(m - m.conj().T).max() > NORM_ATOL:
            raise ValueError("density matrix not Hermitian")
        if abs(np.trace(m).real - 1.0) > NORM_ATOL or abs(np.trace(m).imag) > NORM_ATOL:
            raise ValueError("density matrix trace != 1")
        if np.linalg.eigvalsh(m).min() < -NORM_ATOL:
            raise ValueError("density matrix has a negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityMatrix":
        a = state.amplitudes
        return cls(state.num_qubits, np.outer(a, a.conj()))

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.entries, self.entries).real)


def tensor(*states: PureState) -> PureState:
    """Tensor product, leftmost factor = most significant qubits."""
    amps = np.array([1.0 + 0j])
    n = 0
    for s in states:
        amps = np.kron(amps, s.amplitudes)
        n += s.num_qubits
    return PureState(n, amps)


def random_state(num_qubits: int, rng: np.random.Generator) -> PureState:
    """Haar-ish random pure state (normalized complex Gaussian vector)."""
    dim = 1 << num_qubits
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState(num_qubits, v / np.linalg.norm(v))


def apply_gate(state: PureState, gate: Gate) -> PureState:
    """Return U_gate|state⟩; raises on out-of-range qubit indices."""
    if max(gate.qubits) >= state.num_qubits:
        raise ValueError(f"gate {gate} out of range for {state.num_qubits} qubits")
    circ = Circuit(state.num_qubits, (gate,))
    return simulate(circ, state)


def simulate(circuit: Circuit, state: PureState) -> PureState:
    """Apply every gate of `circuit` to `state` in order."""
    if circuit.num_qubits != state.num_qubits:
        raise ValueError(
            f"circuit on {circuit.num_qubits} qubits, state on {state.num_qubits}"
        )
    amps = state.amplitudes.copy()
    kinds, q0, q1 = circuit.to_arrays()
    _kernels.apply_gates(amps, state.num_qubits, kinds, q0, q1)
    return PureState(state.num_qubits, amps)


def to_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit (intended for small qubit counts)."""
    n = circuit.num_qubits
    dim = 1 << n
    kinds, q0, q1 = circuit.to_arrays()
    u = np.eye(dim, dtype=np.complex128)
    for col in range(dim):
        buf = np.ascontiguousarray(u[:, col])
        _kernels.apply_gates(buf, n, kinds, q0, q1)
        u[:, col] = buf
    return u


def inner(a: PureState, b: PureState) -> complex:
    """⟨a|b⟩."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("dimension mismatch")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity_up_to_phase(a: PureState, b: PureState) -> float:
    """|⟨a|b⟩| in [0, 1]: equality test for states modulo global phase."""
    return float(min(abs(inner(a, b)), 1.0))


_MEASUREMENT_VECTORS = {
    ("X", +1): np.array([1, 1], dtype=complex) / np.sqrt(2),
    ("X", -1): np.array([1, -1], dtype=complex) / np.sqrt(2),
    ("Y", +1): np.array([1, 1j], dtype=complex) / np.sqrt(2),
    ("Y", -1): np.array([1, -1j], dtype=complex) / np.sqrt(2),
    ("Z", +1): np.array([1, 0], dtype=complex),
    ("Z", -1): np.array([0, 1], dtype=complex),
}


def measure_qubit(state: PureState, qubit: int, basis: str, outcome: int
                  ) -> tuple[float, PureState]:
    """Project `qubit` onto the ±1 eigenvector of the chosen Pauli.

    Returns (outcome probability, renormalized post-state with the measured
    qubit removed). Raises ValueError if the outcome has probability <= 1e-12
    or the state is a single qubit (nothing would remain).
    """
    if not 0 <= qubit < state.num_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    if state.num_qubits < 2:
        raise ValueError("cannot drop the only qubit")
    key = (basis.upper(), int(outcome))
    if key not in _MEASUREMENT_VECTORS:
        raise ValueError(f"basis must be X/Y/Z and outcome ±1, got {basis}, {outcome}")
    v = _MEASUREMENT_VECTORS[key]
    view = state.amplitudes.reshape(1 << qubit, 2, -1)
    post = np.tensordot(v.conj(), view, axes=([0], [1]))  # (pre, post)
    post = post.reshape(-1)
    prob = float(np.vdot(post, post).real)
    if prob <= 1e-12:
        raise ValueError(f"outcome {outcome} in basis {basis} has zero probability")
    return prob, PureState(state.num_qubits - 1, post / np.sqrt(prob))


def partial_trace_single(state: PureState, keep_qubit: int) -> DensityMatrix:
    """Reduced 2x2 density matrix of one qubit."""
    if not 0 <= keep_qubit < state.num_qubits:
        raise ValueError(f"qubit {keep_qubit} out of range")
    view = state.amplitudes.reshape(1 << keep_qubit, 2, -1)
    rho = np.einsum("aib,ajb->ij", view, view.conj())
    return DensityMatrix(1, rho)
