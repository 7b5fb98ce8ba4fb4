"""Pauli strings, enumeration of all n-qubit pure stabilizer states (n <= 4),
Pauli-against-unitary matching, and Clifford-hierarchy level testing.

Stabilizer states are held in affine-subspace form: amplitudes are
2^{-k/2} · i^{l(t)} · (-1)^{q(t)} on the support {A t ⊕ b : t ∈ F_2^k},
with l linear and q quadratic over F_2. Bit vectors are stored as integer
masks in amplitude-index space (qubit 0 = most significant bit).
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .statevector import PureState

STATE_COUNTS = {1: 6, 2: 60, 3: 1080, 4: 36720}

_CACHE_ENV = "CATINJECT_CACHE_DIR"
_CACHE_VERSION = 1


def _popcount(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True)
class PauliString:
    """phase · ⊗_q σ_q with σ_q ∈ {I,X,Y,Z} read off (x_bits, z_bits).

    x_bits/z_bits are index-space masks (bit n-1-q holds qubit q); the phase
    is i^phase_power. The operator is Hermitian iff phase ∈ {1, -1}.
    """
    num_qubits: int
    x_bits: int
    z_bits: int
    phase_power: int = 0

    def __post_init__(self):
        mask = (1 << self.num_qubits) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValueError("bit mask wider than num_qubits")
        object.__setattr__(self, "phase_power", self.phase_power % 4)

    @classmethod
    def identity(cls, num_qubits: int) -> "PauliString":
        return cls(num_qubits, 0, 0, 0)

    @classmethod
    def single(cls, num_qubits: int, qubit: int, which: str) -> "PauliString":
        bit = 1 << (num_qubits - 1 - qubit)
        x, z = {"X": (bit, 0), "Y": (bit, bit), "Z": (0, bit)}[which.upper()]
        return cls(num_qubits, x, z, 0)

    @classmethod
    def from_label(cls, label: str, phase_power: int = 0) -> "PauliString":
        x = z = 0
        for ch in label.upper():
            x <<= 1
            z <<= 1
            if ch == "X":
                x |= 1
            elif ch == "Z":
                z |= 1
            elif ch == "Y":
                x |= 1
                z |= 1
            elif ch != "I":
                raise ValueError(f"bad Pauli label character {ch!r}")
        return cls(len(label), x, z, phase_power)

    @property
    def phase(self) -> complex:
        return 1j ** self.phase_power

    @property
    def is_hermitian(self) -> bool:
        return self.phase_power % 2 == 0

    def label(self) -> str:
        out = []
        for q in range(self.num_qubits):
            bit = 1 << (self.num_qubits - 1 - q)
            xq, zq = bool(self.x_bits & bit), bool(self.z_bits & bit)
            out.append("IXZY"[xq + 2 * zq] if not (xq and zq) else "Y")
        return "".join(out)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.num_qubits != other.num_qubits:
            raise ValueError("dimension mismatch")
        return (
            _popcount(self.x_bits & other.z_bits)
            + _popcount(self.z_bits & other.x_bits)
        ) % 2 == 0

    def apply(self, amps: np.ndarray) -> np.ndarray:
        """P|ψ⟩ for a dense amplitude vector."""
        dim = 1 << self.num_qubits
        if amps.shape != (dim,):
            raise ValueError("dimension mismatch")
        j = np.arange(dim, dtype=np.uint64)
        signs = 1.0 - 2.0 * (
            np.bitwise_count(j & np.uint64(self.z_bits)).astype(np.int64) & 1
        )
        out = np.empty(dim, dtype=np.complex128)
        out[j ^ np.uint64(self.x_bits)] = signs * amps
        out *= 1j ** ((self.phase_power + _popcount(self.x_bits & self.z_bits)) % 4)
        return out

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.num_qubits
        m = np.zeros((dim, dim), dtype=np.complex128)
        ph = 1j ** ((self.phase_power + _popcount(self.x_bits & self.z_bits)) % 4)
        for col in range(dim):
            m[col ^ self.x_bits, col] = ph * (-1) ** (_popcount(self.z_bits & col) % 2)
        return m


@dataclass(frozen=True)
class StabilizerStateForm:
    """Affine form of a pure stabilizer state.

    basis: k RREF row masks spanning the support direction space;
    offset: coset representative (zero on pivot columns);
    linear_i: k bits, i-power contributions i^{t_j};
    quad: k masks of sign bits, quad[j] covers j' >= j (diagonal included),
          each set bit contributing (-1)^{t_j t_j'}.
    """
    num_qubits: int
    basis: tuple[int, ...]
    offset: int
    linear_i: tuple[int, ...]
    quad: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.basis)

    def amplitude_phase_power(self, t: int) -> int:
        """Power of i multiplying 2^{-k/2} at support point t."""
        p = 0
        for j in range(self.k):
            if (t >> j) & 1:
                p += self.linear_i[j] + 2 * ((self.quad[j] >> j) & 1)
                for jp in range(j + 1, self.k):
                    if (t >> jp) & 1 and (self.quad[j] >> jp) & 1:
                        p += 2
        return p % 4

    def support_index(self, t: int) -> int:
        idx = self.offset
        for j in range(self.k):
            if (t >> j) & 1:
                idx ^= self.basis[j]
        return idx

    def to_statevector(self) -> PureState:
        amps = np.zeros(1 << self.num_qubits, dtype=np.complex128)
        scale = 2.0 ** (-self.k / 2)
        for t in range(1 << self.k):
            amps[self.support_index(t)] = scale * 1j ** self.amplitude_phase_power(t)
        return PureState(self.num_qubits, amps)


def _rref_bases(n: int, k: int):
    """Yield (rows, pivot_mask) for every k x n RREF binary matrix."""
    if k == 0:
        yield (), 0
        return
    for pivots in itertools.combinations(range(n), k):
        pivot_mask = 0
        for c in pivots:
            pivot_mask |= 1 << (n - 1 - c)
        free = [
            (r, c)
            for r in range(k)
            for c in range(pivots[r] + 1, n)
            if c not in pivots
        ]
        base_rows = [1 << (n - 1 - pivots[r]) for r in range(k)]
        for bits in range(1 << len(free)):
            rows = list(base_rows)
            for i, (r, c) in enumerate(free):
                if (bits >> i) & 1:
                    rows[r] |= 1 << (n - 1 - c)
            yield tuple(rows), pivot_mask


def _enumerate(n: int) -> tuple[StabilizerStateForm, ...]:
    states: list[StabilizerStateForm] = []
    for k in range(n + 1):
        n_offdiag = k * (k - 1) // 2
        for rows, pivot_mask in _rref_bases(n, k):
            free_bits = [b for b in range(n) if not (pivot_mask >> b) & 1]
            for off in range(1 << len(free_bits)):
                offset = 0
                for i, b in enumerate(free_bits):
                    if (off >> i) & 1:
                        offset |= 1 << b
                for lin in range(1 << k):
                    linear_i = tuple((lin >> j) & 1 for j in range(k))
                    for diag in range(1 << k):
                        for od in range(1 << n_offdiag):
                            quad = []
                            pos = 0
                            for j in range(k):
                                mask = ((diag >> j) & 1) << j
                                for jp in range(j + 1, k):
                                    mask |= ((od >> pos) & 1) << jp
                                    pos += 1
                                quad.append(mask)
                            states.append(
                                StabilizerStateForm(
                                    n, rows, offset, linear_i, tuple(quad)
                                )
                            )
    return tuple(states)


def _cache_path(n: int) -> Path | None:
    root = os.environ.get(_CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"stabilizer_states_n{n}_v{_CACHE_VERSION}.npz"


def _save_cache(path: Path, states: tuple[StabilizerStateForm, ...], n: int) -> None:
    kmax = n
    S = len(states)
    ks = np.array([s.k for s in states], dtype=np.int8)
    basis = np.zeros((S, kmax), dtype=np.int64)
    quad = np.zeros((S, kmax), dtype=np.int64)
    lin = np.zeros((S, kmax), dtype=np.int8)
    offs = np.array([s.offset for s in states], dtype=np.int64)
    for i, s in enumerate(states):
        basis[i, : s.k] = s.basis
        quad[i, : s.k] = s.quad
        lin[i, : s.k] = s.linear_i
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(
        path, version=_CACHE_VERSION, n=n, k=ks, basis=basis, quad=quad,
        linear=lin, offset=offs,
    )


def _load_cache(path: Path, n: int) -> tuple[StabilizerStateForm, ...] | None:
    try:
        with np.load(path) as data:
            if int(data["version"]) != _CACHE_VERSION or int(data["n"]) != n:
                return None
            ks, basis = data["k"], data["basis"]
            quad, lin, offs = data["quad"], data["linear"], data["offset"]
    except (OSError, KeyError, ValueError):
        return None
    out = []
    for i in range(len(ks)):
        k = int(ks[i])
        out.append(
            StabilizerStateForm(
                n,
                tuple(int(v) for v in basis[i, :k]),
                int(offs[i]),
                tuple(int(v) for v in lin[i, :k]),
                tuple(int(v) for v in quad[i, :k]),
            )
        )
    return tuple(out)


@lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> tuple[StabilizerStateForm, ...]:
    path = _cache_path(n)
    if path is not None and path.exists():
        cached = _load_cache(path, n)
        if cached is not None and len(cached) == STATE_COUNTS[n]:
            return cached
    states = _enumerate(n)
    if len(states) != STATE_COUNTS[n]:
        raise RuntimeError(
            f"enumeration bug: {len(states)} states for n={n}, "
            f"expected {STATE_COUNTS[n]}"
        )
    if path is not None:
        _save_cache(path, states, n)
    return states


def enumerate_stabilizer_states(n: int) -> list[StabilizerStateForm]:
    """Complete duplicate-free list of the n-qubit pure stabilizer states."""
    if n not in STATE_COUNTS:
        raise ValueError(f"enumeration supported for n in 1..4, got {n}")
    return list(_enumerate_cached(n))


def pauli_expectation(state: StabilizerStateForm, pauli: PauliString) -> int:
    """⟨φ|P|φ⟩ evaluated exactly; result is in {-1, 0, +1}.

    Raises ValueError for non-Hermitian phases (the expectation would be
    imaginary).
    """
    if state.num_qubits != pauli.num_qubits:
        raise ValueError("dimension mismatch")
    if not pauli.is_hermitian:
        raise ValueError("expectation of a non-Hermitian Pauli is not real")
    k = state.k
    x, z = pauli.x_bits, pauli.z_bits
    # Solve A u = x over F_2 using the RREF structure; pivot bit of row j
    # is its highest set bit only after accounting for RREF: each row has a
    # unique pivot column not present in other rows, so peel greedily.
    u = 0
    rem = x
    for j in range(k):
        # pivot bit of row j = highest bit of basis[j] not shared as pivot:
        # in RREF with canonical construction, rows are ordered by pivot
        # column; the pivot bit is the highest set bit of the row.
        pb = 1 << (state.basis[j].bit_length() - 1)
        if rem & pb:
            u |= 1 << j
            rem ^= state.basis[j]
    if rem != 0:
        return 0
    # i-power linear part l_j in Z_4 (linear_i bit + 2*diagonal sign bit)
    l4 = [state.linear_i[j] + 2 * ((state.quad[j] >> j) & 1) for j in range(k)]
    # residual linear form w over t; expectation nonzero iff w == 0
    lu = 0
    qu = 0
    w = 0
    for j in range(k):
        uj = (u >> j) & 1
        if uj:
            lu += l4[j]
        wj = (l4[j] * uj) & 1
        # polar bilinear form of the strict upper-triangular sign bits
        for jp in range(k):
            if jp == j:
                continue
            lo, hi = (j, jp) if j < jp else (jp, j)
            if (state.quad[lo] >> hi) & 1 and (u >> jp) & 1:
                wj ^= 1
        if uj:
            for jp in range(j + 1, k):
                if (state.quad[j] >> jp) & 1 and (u >> jp) & 1:
                    qu ^= 1
        wj ^= _popcount(z & state.basis[j]) & 1
        w |= wj << j
    if w != 0:
        return 0
    power = (
        pauli.phase_power
        + _popcount(x & z)
        - lu
        + 2 * qu
        + 2 * (_popcount(z & state.offset) & 1)
    ) % 4
    if power % 2 != 0:
        raise AssertionError("non-real expectation for Hermitian Pauli")
    return 1 if power == 0 else -1


def is_pauli(u: np.ndarray, tol: float = 1e-8) -> PauliString | None:
    """Match a unitary against phase · ⊗σ with phase ∈ {1,i,-1,-i}.

    Returns the PauliString on a match within `tol` (max entrywise), else
    None. Raises for non-square or non-power-of-two dimensions.
    """
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("matrix must be square")
    dim = u.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError("dimension must be a power of two")
    col0 = u[:, 0]
    x = int(np.argmax(np.abs(col0)))
    entry = col0[x]
    if abs(abs(entry) - 1.0) > tol:
        return None
    z = 0
    for q in range(n):
        bit = 1 << (n - 1 - q)
        ratio = u[x ^ bit, bit] / entry
        if abs(ratio - 1.0) <= tol:
            pass
        elif abs(ratio + 1.0) <= tol:
            z |= bit
        else:
            return None
    # entry = i^{phase_power} * i^{|x & z|}
    base = 1j ** (_popcount(x & z) % 4)
    rel = entry / base
    for p in range(4):
        if abs(rel - 1j ** p) <= tol:
            candidate = PauliString(n, x, z, p)
            if np.abs(candidate.to_matrix() - u).max() <= tol:
                return candidate
            return None
    return None


def hierarchy_level_at_most(u: np.ndarray, k: int, tol: float = 1e-8) -> bool:
    """True iff `u` sits in level <= k of the Clifford hierarchy (k <= 3).

    Level 1 is the Pauli group (with {1,i,-1,-i} phases); level k requires
    u P u† to lie in level k-1 for every generator P ∈ {X_q, Z_q}.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("matrix must be square")
    dim = u.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError("dimension must be a power of two")
    if n > 6:
        raise ValueError("hierarchy test supports at most 6 qubits")
    if not 1 <= k <= 3:
        raise ValueError("level k must be in 1..3")
    if k == 1:
        return is_pauli(u, tol) is not None
    udag = u.conj().T
    for q in range(n):
        for which in ("X", "Z"):
            p = PauliString.single(n, q, which).to_matrix()
            conj = u @ p @ udag
            if not hierarchy_level_at_most(conj, k - 1, tol):
                return False
    return True
