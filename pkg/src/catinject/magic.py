"""Magic monotones: robustness of magic via L1 minimization over the
stabilizer basis, and a brute-force stabilizer-rank search for tiny states.
"""
from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import catstates
from .lp import minimize_l1
from .statevector import DensityMatrix, PureState
from .stabilizer import enumerate_stabilizer_states

_CACHE_ENV = "CATINJECT_CACHE_DIR"
_MATRIX_CACHE_VERSION = 1


@dataclass(frozen=True)
class RomResult:
    """Robustness value and the signed quasi-mixture over stabilizer states.

    `coefficients` maps indices into enumerate_stabilizer_states(basis_n) to
    the nonzero x_i of the optimal decomposition ρ = Σ x_i |φ_i⟩⟨φ_i|.
    """
    value: float
    coefficients: dict[int, float]
    basis_n: int


@dataclass(frozen=True)
class RankResult:
    rank: int
    decomposition: tuple[tuple[complex, int], ...]
    found: bool


@lru_cache(maxsize=None)
def _state_matrix(n: int) -> np.ndarray:
    """All stabilizer statevectors stacked as an (S, 2^n) array."""
    states = enumerate_stabilizer_states(n)
    return np.array([s.to_statevector().amplitudes for s in states])


def _matrix_cache_path(n: int) -> Path | None:
    root = os.environ.get(_CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"rom_constraints_n{n}_v{_MATRIX_CACHE_VERSION}.npz"


@lru_cache(maxsize=None)
def constraint_matrix(n: int) -> np.ndarray:
    """Pauli-expectation matrix: 4^n rows (x-major, then z), S_n columns.

    Entries are exact {0, ±1} integers stored as int8. Row r corresponds to
    the Hermitian Pauli with x = r >> n, z = r & (2^n - 1).
    """
    path = _matrix_cache_path(n)
    if path is not None and path.exists():
        try:
            with np.load(path) as data:
                if int(data["version"]) == _MATRIX_CACHE_VERSION and int(data["n"]) == n:
                    return data["matrix"]
        except (OSError, KeyError, ValueError):
            pass
    V = _state_matrix(n)
    dim = 1 << n
    S = V.shape[0]
    out = np.empty((dim * dim, S), dtype=np.int8)
    j = np.arange(dim, dtype=np.uint64)
    r = 0
    for x in range(dim):
        Vperm_conj = V[:, j ^ np.uint64(x)].conj()
        for z in range(dim):
            signs = 1.0 - 2.0 * (
                np.bitwise_count(j & np.uint64(z)).astype(np.int64) & 1
            )
            ph = 1j ** (int(x & z).bit_count() % 4)
            e = ph * np.einsum("sd,sd->s", V * signs, Vperm_conj)
            rounded = np.rint(e.real)
            if (np.abs(e.imag).max() > 1e-9 or
                    np.abs(e.real - rounded).max() > 1e-7):
                raise AssertionError("non-integer Pauli expectation")
            out[r] = rounded.astype(np.int8)
            r += 1
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez_compressed(path, version=_MATRIX_CACHE_VERSION, n=n, matrix=out)
    return out


def pauli_expectations_of_density(rho: DensityMatrix) -> np.ndarray:
    """Tr(P ρ) for every Hermitian Pauli, in constraint_matrix row order."""
    n = rho.num_qubits
    dim = 1 << n
    m = rho.entries
    b = np.empty(dim * dim)
    j = np.arange(dim, dtype=np.uint64)
    r = 0
    for x in range(dim):
        perm = (j ^ np.uint64(x)).astype(np.int64)
        for z in range(dim):
            signs = 1.0 - 2.0 * (
                np.bitwise_count(j & np.uint64(z)).astype(np.int64) & 1
            )
            ph = 1j ** (int(x & z).bit_count() % 4)
            val = ph * np.sum(signs * m[perm, j.astype(np.int64)])
            if abs(val.imag) > 1e-9:
                raise AssertionError("non-real Pauli expectation of a density matrix")
            b[r] = val.real
            r += 1
    return b


def rom(rho: DensityMatrix, n: int | None = None) -> RomResult:
    """Robustness of magic: min Σ|x| with ρ = Σ x_i |φ_i⟩⟨φ_i| over S_n.

    Solved as an LP on the Pauli-expectation constraints. Supported for
    n ≤ 4 (the 4-qubit case takes on the order of a minute).
    """
    if n is None:
        n = rho.num_qubits
    if n != rho.num_qubits:
        raise ValueError("n does not match the density matrix")
    if not 1 <= n <= 4:
        raise ValueError("robustness supported for 1..4 qubits")
    A = constraint_matrix(n)
    b = pauli_expectations_of_density(rho)
    solution = minimize_l1(A.astype(np.float64), b)
    coeffs = {
        int(i): float(v)
        for i, v in enumerate(solution.x)
        if abs(v) > 1e-12
    }
    return RomResult(value=float(solution.objective), coefficients=coeffs, basis_n=n)


def reconstruct_density(result: RomResult) -> np.ndarray:
    """Σ x_i |φ_i⟩⟨φ_i| for a RomResult (dense matrix, for verification)."""
    states = enumerate_stabilizer_states(result.basis_n)
    dim = 1 << result.basis_n
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i, x in result.coefficients.items():
        v = states[i].to_statevector().amplitudes
        out += x * np.outer(v, v.conj())
    return out


def brute_rank(state: PureState, r_max: int = 4) -> RankResult:
    """Smallest r such that `state` is a combination of r stabilizer states.

    Exhaustive search over r-subsets of the n-qubit stabilizer basis with a
    least-squares fit per subset (n ≤ 2; the n=2, r=4 worst case enumerates
    ~half a million subsets).
    """
    n = state.num_qubits
    if n > 2:
        raise ValueError("brute-force rank supported for 1..2 qubits")
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    V = _state_matrix(n)
    psi = state.amplitudes
    overlaps = V.conj() @ psi
    # r = 1: exact match up to phase
    for i in np.flatnonzero(np.abs(np.abs(overlaps) - 1.0) < 1e-9):
        c = complex(overlaps[i].conjugate())
        if np.abs(c * V[i] - psi).max() < 1e-8:
            return RankResult(rank=1, decomposition=((c, int(i)),), found=True)
    for r in range(2, r_max + 1):
        for subset in itertools.combinations(range(V.shape[0]), r):
            M = V[list(subset)].T
            c, *_ = np.linalg.lstsq(M, psi, rcond=None)
            if np.abs(M @ c - psi).max() < 1e-8:
                decomp = tuple(
                    (complex(ci), int(si)) for ci, si in zip(c, subset)
                )
                return RankResult(rank=r, decomposition=decomp, found=True)
    return RankResult(rank=0, decomposition=(), found=False)


# Named reference states --------------------------------------------------

_CS_STATE = np.array([1, 1, 1, 1j], dtype=np.complex128) / 2
_CCZ_STATE = np.full(8, 1 / np.sqrt(8), dtype=np.complex128)
_CCZ_STATE[7] *= -1
_HOGGAR_STATE = np.array(
    [1 + 1j, 0, -1, 1, -1j, 1, 0, 0], dtype=np.complex128
) / np.sqrt(6)


def named_state(name: str) -> PureState:
    """Resolve T/T2../CS/CCZ/HOGGAR/CATm/STARCATm to a PureState."""
    key = name.strip().upper()
    if key == "CS":
        return PureState(2, _CS_STATE)
    if key == "CCZ":
        return PureState(3, _CCZ_STATE)
    if key == "HOGGAR":
        return PureState(3, _HOGGAR_STATE)
    m = re.fullmatch(r"T(\d*)", key)
    if m:
        count = int(m.group(1)) if m.group(1) else 1
        if count < 1:
            raise ValueError(f"bad tensor power in {name!r}")
        return PureState(count, catstates._kron_power(catstates.T_KET, count))
    m = re.fullmatch(r"CAT(\d+)", key)
    if m:
        return catstates.cat_state(int(m.group(1)))
    m = re.fullmatch(r"STARCAT(\d+)", key)
    if m:
        return catstates.star_cat(int(m.group(1)))
    raise ValueError(f"unknown state name {name!r}")
