"""Statevector gate kernels: numba-compiled loops with a pure-numpy fallback.

The numba path is used whenever numba imports successfully, unless the
environment variable ``CATINJECT_FORCE_NUMPY`` is set to 1/true/yes/on.
Amplitude ordering everywhere: qubit 0 is the most significant bit of the
amplitude index, so qubit q has bit position n-1-q.
"""
from __future__ import annotations

import math
import os

import numpy as np

# Gate kind codes shared with circuit.Gate (same order as circuit.GATE_KINDS).
H, S, SDG, T, TDG, X, Y, Z, CX, CZ = range(10)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_EIPI4 = complex(_INV_SQRT2, _INV_SQRT2)


def _env_forces_numpy() -> bool:
    return os.environ.get("CATINJECT_FORCE_NUMPY", "").strip().lower() in {
        "1", "true", "yes", "on",
    }


def _numpy_apply_gates(amps: np.ndarray, n: int, kinds, q0, q1) -> None:
    """Reference implementation: per-gate strided views, in place."""
    for g in range(len(kinds)):
        k = kinds[g]
        if k < CX:
            q = q0[g]
            view = amps.reshape(1 << q, 2, -1)
            lo, hi = view[:, 0, :], view[:, 1, :]
            if k == H:
                a = lo.copy()
                lo += hi
                lo *= _INV_SQRT2
                hi *= -1
                hi += a
                hi *= _INV_SQRT2
            elif k == S:
                hi *= 1j
            elif k == SDG:
                hi *= -1j
            elif k == T:
                hi *= _EIPI4
            elif k == TDG:
                hi *= _EIPI4.conjugate()
            elif k == X:
                a = lo.copy()
                lo[:] = hi
                hi[:] = a
            elif k == Y:
                a = lo.copy()
                lo[:] = -1j * hi
                hi[:] = 1j * a
            else:  # Z
                hi *= -1
        else:
            a, b = q0[g], q1[g]
            qlo, qhi = (a, b) if a < b else (b, a)
            view = amps.reshape(
                1 << qlo, 2, 1 << (qhi - qlo - 1), 2, -1
            )
            if k == CZ:
                view[:, 1, :, 1, :] *= -1
            elif a < b:  # control on the outer axis
                tmp = view[:, 1, :, 0, :].copy()
                view[:, 1, :, 0, :] = view[:, 1, :, 1, :]
                view[:, 1, :, 1, :] = tmp
            else:  # target on the outer axis
                tmp = view[:, 0, :, 1, :].copy()
                view[:, 0, :, 1, :] = view[:, 1, :, 1, :]
                view[:, 1, :, 1, :] = tmp


def _make_numba_kernel():
    from numba import njit

    inv_sqrt2 = _INV_SQRT2
    eipi4 = _EIPI4
    emipi4 = _EIPI4.conjugate()

    @njit(cache=True)
    def apply_gates(amps, n, kinds, q0, q1):  # pragma: no cover - compiled
        dim = amps.shape[0]
        for g in range(kinds.shape[0]):
            k = kinds[g]
            if k < 8:
                p = n - 1 - q0[g]
                s = 1 << p
                half = dim >> 1
                if k == 0:  # H
                    for i in range(half):
                        i0 = ((i >> p) << (p + 1)) | (i & (s - 1))
                        i1 = i0 | s
                        a = amps[i0]
                        b = amps[i1]
                        amps[i0] = (a + b) * inv_sqrt2
                        amps[i1] = (a - b) * inv_sqrt2
                elif k == 1:  # S
                    for i in range(half):
                        i0 = ((i >> p) << (p + 1)) | (i & (s - 1))
                        amps[i0 | s] *= 1j
                elif k == 2:  # SDG
                    for i in range(half):
                        i0 = ((i >> p) << (p + 1)) | (i & (s - 1))
                        amps[i0 | s] *= -1j
                elif k == 3:  # T
                    for i in range(half):
                        i0 = ((i >> p) << (p + 1)) | (i & (s - 1))
                        amps[i0 | s] *= eipi4
                elif k == 4:  # TDG
                    for i in range(half):
                        i0 = ((i >> p) << (p + 1)) | (i & (s - 1))
                        amps[i0 | s] *= emipi4
                elif k == 5:  # X
                    for i in range(half):
                        i0 = ((i >> p) << (p + 1)) | (i & (s - 1))
                        i1 = i0 | s
                        a = amps[i0]
                        amps[i0] = amps[i1]
                        amps[i1] = a
                elif k == 6:  # Y
                    for i in range(half):
                        i0 = ((i >> p) << (p + 1)) | (i & (s - 1))
                        i1 = i0 | s
                        a = amps[i0]
                        amps[i0] = -1j * amps[i1]
                        amps[i1] = 1j * a
                else:  # Z
                    for i in range(half):
                        i0 = ((i >> p) << (p + 1)) | (i & (s - 1))
                        amps[i0 | s] = -amps[i0 | s]
            else:
                pc = n - 1 - q0[g]
                pt = n - 1 - q1[g]
                p_lo = pc if pc < pt else pt
                p_hi = pt if pc < pt else pc
                sc = 1 << pc
                st = 1 << pt
                quarter = dim >> 2
                if k == 8:  # CX
                    for i in range(quarter):
                        i0 = ((i >> p_lo) << (p_lo + 1)) | (i & ((1 << p_lo) - 1))
                        i0 = ((i0 >> p_hi) << (p_hi + 1)) | (i0 & ((1 << p_hi) - 1))
                        ia = i0 | sc
                        ib = ia | st
                        a = amps[ia]
                        amps[ia] = amps[ib]
                        amps[ib] = a
                else:  # CZ
                    for i in range(quarter):
                        i0 = ((i >> p_lo) << (p_lo + 1)) | (i & ((1 << p_lo) - 1))
                        i0 = ((i0 >> p_hi) << (p_hi + 1)) | (i0 & ((1 << p_hi) - 1))
                        amps[i0 | sc | st] = -amps[i0 | sc | st]

    return apply_gates


_numba_apply_gates = None
if not _env_forces_numpy():
    try:
        _numba_apply_gates = _make_numba_kernel()
    except ImportError:
        _numba_apply_gates = None

USE_NUMBA = _numba_apply_gates is not None


def backend() -> str:
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return "numba" if USE_NUMBA else "numpy"


_EMPTY = np.empty(0, dtype=np.int64)


def apply_gates(amps: np.ndarray, num_qubits: int, kinds: np.ndarray,
                q0: np.ndarray, q1: np.ndarray) -> None:
    """Apply an encoded gate sequence to `amps` in place.

    `kinds`, `q0`, `q1` are int64 arrays; q1 is ignored for single-qubit
    kinds. `amps` must be a contiguous complex128 array of length
    2**num_qubits.
    """
    if kinds.shape[0] == 0:
        return
    if USE_NUMBA:
        _numba_apply_gates(amps, num_qubits, kinds, q0, q1)
    else:
        _numpy_apply_gates(amps, num_qubits, kinds, q0, q1)


def apply_gates_numpy(amps: np.ndarray, num_qubits: int, kinds: np.ndarray,
                      q0: np.ndarray, q1: np.ndarray) -> None:
    """Always use the numpy path (for benchmarks and equivalence tests)."""
    _numpy_apply_gates(amps, num_qubits, kinds, q0, q1)
