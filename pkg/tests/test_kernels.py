"""Numba and numpy kernel paths must agree gate-for-gate."""
import numpy as np
import pytest

from catinject import _kernels
from catinject.circuit import GATE_KINDS, KIND_CODE


def random_gate_arrays(n, count, rng):
    kinds = np.empty(count, dtype=np.int64)
    q0 = np.empty(count, dtype=np.int64)
    q1 = np.zeros(count, dtype=np.int64)
    for i in range(count):
        name = GATE_KINDS[rng.integers(len(GATE_KINDS))]
        kinds[i] = KIND_CODE[name]
        if name in ("CX", "CZ"):
            a = int(rng.integers(n))
            b = int(rng.integers(n - 1))
            if b >= a:
                b += 1
            q0[i], q1[i] = a, b
        else:
            q0[i] = rng.integers(n)
    return kinds, q0, q1


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_paths_agree(n, rng):
    count = 0 if n == 1 else 300
    kinds, q0, q1 = random_gate_arrays(n, 300, rng)
    if n == 1:  # single-qubit register: drop two-qubit draws
        keep = kinds < KIND_CODE["CX"]
        kinds, q0, q1 = kinds[keep], q0[keep], q1[keep]
    dim = 1 << n
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    a = v.copy()
    b = v.copy()
    _kernels._numpy_apply_gates(a, n, kinds, q0, q1)
    if _kernels.USE_NUMBA:
        _kernels._numba_apply_gates(b, n, kinds, q0, q1)
    else:
        _kernels.apply_gates(b, n, kinds, q0, q1)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_dispatch_matches_backend_flag():
    assert _kernels.backend() in ("numba", "numpy")
    assert (_kernels.backend() == "numba") == _kernels.USE_NUMBA


def test_norm_preserved_over_many_gates(rng):
    n = 7
    kinds, q0, q1 = random_gate_arrays(n, 5000, rng)
    v = np.zeros(1 << n, dtype=np.complex128)
    v[0] = 1.0
    _kernels.apply_gates(v, n, kinds, q0, q1)
    assert abs(np.linalg.norm(v) - 1.0) < 1e-10


def test_single_gate_matrices_match_dense(rng):
    # every kind against its dense matrix on a random 3-qubit state
    from catinject.circuit import GATE_MATRICES

    n = 3
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    v /= np.linalg.norm(v)
    eye = np.eye(2, dtype=complex)
    for name, code in KIND_CODE.items():
        if name in ("CX", "CZ"):
            continue
        for q in range(n):
            got = v.copy()
            _kernels.apply_gates(
                got, n,
                np.array([code], dtype=np.int64),
                np.array([q], dtype=np.int64),
                np.array([0], dtype=np.int64),
            )
            ops = [eye] * n
            ops[q] = GATE_MATRICES[name]
            dense = ops[0]
            for o in ops[1:]:
                dense = np.kron(dense, o)
            np.testing.assert_allclose(got, dense @ v, atol=1e-12)


def test_two_qubit_gates_match_dense(rng):
    n = 3
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    v /= np.linalg.norm(v)
    cx = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                  dtype=complex)
    cz = np.diag([1, 1, 1, -1]).astype(complex)
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                    dtype=complex)
    eye = np.eye(2, dtype=complex)
    cases = {
        ("CX", (0, 1)): np.kron(cx, eye),
        ("CX", (1, 2)): np.kron(eye, cx),
        ("CX", (1, 0)): np.kron(swap @ cx @ swap, eye),
        ("CZ", (0, 2)): np.diag([(-1) ** (((i >> 2) & 1) * (i & 1)) for i in range(8)]).astype(complex),
        ("CX", (0, 2)): None,  # built below
    }
    u02 = np.zeros((8, 8), dtype=complex)
    for i in range(8):
        j = i ^ 1 if (i >> 2) & 1 else i
        u02[j, i] = 1
    cases[("CX", (0, 2))] = u02
    from catinject.circuit import KIND_CODE as KC

    for (name, (a, b)), dense in cases.items():
        got = v.copy()
        _kernels.apply_gates(
            got, n,
            np.array([KC[name]], dtype=np.int64),
            np.array([a], dtype=np.int64),
            np.array([b], dtype=np.int64),
        )
        np.testing.assert_allclose(got, dense @ v, atol=1e-12, err_msg=f"{name} {a},{b}")
