import numpy as np
import pytest

from catinject.circuit import Circuit, Gate
from catinject.statevector import (
    DensityMatrix,
    PureState,
    apply_gate,
    fidelity_up_to_phase,
    inner,
    measure_qubit,
    partial_trace_single,
    random_state,
    simulate,
    tensor,
    to_unitary,
)

T_PHASE = np.exp(1j * np.pi / 4)


def ket(*amps):
    a = np.array(amps, dtype=complex)
    n = len(a).bit_length() - 1
    return PureState(n, a / np.linalg.norm(a))


class TestPureState:
    def test_validates_length(self):
        with pytest.raises(ValueError):
            PureState(2, np.array([1.0, 0.0]))

    def test_validates_norm(self):
        with pytest.raises(ValueError):
            PureState(1, np.array([1.0, 1.0]))

    def test_amplitudes_readonly(self):
        s = PureState.computational(2)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0.5


class TestApplyGate:
    def test_h_on_zero(self):
        out = apply_gate(PureState.computational(1), Gate("H", (0,)))
        np.testing.assert_allclose(out.amplitudes, [1 / np.sqrt(2)] * 2, atol=1e-15)

    def test_t_on_plus_gives_t_state(self):
        # |T> = (|0> + e^{i pi/4}|1>)/sqrt(2)
        out = apply_gate(PureState.plus(1), Gate("T", (0,)))
        np.testing.assert_allclose(
            out.amplitudes, np.array([1, T_PHASE]) / np.sqrt(2), atol=1e-15
        )

    def test_cx_truth_table(self):
        out = apply_gate(PureState.computational(2, 0b10), Gate("CX", (1, 0)))
        # control = qubit 1 (value 0) -> no flip
        np.testing.assert_allclose(out.amplitudes[0b10], 1.0)
        out = apply_gate(PureState.computational(2, 0b01), Gate("CX", (1, 0)))
        np.testing.assert_allclose(out.amplitudes[0b11], 1.0)

    def test_out_of_range_qubit(self):
        with pytest.raises(ValueError):
            apply_gate(PureState.computational(1), Gate("H", (1,)))

    def test_norm_preserved_random_sequence(self, rng):
        state = random_state(6, rng)
        for _ in range(200):
            q = int(rng.integers(6))
            kind = ("H", "S", "T", "X", "Y", "Z")[rng.integers(6)]
            state = apply_gate(state, Gate(kind, (q,)))
        assert abs(np.linalg.norm(state.amplitudes) - 1) < 1e-12

    def test_unitary_round_trip(self, rng):
        from catinject.circuit import invert_circuit

        state = random_state(5, rng)
        gates = []
        for _ in range(150):
            kind = ("H", "S", "SDG", "T", "TDG", "CX", "CZ")[rng.integers(7)]
            if kind in ("CX", "CZ"):
                a = int(rng.integers(5))
                b = int(rng.integers(4))
                b += b >= a
                gates.append(Gate(kind, (a, b)))
            else:
                gates.append(Gate(kind, (int(rng.integers(5)),)))
        circ = Circuit(5, tuple(gates))
        back = simulate(invert_circuit(circ), simulate(circ, state))
        assert fidelity_up_to_phase(back, state) > 1 - 1e-10
        np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-10)


class TestInner:
    def test_orthonormal_basis(self):
        assert inner(PureState.computational(1, 0), PureState.computational(1, 0)) == 1

    def test_t_perp(self):
        t = ket(1, T_PHASE)
        t_perp = ket(1, -T_PHASE)
        assert abs(inner(t, t_perp)) < 1e-15

    def test_plus_t_overlap(self):
        # direct 2-vector dot product: (1 + e^{-i pi/4})/2 conjugated side
        val = inner(PureState.plus(1), ket(1, T_PHASE))
        np.testing.assert_allclose(val, (1 + T_PHASE) / 2, atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            inner(PureState.plus(1), PureState.plus(2))


class TestFidelity:
    def test_global_phase_ignored(self):
        s = PureState.computational(1)
        s2 = PureState(1, np.exp(1j * 0.7) * s.amplitudes)
        assert fidelity_up_to_phase(s, s2) == pytest.approx(1.0, abs=1e-15)

    def test_orthogonal(self):
        assert fidelity_up_to_phase(
            PureState.computational(1, 0), PureState.computational(1, 1)
        ) == pytest.approx(0.0, abs=1e-15)


class TestMeasureQubit:
    def test_z_measure_product(self):
        state = tensor(PureState.computational(1, 0), PureState.plus(1))
        prob, post = measure_qubit(state, 0, "Z", +1)
        assert prob == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(post.amplitudes, PureState.plus(1).amplitudes)

    def test_zero_probability_raises(self):
        state = tensor(PureState.computational(1, 0), PureState.plus(1))
        with pytest.raises(ValueError):
            measure_qubit(state, 0, "Z", -1)

    def test_outcome_probabilities_sum_to_one(self, rng):
        state = random_state(4, rng)
        for basis in ("X", "Y", "Z"):
            p_plus, _ = measure_qubit(state, 2, basis, +1)
            p_minus, _ = measure_qubit(state, 2, basis, -1)
            assert p_plus + p_minus == pytest.approx(1.0, abs=1e-10)

    def test_y_measure_probabilities_against_projection_oracle(self, rng):
        # oracle: explicit 8-component projector norms
        state = random_state(3, rng)
        amps = state.amplitudes.reshape(2, 2, 2)
        plus_i = np.array([1, 1j]) / np.sqrt(2)
        proj = np.tensordot(amps, plus_i.conj(), axes=([2], [0]))
        expected = float(np.sum(np.abs(proj) ** 2))
        prob, post = measure_qubit(state, 2, "Y", +1)
        assert prob == pytest.approx(expected, abs=1e-12)
        np.testing.assert_allclose(
            post.amplitudes, proj.reshape(-1) / np.sqrt(expected), atol=1e-12
        )


class TestPartialTrace:
    def test_bell_state_maximally_mixed(self):
        bell = ket(1, 0, 0, 1)
        for q in (0, 1):
            rho = partial_trace_single(bell, q)
            np.testing.assert_allclose(rho.entries, np.eye(2) / 2, atol=1e-12)

    def test_product_state_pure(self):
        state = tensor(PureState.computational(1, 0), PureState.plus(1))
        rho = partial_trace_single(state, 1)
        np.testing.assert_allclose(rho.entries, np.full((2, 2), 0.5), atol=1e-12)
        assert rho.purity() == pytest.approx(1.0, abs=1e-10)

    def test_random_product_state_purity_one(self, rng):
        state = tensor(*(random_state(1, rng) for _ in range(4)))
        for q in range(4):
            assert partial_trace_single(state, q).purity() == pytest.approx(1.0, abs=1e-10)


class TestDensityMatrix:
    def test_from_pure(self, rng):
        state = random_state(2, rng)
        rho = DensityMatrix.from_pure(state)
        assert rho.purity() == pytest.approx(1.0, abs=1e-10)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            DensityMatrix(1, np.array([[0.5, 1], [0, 0.5]], dtype=complex))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            DensityMatrix(1, np.array([[1.5, 0], [0, -0.5]], dtype=complex))


def test_to_unitary_matches_simulation(rng):
    circ = Circuit(2, (Gate("H", (0,)), Gate("CX", (0, 1)), Gate("T", (1,))))
    u = to_unitary(circ)
    state = random_state(2, rng)
    np.testing.assert_allclose(
        u @ state.amplitudes, simulate(circ, state).amplitudes, atol=1e-12
    )
    np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)
