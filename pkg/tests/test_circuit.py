import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catinject.circuit import (
    Circuit,
    CircuitParseError,
    Gate,
    count_gates,
    invert_circuit,
    parse_circuit,
    parse_qasm,
    serialize_circuit,
)
from catinject.statevector import PureState, fidelity_up_to_phase, random_state, simulate


class TestGate:
    def test_arity_checks(self):
        with pytest.raises(ValueError):
            Gate("H", (0, 1))
        with pytest.raises(ValueError):
            Gate("CX", (0,))
        with pytest.raises(ValueError):
            Gate("CX", (1, 1))
        with pytest.raises(ValueError):
            Gate("Q", (0,))

    def test_cz_pair_sorted(self):
        assert Gate("CZ", (3, 1)).qubits == (1, 3)
        assert Gate("CX", (3, 1)).qubits == (3, 1)


class TestParse:
    def test_basic(self):
        c = parse_circuit("qubits 1\nH 0\nT 0")
        assert c.num_qubits == 1
        assert [g.kind for g in c.gates] == ["H", "T"]

    def test_cx(self):
        c = parse_circuit("qubits 2\nCX 1 0")
        assert c.gates[0] == Gate("CX", (1, 0))

    def test_repeated_qubit_rejected(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 2\nCX 1 1")

    def test_unknown_mnemonic(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 1\nRX 0")

    def test_bad_arity(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 2\nH 0 1")

    def test_index_out_of_range(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 2\nH 2")

    def test_missing_header(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("H 0")

    def test_comments_and_case(self):
        c = parse_circuit("# a comment\nqubits 2 # trailing\n h 0\nCx 0 1 # note\n")
        assert [g.kind for g in c.gates] == ["H", "CX"]


def gate_strategy(n):
    single = st.tuples(
        st.sampled_from(["H", "S", "SDG", "T", "TDG", "X", "Y", "Z"]),
        st.integers(0, n - 1),
    ).map(lambda t: Gate(t[0], (t[1],)))
    double = st.tuples(
        st.sampled_from(["CX", "CZ"]),
        st.integers(0, n - 1),
        st.integers(0, n - 2),
    ).map(lambda t: Gate(t[0], (t[1], t[2] + 1 if t[2] >= t[1] else t[2])))
    return st.one_of(single, double)


@given(st.integers(2, 6).flatmap(
    lambda n: st.lists(gate_strategy(n), max_size=40).map(
        lambda gs: Circuit(n, tuple(gs))
    )
))
@settings(max_examples=80, deadline=None)
def test_parse_serialize_round_trip(circ):
    assert parse_circuit(serialize_circuit(circ)) == circ


@given(st.integers(2, 5).flatmap(
    lambda n: st.lists(gate_strategy(n), max_size=30).map(
        lambda gs: Circuit(n, tuple(gs))
    )
))
@settings(max_examples=60, deadline=None)
def test_invert_is_involution(circ):
    assert invert_circuit(invert_circuit(circ)) == circ


class TestInvert:
    def test_s_becomes_sdg(self):
        c = Circuit(1, (Gate("H", (0,)), Gate("S", (0,))))
        assert invert_circuit(c).gates == (Gate("SDG", (0,)), Gate("H", (0,)))

    def test_cx_self_inverse(self):
        c = Circuit(2, (Gate("CX", (0, 1)),))
        assert invert_circuit(c) == c

    def test_random_circuit_round_trips_state(self, rng):
        gates = []
        for _ in range(100):
            kind = ("H", "S", "T", "TDG", "CX")[rng.integers(5)]
            if kind == "CX":
                a = int(rng.integers(4))
                b = int(rng.integers(3))
                b += b >= a
                gates.append(Gate(kind, (a, b)))
            else:
                gates.append(Gate(kind, (int(rng.integers(4)),)))
        circ = Circuit(4, tuple(gates))
        state = random_state(4, rng)
        out = simulate(invert_circuit(circ), simulate(circ, state))
        assert fidelity_up_to_phase(out, state) > 1 - 1e-9


class TestSimulate:
    def test_empty_circuit_identity(self, rng):
        state = random_state(3, rng)
        out = simulate(Circuit(3, ()), state)
        np.testing.assert_allclose(out.amplitudes, state.amplitudes)

    def test_v2_on_plus_plus(self):
        from catinject.catstates import build_Vm

        out = simulate(build_Vm(2), PureState.plus(2))
        np.testing.assert_allclose(
            out.amplitudes, np.array([1, 1, 1, 1j]) / 2, atol=1e-12
        )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            simulate(Circuit(2, ()), PureState.plus(3))


class TestCounts:
    def test_empty(self):
        counts = count_gates(Circuit(1, ()))
        assert (counts.t_count, counts.cnot_count, counts.cz_count, counts.total) == (0, 0, 0, 0)

    def test_v3_counts(self):
        from catinject.catstates import build_Vm

        counts = count_gates(build_Vm(3))
        assert counts.cnot_count == 4
        assert counts.t_count == 4  # 3 T + 1 TDG

    @pytest.mark.parametrize("m", range(2, 9))
    def test_vm_closed_forms(self, m):
        from catinject.catstates import build_Vm

        counts = count_gates(build_Vm(m))
        assert counts.t_count == m + 1
        assert counts.cnot_count == 2 * (m - 1)


class TestQasm:
    def test_basic_import(self):
        text = """OPENQASM 2.0;
include "qelib1.inc";
// comment
qreg q[3];
h q[0];
cx q[0],q[1];
tdg q[2];
cz q[2],q[0];
"""
        c = parse_qasm(text)
        assert c.num_qubits == 3
        assert [g.kind for g in c.gates] == ["H", "CX", "TDG", "CZ"]
        assert c.gates[3].qubits == (0, 2)  # CZ canonicalized

    def test_unsupported_gate_rejected(self):
        with pytest.raises(CircuitParseError):
            parse_qasm("qreg q[1];\nrx(0.5) q[0];")

    def test_measure_rejected(self):
        with pytest.raises(CircuitParseError):
            parse_qasm("qreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];")

    def test_block_comment_ignored(self):
        c = parse_qasm("/* hello\nworld */ qreg q[1]; s q[0];")
        assert [g.kind for g in c.gates] == ["S"]

    def test_load_by_extension(self, tmp_path):
        from catinject.circuit import load_circuit

        native = tmp_path / "a.circ"
        native.write_text("qubits 1\nH 0\n")
        qasm = tmp_path / "a.qasm"
        qasm.write_text("qreg q[1];\nh q[0];\n")
        assert load_circuit(native) == load_circuit(qasm)
