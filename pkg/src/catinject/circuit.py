"""Gate and circuit model: parsing, serialization, inversion, gate counting.

Native text format: first non-comment line ``qubits N``, then one gate per
line (mnemonic + space-separated qubit indices), ``#`` starts a comment,
mnemonics case-insensitive. A restricted OpenQASM-2 importer handles the
lowercase gates h,s,sdg,t,tdg,x,y,z,cx,cz on a single qreg.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels

GATE_KINDS = ("H", "S", "SDG", "T", "TDG", "X", "Y", "Z", "CX", "CZ")
KIND_CODE = {name: code for code, name in enumerate(GATE_KINDS)}
TWO_QUBIT_KINDS = ("CX", "CZ")
_INVERSE_KIND = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}


class CircuitParseError(ValueError):
    """Raised for malformed circuit text (native or QASM subset)."""


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind not in KIND_CODE:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.kind} requires two distinct qubits")
        if self.kind == "CZ" and self.qubits[0] > self.qubits[1]:
            # CZ is symmetric; keep the pair sorted so counting and
            # pattern matching see one canonical form.
            object.__setattr__(self, "qubits", (self.qubits[1], self.qubits[0]))

    def inverse(self) -> "Gate":
        return Gate(_INVERSE_KIND.get(self.kind, self.kind), self.qubits)

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.qubits)])


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise ValueError(
                    f"gate {g} out of range for {self.num_qubits} qubits"
                )

    def __len__(self) -> int:
        return len(self.gates)

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Encode as (kinds, q0, q1) int64 arrays for the kernels."""
        m = len(self.gates)
        kinds = np.empty(m, dtype=np.int64)
        q0 = np.zeros(m, dtype=np.int64)
        q1 = np.zeros(m, dtype=np.int64)
        for i, g in enumerate(self.gates):
            kinds[i] = KIND_CODE[g.kind]
            q0[i] = g.qubits[0]
            if len(g.qubits) == 2:
                q1[i] = g.qubits[1]
        return kinds, q0, q1


@dataclass(frozen=True)
class GateCounts:
    t_count: int
    cnot_count: int
    cz_count: int
    total: int


def count_gates(circuit: Circuit) -> GateCounts:
    """Tally T-type, CX and CZ gates (t_count includes TDG)."""
    t = sum(1 for g in circuit.gates if g.kind in ("T", "TDG"))
    cx = sum(1 for g in circuit.gates if g.kind == "CX")
    cz = sum(1 for g in circuit.gates if g.kind == "CZ")
    return GateCounts(t_count=t, cnot_count=cx, cz_count=cz, total=len(circuit.gates))


def invert_circuit(circuit: Circuit) -> Circuit:
    """Reverse the gate order and invert each gate (S<->SDG, T<->TDG)."""
    return Circuit(circuit.num_qubits, tuple(g.inverse() for g in reversed(circuit.gates)))


def parse_circuit(text: str) -> Circuit:
    """Parse the native circuit format; inverse of serialize_circuit."""
    num_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if num_qubits is None:
            if parts[0].lower() != "qubits" or len(parts) != 2:
                raise CircuitParseError(
                    f"line {lineno}: expected header 'qubits N', got {line!r}"
                )
            try:
                num_qubits = int(parts[1])
            except ValueError:
                raise CircuitParseError(f"line {lineno}: bad qubit count {parts[1]!r}")
            if num_qubits < 1:
                raise CircuitParseError(f"line {lineno}: qubit count must be >= 1")
            continue
        kind = parts[0].upper()
        if kind not in KIND_CODE:
            raise CircuitParseError(f"line {lineno}: unknown mnemonic {parts[0]!r}")
        try:
            qubits = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise CircuitParseError(f"line {lineno}: bad qubit index in {line!r}")
        try:
            gate = Gate(kind, qubits)
        except ValueError as exc:
            raise CircuitParseError(f"line {lineno}: {exc}")
        if max(gate.qubits) >= num_qubits:
            raise CircuitParseError(
                f"line {lineno}: qubit index out of range for qubits {num_qubits}"
            )
        gates.append(gate)
    if num_qubits is None:
        raise CircuitParseError("missing 'qubits N' header")
    return Circuit(num_qubits, tuple(gates))


def serialize_circuit(circuit: Circuit) -> str:
    """Render the native circuit format; round-trips through parse_circuit."""
    lines = [f"qubits {circuit.num_qubits}"]
    lines.extend(str(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


_QASM_GATES = {"h", "s", "sdg", "t", "tdg", "x", "y", "z", "cx", "cz"}


def parse_qasm(text: str) -> Circuit:
    """Restricted OpenQASM-2 importer: one qreg, gates from the fixed alphabet.

    Comments (// and /* */) and include lines are ignored; any other
    statement is a parse error.
    """
    import re

    text = re.sub(r"/\*.*?\*/", " ", text, flags=re.DOTALL)
    reg_name = None
    num_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        for stmt in filter(None, (s.strip() for s in line.split(";"))):
            if stmt.startswith("OPENQASM") or stmt.startswith("include"):
                continue
            m = re.fullmatch(r"qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]", stmt)
            if m:
                if num_qubits is not None:
                    raise CircuitParseError(f"line {lineno}: multiple qreg declarations")
                reg_name, num_qubits = m.group(1), int(m.group(2))
                continue
            m = re.fullmatch(
                r"([a-z]+)\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]"
                r"(?:\s*,\s*([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\])?",
                stmt,
            )
            if not m:
                raise CircuitParseError(f"line {lineno}: unsupported statement {stmt!r}")
            name = m.group(1)
            if name not in _QASM_GATES:
                raise CircuitParseError(f"line {lineno}: unsupported gate {name!r}")
            if num_qubits is None:
                raise CircuitParseError(f"line {lineno}: gate before qreg declaration")
            regs = [m.group(2)]
            qubits = [int(m.group(3))]
            if m.group(4) is not None:
                regs.append(m.group(4))
                qubits.append(int(m.group(5)))
            if any(r != reg_name for r in regs):
                raise CircuitParseError(f"line {lineno}: unknown register in {stmt!r}")
            expected = 2 if name in ("cx", "cz") else 1
            if len(qubits) != expected:
                raise CircuitParseError(f"line {lineno}: bad arity for {name!r}")
            if any(q >= num_qubits for q in qubits):
                raise CircuitParseError(f"line {lineno}: qubit index out of range")
            try:
                gates.append(Gate(name.upper(), tuple(qubits)))
            except ValueError as exc:
                raise CircuitParseError(f"line {lineno}: {exc}")
    if num_qubits is None:
        raise CircuitParseError("missing qreg declaration")
    return Circuit(num_qubits, tuple(gates))


def load_circuit(path: str | Path) -> Circuit:
    """Load a circuit file; .qasm selects the OpenQASM-2 subset importer."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".qasm":
        return parse_qasm(text)
    return parse_circuit(text)


# Dense single-qubit matrices, used for unitary construction and matching.
_EIPI4 = _kernels._EIPI4
GATE_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "T": np.diag([1, _EIPI4]).astype(complex),
    "TDG": np.diag([1, _EIPI4.conjugate()]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}
