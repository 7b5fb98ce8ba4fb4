"""Random-circuit generation (free and cat-doped) and OTOC computation.

The correlator is F(τ) = Tr[W(τ)† V† W(τ) V ρ] with ρ = |0⟩⟨0|,
W(τ) = U_τ† W(0) U_τ, and by default V = X on the last qubit and
W(0) = Z on qubit 0. Blocks U_B compose left (newest applied last);
doping inserts V_m unitaries immediately before their scheduled block.

Per-layer draw rule (a modelling choice, under-determined upstream): every
layer makes n draws, one per wire slot; a single-qubit pick acts on its
slot wire, a two-qubit pick acts on a uniformly random ordered pair of
distinct qubits. RNG streams derive from a counter-based Philox generator,
split per purpose, so runs are bit-reproducible from the recorded seed.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .catstates import build_Vm
from .circuit import Circuit, Gate, KIND_CODE
from .stabilizer import PauliString

GATE_SETS = {
    "nonentangling_clifford": ("H", "S"),
    "clifford": ("H", "S", "CX"),
    "clifford_t": ("H", "S", "CX", "T"),
}

_INV_CODE = np.arange(10, dtype=np.int64)
_INV_CODE[KIND_CODE["S"]] = KIND_CODE["SDG"]
_INV_CODE[KIND_CODE["SDG"]] = KIND_CODE["S"]
_INV_CODE[KIND_CODE["T"]] = KIND_CODE["TDG"]
_INV_CODE[KIND_CODE["TDG"]] = KIND_CODE["T"]


@dataclass(frozen=True)
class Injection:
    block_index: int
    qubits: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class DopeSchedule:
    injections: tuple[Injection, ...] = ()

    def validate(self, n: int, num_blocks: int) -> None:
        for inj in self.injections:
            if not 1 <= inj.block_index <= num_blocks:
                raise ValueError(f"injection block {inj.block_index} out of range")
            if len(set(inj.qubits)) != len(inj.qubits):
                raise ValueError("injection qubits must be distinct")
            if not 2 <= inj.m <= n:
                raise ValueError(f"injection arity {inj.m} out of range")
            if any(not 0 <= q < n for q in inj.qubits):
                raise ValueError("injection qubit index out of range")


@dataclass(frozen=True)
class OtocPoint:
    tau: int
    value: complex


@dataclass(frozen=True)
class OtocSeries:
    n: int
    gate_set: str
    seed: int
    layers_per_block: int
    schedule: DopeSchedule
    points: tuple[OtocPoint, ...]
    v_op: PauliString
    w_op: PauliString


def default_v_w(n: int) -> tuple[PauliString, PauliString]:
    """V = X on the last qubit, W(0) = Z on qubit 0."""
    return PauliString.single(n, n - 1, "X"), PauliString.single(n, 0, "Z")


def block_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, 1))))


def schedule_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, 0))))


def random_block(n: int, gate_set: str, layers: int, rng: np.random.Generator) -> Circuit:
    """One dense block: `layers` layers of n draws from the gate set."""
    if gate_set not in GATE_SETS:
        raise ValueError(f"unknown gate set {gate_set!r}")
    names = GATE_SETS[gate_set]
    if "CX" in names and n < 2:
        raise ValueError("entangling gate sets need at least 2 qubits")
    gates: list[Gate] = []
    for _ in range(layers):
        for slot in range(n):
            name = names[rng.integers(len(names))]
            if name == "CX":
                a = int(rng.integers(n))
                b = int(rng.integers(n - 1))
                if b >= a:
                    b += 1
                gates.append(Gate("CX", (a, b)))
            else:
                gates.append(Gate(name, (slot,)))
    return Circuit(n, tuple(gates))


def _apply_pauli_inplace(amps: np.ndarray, p: PauliString) -> np.ndarray:
    return p.apply(amps)


def _otoc_from_arrays(n: int, kinds, q0, q1, v: PauliString, w0: PauliString) -> complex:
    kinds = np.asarray(kinds, dtype=np.int64)
    q0 = np.asarray(q0, dtype=np.int64)
    q1 = np.asarray(q1, dtype=np.int64)
    inv_kinds = _INV_CODE[kinds[::-1]]
    inv_q0 = np.ascontiguousarray(q0[::-1])
    inv_q1 = np.ascontiguousarray(q1[::-1])
    dim = 1 << n

    def chain(start_with_v: bool) -> np.ndarray:
        amps = np.zeros(dim, dtype=np.complex128)
        amps[0] = 1.0
        if start_with_v:
            amps = v.apply(amps)
        _kernels.apply_gates(amps, n, kinds, q0, q1)
        amps = w0.apply(amps)
        _kernels.apply_gates(amps, n, inv_kinds, inv_q0, inv_q1)
        if not start_with_v:
            amps = v.apply(amps)
        return amps

    a = chain(start_with_v=True)
    b = chain(start_with_v=False)
    return complex(np.vdot(b, a))


def otoc(prefix: Circuit, v: PauliString, w0: PauliString, n: int | None = None) -> complex:
    """F for the given prefix circuit: ⟨0|U†W₀†U V† U†W₀U V|0⟩.

    Requires [V, W(0)] = 0 so that the τ=0 value is exactly 1.
    """
    if n is None:
        n = prefix.num_qubits
    if n != prefix.num_qubits or v.num_qubits != n or w0.num_qubits != n:
        raise ValueError("dimension mismatch between prefix and operators")
    if not v.commutes_with(w0):
        raise ValueError("V and W(0) must commute")
    kinds, q0, q1 = prefix.to_arrays()
    return _otoc_from_arrays(n, kinds, q0, q1, v, w0)


def sample_dope_schedule(
    n: int,
    num_injections: int,
    max_block: int,
    seed: int,
    m_max: int | None = None,
) -> DopeSchedule:
    """Random schedule: uniform block in [1, max_block], uniform m in
    [2, m_max], uniformly ordered distinct qubits; sorted by block."""
    rng = schedule_rng(seed)
    if m_max is None:
        m_max = n
    m_max = min(m_max, n)
    if m_max < 2:
        raise ValueError("need at least 2 qubits to inject")
    blocks = sorted(int(b) for b in rng.integers(1, max_block + 1, size=num_injections))
    injections = []
    for b in blocks:
        m = int(rng.integers(2, m_max + 1))
        qubits = tuple(int(q) for q in rng.permutation(n)[:m])
        injections.append(Injection(block_index=b, qubits=qubits))
    return DopeSchedule(tuple(injections))


def otoc_experiment(
    n: int,
    gate_set: str,
    num_blocks: int,
    layers_per_block: int,
    schedule: DopeSchedule | None = None,
    seed: int = 0,
    v: PauliString | None = None,
    w0: PauliString | None = None,
) -> OtocSeries:
    """Grow the doped random circuit block by block, recording F after each.

    Scheduled V_m insertions are appended immediately before their block.
    F(τ) is recomputed from the full prefix at every τ.
    """
    if schedule is None:
        schedule = DopeSchedule()
    schedule.validate(n, num_blocks)
    if v is None or w0 is None:
        dv, dw = default_v_w(n)
        v = v or dv
        w0 = w0 or dw
    if not v.commutes_with(w0):
        raise ValueError("V and W(0) must commute")
    rng = block_rng(seed)
    kinds: list[int] = []
    q0: list[int] = []
    q1: list[int] = []

    def extend(circ: Circuit, qubit_map=None) -> None:
        for g in circ.gates:
            qs = g.qubits if qubit_map is None else tuple(qubit_map[q] for q in g.qubits)
            kinds.append(KIND_CODE[g.kind])
            q0.append(qs[0])
            q1.append(qs[1] if len(qs) == 2 else 0)

    by_block: dict[int, list[Injection]] = {}
    for inj in schedule.injections:
        by_block.setdefault(inj.block_index, []).append(inj)

    points = []
    for tau in range(1, num_blocks + 1):
        for inj in by_block.get(tau, ()):
            extend(build_Vm(inj.m), qubit_map=inj.qubits)
        extend(random_block(n, gate_set, layers_per_block, rng))
        value = _otoc_from_arrays(n, kinds, q0, q1, v, w0)
        points.append(OtocPoint(tau=tau, value=value))
    return OtocSeries(
        n=n,
        gate_set=gate_set,
        seed=seed,
        layers_per_block=layers_per_block,
        schedule=schedule,
        points=tuple(points),
        v_op=v,
        w_op=w0,
    )


def series_to_json_dict(series: OtocSeries) -> dict:
    return {
        "n": series.n,
        "gate_set": series.gate_set,
        "seed": series.seed,
        "layers_per_block": series.layers_per_block,
        "schedule": [
            {"block": inj.block_index, "qubits": list(inj.qubits)}
            for inj in series.schedule.injections
        ],
        "points": [
            {"tau": p.tau, "re": p.value.real, "im": p.value.imag}
            for p in series.points
        ],
    }


def write_series_json(series: OtocSeries, path: str | Path) -> None:
    Path(path).write_text(json.dumps(series_to_json_dict(series), indent=2) + "\n")


def write_series_csv(series: OtocSeries, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau", "re", "im"])
        for p in series.points:
            writer.writerow([p.tau, repr(p.value.real), repr(p.value.imag)])
