"""Enumeration of the two-qubit cat-injectable circuit variants and a
simplified pattern matcher that locates them inside host circuits.

A match may interleave host gates between pattern gates only when those
gates act on qubits disjoint from the matched pair; every reported match is
re-verified by dense unitary equality of the extracted subsequence. Full
commutation-aware matching is intentionally out of scope.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .catstates import build_Vm, build_Vm_t_inside
from .circuit import Circuit, Gate
from .statevector import to_unitary

_SINGLE_DIAG = {"T", "TDG"}


@dataclass(frozen=True)
class Variant:
    id: int
    gates: Circuit
    target: str  # "v2" or "v2_t_inside"


@dataclass(frozen=True)
class Match:
    variant_id: int
    positions: tuple[int, ...]
    qubit_map: tuple[int, int]


@dataclass(frozen=True)
class MatchCostEstimate:
    g_c: int
    g_p: int
    n_c: int
    n_p: int
    value: int


def _seq_key(seq: tuple[Gate, ...]) -> tuple:
    return tuple((g.kind, g.qubits) for g in seq)


def _relabel(seq: tuple[Gate, ...]) -> tuple[Gate, ...]:
    return tuple(Gate(g.kind, tuple(1 - q for q in g.qubits)) for g in seq)


def _commute(a: Gate, b: Gate) -> bool:
    if len(a.qubits) == 1 and len(b.qubits) == 1:
        return True  # only diagonal single-qubit gates occur here
    if len(a.qubits) == 1:
        a, b = b, a
    if len(b.qubits) == 1:
        control = a.qubits[0]
        return b.qubits[0] == control or b.qubits[0] not in a.qubits
    return a == b


def _adjacent_swaps(seq: tuple[Gate, ...]):
    for i in range(len(seq) - 1):
        a, b = seq[i], seq[i + 1]
        if a != b and _commute(a, b):
            yield seq[:i] + (b, a) + seq[i + 2:]


def _cx_positions(seq: tuple[Gate, ...]) -> tuple[int, int]:
    pos = [i for i, g in enumerate(seq) if g.kind == "CX"]
    assert len(pos) == 2
    return pos[0], pos[1]


def _block_jumps(seq: tuple[Gate, ...]):
    # a single-qubit gate adjacent to the full CX..CX block hops across it
    i, j = _cx_positions(seq)
    if i > 0 and len(seq[i - 1].qubits) == 1:
        g = seq[i - 1]
        yield seq[: i - 1] + seq[i: j + 1] + (g,) + seq[j + 1:]
    if j + 1 < len(seq) and len(seq[j + 1].qubits) == 1:
        g = seq[j + 1]
        yield seq[:i] + (g,) + seq[i: j + 1] + seq[j + 2:]


def _inner_toggle(seq: tuple[Gate, ...]):
    i, j = _cx_positions(seq)
    target = seq[i].qubits[1]
    for p in range(i + 1, j):
        g = seq[p]
        if g.qubits == (target,) and g.kind in _SINGLE_DIAG:
            flipped = Gate("T" if g.kind == "TDG" else "TDG", g.qubits)
            yield seq[:p] + (flipped,) + seq[p + 1:]


def _w_flip(seq: tuple[Gate, ...]):
    # CX(a,b) G(b) CX(a,b) -> CX(b,a) G(a) CX(b,a), only for a bare block
    i, j = _cx_positions(seq)
    if j - i != 2:
        return
    inner = seq[i + 1]
    a, b = seq[i].qubits
    if inner.qubits != (b,):
        return
    yield (
        seq[:i]
        + (Gate("CX", (b, a)), Gate(inner.kind, (a,)), Gate("CX", (b, a)))
        + seq[j + 1:]
    )


def _phase_equal(u: np.ndarray, target: np.ndarray) -> bool:
    tr = np.trace(target.conj().T @ u)
    return abs(abs(tr) - u.shape[0]) < 1e-9


@lru_cache(maxsize=1)
def _variants() -> tuple[Variant, ...]:
    base = tuple(build_Vm(2).gates)
    seen = {_seq_key(base): base}
    frontier = [base]
    while frontier:
        seq = frontier.pop()
        moves = [
            _relabel(seq),
            *_adjacent_swaps(seq),
            *_block_jumps(seq),
            *_inner_toggle(seq),
            *_w_flip(seq),
        ]
        for new in moves:
            key = _seq_key(new)
            if key not in seen:
                seen[key] = new
                frontier.append(new)
    v2 = to_unitary(build_Vm(2))
    v2t = to_unitary(build_Vm_t_inside(2))
    variants = []
    for key in sorted(seen):
        seq = seen[key]
        circ = Circuit(2, seq)
        u = to_unitary(circ)
        if _phase_equal(u, v2):
            target = "v2"
        elif _phase_equal(u, v2t):
            target = "v2_t_inside"
        else:
            raise AssertionError(f"variant closure produced a foreign unitary: {seq}")
        variants.append((circ, target))
    return tuple(
        Variant(id=i, gates=circ, target=target)
        for i, (circ, target) in enumerate(variants)
    )


def enumerate_v2_variants() -> list[Variant]:
    """Closure of the base V_2 sequence under the structural moves.

    Moves: qubit relabelling, adjacent commuting transpositions, hopping an
    outer T-type gate across the CNOT block, toggling the inner gate between
    TDG and T, and flipping the block orientation. Every element is verified
    to equal V_2 or its T-inside counterpart up to global phase.
    """
    return list(_variants())


def variant_count_formula(m: int) -> int:
    """Closed-form (claimed lower-bound) structure count 3·2^{2m+1}(3m-5)."""
    return 3 * 2 ** (2 * m + 1) * (3 * m - 5)


def _try_match(host: Circuit, variant: Variant, start: int,
               consumed: set[int]) -> Match | None:
    pattern = variant.gates.gates
    mapping: dict[int, int] = {}
    positions: list[int] = []
    skipped: list[int] = []
    vi = 0
    pos = start
    while pos < len(host.gates) and vi < len(pattern):
        g = host.gates[pos]
        if pos in consumed:
            skipped.append(pos)
            pos += 1
            continue
        pg = pattern[vi]
        trial = None
        if g.kind == pg.kind and len(g.qubits) == len(pg.qubits):
            trial = dict(mapping)
            ok = True
            for pq, hq in zip(pg.qubits, g.qubits):
                if trial.get(pq, hq) != hq or hq in (
                    trial[q] for q in trial if q != pq
                ):
                    ok = False
                    break
                trial[pq] = hq
            if not ok:
                trial = None
        if trial is not None:
            mapping = trial
            positions.append(pos)
            vi += 1
        else:
            if positions:
                skipped.append(pos)
            else:
                return None  # first gate must match at `start`
        pos += 1
    if vi < len(pattern):
        return None
    pair = (mapping[0], mapping[1])
    for sp in skipped:
        if sp < positions[0] or sp > positions[-1]:
            continue
        if any(q in pair for q in host.gates[sp].qubits):
            return None
    return Match(variant_id=variant.id, positions=tuple(positions), qubit_map=pair)


def _verify_match(host: Circuit, match: Match, variant: Variant) -> bool:
    back = {h: p for p, h in enumerate(match.qubit_map)}
    gates = tuple(
        Gate(host.gates[i].kind, tuple(back[q] for q in host.gates[i].qubits))
        for i in match.positions
    )
    return _phase_equal(to_unitary(Circuit(2, gates)), to_unitary(variant.gates))


def match_patterns(host: Circuit, variants: list[Variant] | None = None) -> list[Match]:
    """Greedy left-to-right, first-fit search for non-overlapping variants.

    Host gates may interleave inside a match only on qubits disjoint from
    the matched pair. Every returned match re-simulates to its variant's
    unitary (asserted).
    """
    if variants is None:
        variants = enumerate_v2_variants()
    by_id = {v.id: v for v in variants}
    consumed: set[int] = set()
    matches: list[Match] = []
    for start in range(len(host.gates)):
        if start in consumed:
            continue
        for variant in variants:
            m = _try_match(host, variant, start, consumed)
            if m is not None:
                assert _verify_match(host, m, by_id[m.variant_id])
                matches.append(m)
                consumed.update(m.positions)
                break
    return matches


def estimate_match_cost(host: Circuit, pattern: Circuit) -> MatchCostEstimate:
    """Published cost scaling g_C^{g_P+3} · g_P^{g_P+4} · n_C^{n_P-1}."""
    g_c, g_p = len(host.gates), len(pattern.gates)
    n_c, n_p = host.num_qubits, pattern.num_qubits
    value = g_c ** (g_p + 3) * g_p ** (g_p + 4) * n_c ** (n_p - 1)
    return MatchCostEstimate(g_c=g_c, g_p=g_p, n_c=n_c, n_p=n_p, value=value)


def plant_variants(
    host: Circuit,
    count: int,
    rng: np.random.Generator,
    variants: list[Variant] | None = None,
) -> tuple[Circuit, list[Match]]:
    """Insert `count` variants contiguously at random offsets.

    Returns the new circuit and the ground-truth matches (positions in the
    planted circuit). Requires a host with at least 2 qubits.
    """
    if host.num_qubits < 2:
        raise ValueError("host needs at least 2 qubits")
    if variants is None:
        variants = enumerate_v2_variants()
    offsets = sorted(int(v) for v in rng.integers(0, len(host.gates) + 1, size=count))
    gates = list(host.gates)
    truth: list[Match] = []
    shift = 0
    for off in offsets:
        variant = variants[int(rng.integers(len(variants)))]
        a = int(rng.integers(host.num_qubits))
        b = int(rng.integers(host.num_qubits - 1))
        if b >= a:
            b += 1
        qmap = (a, b)
        insert_at = off + shift
        block = [
            Gate(g.kind, tuple(qmap[q] for q in g.qubits))
            for g in variant.gates.gates
        ]
        gates[insert_at:insert_at] = block
        truth.append(
            Match(
                variant_id=variant.id,
                positions=tuple(range(insert_at, insert_at + len(block))),
                qubit_map=qmap,
            )
        )
        shift += len(block)
    return Circuit(host.num_qubits, tuple(gates)), truth


def reported_benchmark_counts() -> list[dict]:
    """Externally reported V_2 counts for published benchmark circuits.

    Shipped as data for documentation; this package does not reproduce the
    counts (the optimized benchmark circuits come from an external
    toolchain).
    """
    text = resources.files("catinject").joinpath("data/reported_v2_counts.json").read_text()
    return json.loads(text)["circuits"]
