"""Meyer-Wallach multipartite entanglement monotone."""
from __future__ import annotations

from dataclasses import dataclass

from .statevector import PureState, partial_trace_single


@dataclass(frozen=True)
class MwReport:
    value: float
    purities: tuple[float, ...]


def meyer_wallach(state: PureState) -> MwReport:
    """E = 2(1 - mean_k Tr ρ_k²) over the single-qubit reduced states.

    0 on product states, 1 on balanced GHZ states; invariant under local
    unitaries. Raises for single-qubit input.
    """
    m = state.num_qubits
    if m < 2:
        raise ValueError("Meyer-Wallach needs at least 2 qubits")
    purities = tuple(
        partial_trace_single(state, k).purity() for k in range(m)
    )
    value = 2.0 * (1.0 - sum(purities) / m)
    return MwReport(value=value, purities=purities)
