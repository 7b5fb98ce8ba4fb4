"""catinject: cat-state injection toolkit.

Builds the star cat-state family and its injection gadgets, verifies them
exhaustively, computes magic (robustness, stabilizer rank) and entanglement
(Meyer-Wallach) monotones, runs OTOC scrambling experiments on doped random
circuits, and matches two-qubit injectable structures inside circuits.
"""
from ._kernels import backend
from .catstates import (
    GadgetSpec,
    GadgetStats,
    Outcomes,
    build_Vm,
    build_Vm_t_inside,
    build_Wm,
    cat_state,
    corrections,
    default_convention,
    gadget_spec,
    gadget_stats,
    measured_family,
    run_gadget,
    star_cat,
    star_cat_via_measurement,
)
from .circuit import (
    Circuit,
    CircuitParseError,
    Gate,
    GateCounts,
    count_gates,
    invert_circuit,
    load_circuit,
    parse_circuit,
    parse_qasm,
    serialize_circuit,
)
from .entanglement import MwReport, meyer_wallach
from .magic import RankResult, RomResult, brute_rank, named_state, rom
from .matcher import (
    Match,
    MatchCostEstimate,
    Variant,
    enumerate_v2_variants,
    estimate_match_cost,
    match_patterns,
    plant_variants,
    variant_count_formula,
)
from .scrambling import (
    DopeSchedule,
    Injection,
    OtocPoint,
    OtocSeries,
    default_v_w,
    otoc,
    otoc_experiment,
    random_block,
    sample_dope_schedule,
)
from .stabilizer import (
    PauliString,
    StabilizerStateForm,
    enumerate_stabilizer_states,
    hierarchy_level_at_most,
    is_pauli,
    pauli_expectation,
)
from .statevector import (
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

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
