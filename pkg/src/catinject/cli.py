"""Command-line frontend. Every subcommand emits JSON on stdout (or writes
files for the OTOC series); validation failures exit 1 and verification
failures exit 2, both with a machine-readable JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import catstates, magic, matcher, scrambling
from .circuit import CircuitParseError, load_circuit
from .entanglement import meyer_wallach
from .statevector import DensityMatrix, PureState, fidelity_up_to_phase, random_state, simulate

FIDELITY_GATE = 1 - 1e-9


class ValidationFailure(Exception):
    pass


class VerificationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; we reserve that
        raise ValidationFailure(message)


def _load_state_file(path: Path) -> PureState:
    tokens = path.read_text().split()
    if len(tokens) % 2 != 0:
        raise ValidationFailure(f"{path}: expected whitespace-separated re/im pairs")
    try:
        values = [float(t) for t in tokens]
    except ValueError as exc:
        raise ValidationFailure(f"{path}: {exc}")
    amps = np.array(values[0::2]) + 1j * np.array(values[1::2])
    n = (len(amps)).bit_length() - 1
    if 1 << n != len(amps):
        raise ValidationFailure(f"{path}: amplitude count {len(amps)} is not a power of 2")
    try:
        return PureState(n, amps)
    except ValueError as exc:
        raise ValidationFailure(str(exc))


def _resolve_state(spec: str) -> PureState:
    p = Path(spec)
    if p.exists():
        return _load_state_file(p)
    try:
        return magic.named_state(spec)
    except ValueError as exc:
        raise ValidationFailure(str(exc))


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_cat(args) -> int:
    m = args.m
    family = args.family
    try:
        if family == "star":
            state = catstates.star_cat(m)
        elif family == "original":
            state = catstates.cat_state(m)
        elif family == "xmeas":
            state = catstates.measured_family(m, "X")
        else:
            state = catstates.measured_family(m, "Z")
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    _emit({
        "family": family,
        "m": m,
        "num_qubits": state.num_qubits,
        "amplitudes": [[a.real, a.imag] for a in state.amplitudes],
    })
    return 0


def _cmd_rom(args) -> int:
    state = _resolve_state(args.state)
    n = state.num_qubits
    if n > 4:
        raise ValidationFailure(f"robustness supports up to 4 qubits, state has {n}")
    if n == 4 and not args.slow:
        raise ValidationFailure("4-qubit robustness takes minutes; pass --slow to run it")
    result = magic.rom(DensityMatrix.from_pure(state))
    _emit({
        "value": result.value,
        "basis_n": result.basis_n,
        "coefficients": [
            {"index": i, "value": v} for i, v in sorted(result.coefficients.items())
        ],
    })
    return 0


def _cmd_mw(args) -> int:
    state = _resolve_state(args.state)
    if state.num_qubits < 2:
        raise ValidationFailure("Meyer-Wallach needs at least 2 qubits")
    report = meyer_wallach(state)
    _emit({"value": report.value, "purities": list(report.purities)})
    return 0


def _cmd_gadget_verify(args) -> int:
    m = args.m
    if m < 2:
        raise ValidationFailure("m must be >= 2")
    convention = args.convention
    rng = np.random.default_rng(args.seed)
    probes = [PureState.plus(m)] + [random_state(m, rng) for _ in range(3)]
    vm = catstates.build_Vm(m)
    vm_t = catstates.build_Vm_t_inside(m)
    indices = range(1 << m) if args.all_outcomes else [0]
    rows = []
    all_passed = True
    for idx in indices:
        outc = catstates.Outcomes.from_index(m, idx)
        t_inside = args.skip_nonlocal and outc.parity == 1
        target_circ = vm_t if t_inside else vm
        fid = 1.0
        for probe in probes:
            got = catstates.run_gadget(
                m, probe, outc, convention=convention,
                skip_nonlocal_corrections=args.skip_nonlocal,
            )
            fid = min(fid, fidelity_up_to_phase(got, simulate(target_circ, probe)))
        ok = fid >= FIDELITY_GATE
        all_passed &= ok
        rows.append({
            "sigma": "".join(map(str, outc.sigma)),
            "target": "v2_t_inside" if t_inside else "vm",
            "fidelity": fid,
            "passed": ok,
        })
    _emit({
        "m": m,
        "convention": convention or catstates.default_convention(),
        "skip_nonlocal": args.skip_nonlocal,
        "rows": rows,
        "all_passed": all_passed,
    })
    if not all_passed:
        raise VerificationFailure(f"gadget fidelity below {FIDELITY_GATE}")
    return 0


def _cmd_gadget_stats(args) -> int:
    if args.m < 2:
        raise ValidationFailure("m must be >= 2")
    stats = catstates.gadget_stats(args.m)
    _emit({
        "m": stats.m,
        "direct_cnot": stats.direct_cnot,
        "gadget_cnot": stats.gadget_cnot,
        "mean_correction_cz": {
            "numerator": stats.mean_correction_cz.numerator,
            "denominator": stats.mean_correction_cz.denominator,
            "value": float(stats.mean_correction_cz),
        },
        "variant_count_formula": stats.variant_count_formula,
    })
    return 0


def _cmd_otoc(args) -> int:
    if args.gate_set not in scrambling.GATE_SETS:
        raise ValidationFailure(f"unknown gate set {args.gate_set!r}")
    if args.n < 2 or args.blocks < 1 or args.layers < 1:
        raise ValidationFailure("need n >= 2, blocks >= 1, layers >= 1")
    seeds = [args.seed] if not args.seeds else [int(s) for s in args.seeds.split(",")]
    inject_upto = args.inject_upto or args.blocks
    if inject_upto > args.blocks:
        raise ValidationFailure("--inject-upto beyond the last block")
    out = Path(args.out)
    written = []
    for seed in seeds:
        schedule = None
        if args.inject:
            schedule = scrambling.sample_dope_schedule(
                args.n, args.inject, inject_upto, seed
            )
        series = scrambling.otoc_experiment(
            args.n, args.gate_set, args.blocks, args.layers,
            schedule=schedule, seed=seed,
        )
        target = out if len(seeds) == 1 else out.with_name(
            f"{out.stem}.seed{seed}{out.suffix or '.json'}"
        )
        scrambling.write_series_json(series, target)
        written.append(str(target))
        if args.csv:
            csv_path = Path(args.csv) if len(seeds) == 1 else Path(args.csv).with_name(
                f"{Path(args.csv).stem}.seed{seed}{Path(args.csv).suffix or '.csv'}"
            )
            scrambling.write_series_csv(series, csv_path)
            written.append(str(csv_path))
    _emit({"written": written, "seeds": seeds})
    return 0


def _cmd_match(args) -> int:
    try:
        host = load_circuit(args.host)
    except (OSError, CircuitParseError) as exc:
        raise ValidationFailure(str(exc))
    planted = None
    if args.plant:
        rng = np.random.default_rng(args.seed)
        host, truth = matcher.plant_variants(host, args.plant, rng)
        planted = [
            {"variant_id": t.variant_id, "positions": list(t.positions),
             "qubit_map": list(t.qubit_map)}
            for t in truth
        ]
    matches = matcher.match_patterns(host)
    payload = {
        "count": len(matches),
        "matches": [
            {"variant_id": m.variant_id, "positions": list(m.positions),
             "qubit_map": list(m.qubit_map)}
            for m in matches
        ],
    }
    if planted is not None:
        payload["planted"] = planted
    _emit(payload)
    return 0


def _cmd_rank(args) -> int:
    state = _resolve_state(args.state)
    if state.num_qubits > 2:
        raise ValidationFailure("brute-force rank supports up to 2 qubits")
    if args.rmax < 1 or args.rmax > 4:
        raise ValidationFailure("--rmax must be in 1..4")
    result = magic.brute_rank(state, r_max=args.rmax)
    _emit({
        "rank": result.rank,
        "found": result.found,
        "decomposition": [
            {"index": idx, "re": c.real, "im": c.imag}
            for c, idx in result.decomposition
        ],
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catinject", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cat", help="print cat-family amplitudes")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--family", choices=["star", "original", "xmeas", "zmeas"],
                   default="star")
    p.set_defaults(func=_cmd_cat)

    p = sub.add_parser("rom", help="robustness of magic of a named state or file")
    p.add_argument("--state", required=True)
    p.add_argument("--slow", action="store_true",
                   help="allow the 4-qubit solve (minutes)")
    p.set_defaults(func=_cmd_rom)

    p = sub.add_parser("mw", help="Meyer-Wallach entanglement of a state")
    p.add_argument("--state", required=True)
    p.set_defaults(func=_cmd_mw)

    gadget = sub.add_parser("gadget", help="injection gadget tools")
    gsub = gadget.add_subparsers(dest="gadget_command", required=True)
    p = gsub.add_parser("verify", help="per-outcome gadget fidelity table")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--all-outcomes", action="store_true")
    p.add_argument("--skip-nonlocal", action="store_true")
    p.add_argument("--convention",
                   choices=[catstates.AS_WRITTEN, catstates.CONJUGATE_TRANSPOSE])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gadget_verify)
    p = gsub.add_parser("stats", help="gadget gate-count summary")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=_cmd_gadget_stats)

    p = sub.add_parser("otoc", help="doped random-circuit OTOC experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gate-set", required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--layers", type=int, required=True)
    p.add_argument("--inject", type=int, default=0)
    p.add_argument("--inject-upto", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", help="comma-separated list; one output per seed")
    p.add_argument("--out", required=True)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_otoc)

    p = sub.add_parser("match", help="find V_2 variants inside a circuit file")
    p.add_argument("--host", required=True)
    p.add_argument("--plant", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("rank", help="brute-force stabilizer rank")
    p.add_argument("--state", required=True)
    p.add_argument("--rmax", type=int, default=4)
    p.set_defaults(func=_cmd_rank)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationFailure as exc:
        json.dump({"error": {"code": "validation", "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except VerificationFailure as exc:
        json.dump({"error": {"code": "verification", "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
