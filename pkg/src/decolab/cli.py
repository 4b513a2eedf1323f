"""Command-line front end.

Subcommands exchange states through the JSON interchange format
({"dims": [d_a, d_b], "rho": [[re, im], ...]} row-major) and write sweeps as
CSV.  Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .channels import DampingChannel, apply_channel, inverse_damping, is_physical
from .entanglement import (
    c1_closed,
    c2_closed,
    c2_unbalanced,
    wootters_concurrence,
)
from .errors import NumericalFailure, ValidationFailure
from .experiments import (
    ModePlan,
    SeparableSpec,
    forward_sweep,
    inverse_sweep,
    load_state,
    physicality_eps,
    save_state,
    sde_search,
    state_to_dict,
    sweep_to_csv,
)
from .fock import Mode, QubitPure
from .moments import MomentMatrixSpec, Ordering, witness_from_det

# Moment-matrix presets: the determinant witnesses used for two-qubit states.
# d2 normally orders the second mode; its companions are symmetric under the
# mode swap, so one orientation serves for them.
WITNESS_PRESETS: dict[str, MomentMatrixSpec] = {
    "d1": MomentMatrixSpec(Ordering.NOM_A, ((1, 0, 0), (0, 0, 1), (1, 0, 1))),
    "d2": MomentMatrixSpec(Ordering.NOM_B, ((0, 0, 0), (1, 0, 0), (1, 0, 1))),
    "d3": MomentMatrixSpec(
        Ordering.NOM_A, ((1, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1))
    ),
}


def _parse_grid(raw: str) -> list[float]:
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ValidationFailure(f"grid {raw!r} must be lo:hi:n or comma list")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ValidationFailure(f"bad grid {raw!r}: {exc}") from exc
        if n < 1:
            raise ValidationFailure("grid needs at least one point")
        return [float(x) for x in np.linspace(lo, hi, n)]
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationFailure(f"bad grid {raw!r}: {exc}") from exc


def _load_witness_spec(name: str) -> MomentMatrixSpec:
    if name in WITNESS_PRESETS:
        return WITNESS_PRESETS[name]
    if name.startswith("@"):
        with open(name[1:], "r", encoding="utf-8") as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationFailure(f"bad spec file {name[1:]}: {exc}") from exc
        try:
            return MomentMatrixSpec(
                Ordering(payload["ordering"]),
                tuple(tuple(i) for i in payload["indices"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationFailure(f"bad spec file {name[1:]}: {exc}") from exc
    raise ValidationFailure(
        f"unknown witness spec {name!r}; use one of {sorted(WITNESS_PRESETS)} or @file.json"
    )


def _emit(payload: dict):
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _cmd_evolve(args) -> int:
    state = load_state(args.state)
    if args.mode in ("a", "both"):
        state = apply_channel(
            state, DampingChannel(eta=args.eta_a, phi=args.phi, mode=Mode.A)
        )
    if args.mode in ("b", "both"):
        state = apply_channel(
            state, DampingChannel(eta=args.eta_b, phi=args.phi, mode=Mode.B)
        )
    if args.out:
        save_state(state, args.out)
    else:
        _emit(state_to_dict(state))
    return 0


def _cmd_invert(args) -> int:
    state = load_state(args.state)
    state = inverse_damping(state, args.eta, args.phi, Mode.A)
    if args.two_sided:
        state = inverse_damping(state, args.eta, args.phi, Mode.B)
    physical, min_eig = is_physical(state, physicality_eps())
    if args.out:
        save_state(state, args.out)
    else:
        _emit(state_to_dict(state))
    print(
        f"preimage min eigenvalue {min_eig:.6e} ({'physical' if physical else 'unphysical'})",
        file=sys.stderr,
    )
    return 0


def _cmd_witness(args) -> int:
    state = load_state(args.state)
    spec = _load_witness_spec(args.spec)
    report = witness_from_det(state, spec)
    _emit(
        {
            "spec": args.spec,
            "ordering": spec.ordering.value,
            "indices": [list(i) for i in spec.indices],
            "value": report.value,
            "verdict": report.verdict.value,
            "tolerance": report.tolerance,
        }
    )
    return 0


def _cmd_sweep(args) -> int:
    state = load_state(args.state)
    grid = _parse_grid(args.grid)
    witnesses = {name: _load_witness_spec(name) for name in args.witness}
    if args.plan in ("inverse", "inverse_both"):
        records = inverse_sweep(
            state,
            grid,
            phi=args.phi,
            two_sided=(args.plan == "inverse_both"),
            witnesses=witnesses or None,
        )
    else:
        records = forward_sweep(
            state,
            grid,
            plan=ModePlan(args.plan),
            phi=args.phi,
            eta_b_fixed=args.eta_b,
            witnesses=witnesses or None,
        )
    sweep_to_csv(records, args.out)
    print(f"wrote {len(records)} rows to {args.out}", file=sys.stderr)
    return 0


def _cmd_search_sde(args) -> int:
    spec = SeparableSpec(
        num_terms=args.num_terms, local_dim=args.local_dim, seed=args.seed
    )
    grid = _parse_grid(args.grid)
    hits = sde_search(
        spec,
        eta_grid=grid,
        trials=args.trials,
        two_sided=args.two_sided,
        phi=args.phi,
        threshold=args.threshold,
    )
    payload = {
        "spec": {
            "num_terms": spec.num_terms,
            "local_dim": spec.local_dim,
            "seed": spec.seed,
        },
        "trials": args.trials,
        "threshold": args.threshold,
        "hits": [
            {
                "state": state_to_dict(h.state),
                "eta": h.eta,
                "preimage_min_eig": h.preimage_min_eig,
                "preimage_log_neg": h.preimage_log_neg,
            }
            for h in hits
        ],
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"{len(hits)} hit(s) over {args.trials} trial(s)", file=sys.stderr)
    if not args.out:
        _emit(payload)
    return 0


def _cmd_concurrence(args) -> int:
    state = load_state(args.state)
    if (state.d_a, state.d_b) != (2, 2):
        raise ValidationFailure("concurrence needs a (2, 2) state")
    result = wootters_concurrence(state)
    out = {
        "input": {"raw": result.raw, "value": result.value},
        "eta_a": args.eta_a,
        "eta_b": args.eta_b,
    }
    evolved = apply_channel(
        state, DampingChannel(eta=args.eta_a, phi=0.0, mode=Mode.A)
    )
    evolved = apply_channel(
        evolved, DampingChannel(eta=args.eta_b, phi=0.0, mode=Mode.B)
    )
    evolved_conc = wootters_concurrence(evolved)
    out["evolved"] = {"raw": evolved_conc.raw, "value": evolved_conc.value}
    purity = float(np.trace(state.rho @ state.rho).real)
    if purity > 1.0 - 1e-10:
        w, v = np.linalg.eigh(state.rho)
        vec = v[:, -1]
        # strip the arbitrary global phase for a stable report
        lead = vec[np.argmax(np.abs(vec))]
        vec = vec * (lead.conjugate() / abs(lead))
        psi = QubitPure(*vec)
        out["closed_forms"] = {
            "initial": 2.0 * abs(psi.alpha * psi.delta - psi.beta * psi.gamma),
            "one_sided_raw": c1_closed(psi, args.eta_a),
            "symmetric_raw": c2_closed(psi, args.eta_a),
            "unbalanced_raw": c2_unbalanced(psi, args.eta_a, args.eta_b),
        }
    _emit(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decolab",
        description="Bipartite entanglement under passive vacuum decoherence",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="damp a state and write the result")
    p.add_argument("state", help="input state JSON")
    p.add_argument("--eta-a", type=float, default=1.0)
    p.add_argument("--eta-b", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--mode", choices=("a", "b", "both"), default="both")
    p.add_argument("--out", help="output state JSON (stdout if omitted)")
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("invert", help="apply the inverse damping map")
    p.add_argument("state")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--two-sided", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_invert)

    p = sub.add_parser("witness", help="evaluate a determinant witness")
    p.add_argument("state")
    p.add_argument(
        "--spec",
        required=True,
        help=f"preset ({', '.join(sorted(WITNESS_PRESETS))}) or @indices.json",
    )
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("sweep", help="sweep eta and write a CSV")
    p.add_argument("state")
    p.add_argument("--grid", required=True, help="lo:hi:n or comma-separated etas")
    p.add_argument(
        "--plan",
        choices=("a_only", "b_only", "both", "unbalanced", "inverse", "inverse_both"),
        default="both",
    )
    p.add_argument("--eta-b", type=float, default=None, help="fixed eta_b (unbalanced)")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--witness", action="append", default=[], help="det column preset")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("search-sde", help="search for disentanglement preimages")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--local-dim", type=int, default=3)
    p.add_argument("--num-terms", type=int, default=16)
    p.add_argument("--grid", default="0.5:1.0:101")
    p.add_argument("--two-sided", action="store_true", default=True)
    p.add_argument("--one-sided", dest="two_sided", action="store_false")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--out", help="hits JSON file (stdout if omitted)")
    p.set_defaults(func=_cmd_search_sde)

    p = sub.add_parser("concurrence", help="closed-form and numerical concurrence")
    p.add_argument("state", help="two-qubit state JSON")
    p.add_argument("--eta-a", type=float, default=1.0)
    p.add_argument("--eta-b", type=float, default=1.0)
    p.set_defaults(func=_cmd_concurrence)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationFailure, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
