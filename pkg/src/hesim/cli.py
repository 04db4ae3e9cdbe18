"""Batch command-line front end.

Subcommands sweep the overlap/violation curve (``kz``), compare the
numerical CHSH optimum with the closed form (``chsh``), Monte-Carlo the
teleportation protocols (``teleport``), run entanglement swapping
(``swap``), and report entanglement for named states (``entropy``).
Output is CSV (kz) or JSON (everything else), to --out or stdout. All
stochastic commands default to seed 0 and echo the seed, so reruns are
byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .bellchsh import analytic_optimum, optimize_chsh
from .entanglement import Bipartition, entanglement_entropy, schmidt_coefficients
from .fock import (
    SpaceDescriptor,
    StateVector,
    TruncationError,
    even_coherent,
    mode_dim_for,
    tensor,
)
from .protocols import (
    HesLabel,
    ParityBellLabel,
    RngStream,
    SpinBellLabel,
    hes_state,
    parity_bell_state,
    spin_bell_state,
    swap_entanglement,
    teleport_parity,
    teleport_spin,
)
from .pseudospin import Direction, build_pseudospin, k_matrix, k_series

ADAPTIVE_DIM_TOL = 1e-14
DEFAULT_SEED = 0

_UNICODE_ALIASES = str.maketrans(
    {
        "ψ": "psi",  # psi
        "φ": "phi",  # phi
        "Ψ": "Psi",
        "Φ": "Phi",
        "⁺": "+",  # superscript plus/minus
        "⁻": "-",
        "̃": "~",  # combining tilde
        "′": "p",  # prime
    }
)


def _canon(label: str) -> str:
    return label.translate(_UNICODE_ALIASES)


def _parse_enum(enum_cls, text: str, what: str):
    canon = _canon(text)
    for member in enum_cls:
        if member.value == canon:
            return member
    choices = ", ".join(m.value for m in enum_cls)
    raise ValueError(f"unknown {what} {text!r}; choose one of: {choices}")


def _dim_for(z: float, override: int | None) -> int:
    if override is not None:
        return override
    return mode_dim_for(z, ADAPTIVE_DIM_TOL)


def _parse_amplitude(text: str, name: str) -> complex:
    try:
        return complex(text)
    except ValueError:
        raise ValueError(
            f"{name} must be a real or complex literal like 0.6 or 0.6+0.8j, "
            f"got {text!r}"
        ) from None


def _normalized_pair(alpha: complex, beta: complex) -> tuple[complex, complex]:
    norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    if norm == 0.0:
        raise ValueError("alpha and beta cannot both be zero")
    return alpha / norm, beta / norm


def _direction_angles(d: Direction) -> dict[str, float]:
    return {"theta": d.theta, "phi": d.phi}


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def cmd_kz(args: argparse.Namespace) -> str:
    if args.steps < 1:
        raise ValueError(f"steps must be >= 1, got {args.steps}")
    if args.zmin < 0.0 or args.zmin > args.zmax:
        raise ValueError(
            f"need 0 <= zmin <= zmax, got zmin={args.zmin!r} zmax={args.zmax!r}"
        )
    if args.steps == 1:
        zs = [args.zmin]
    else:
        span = args.zmax - args.zmin
        zs = [args.zmin + i * span / (args.steps - 1) for i in range(args.steps)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["z", "K_series", "K_matrix", "abs_diff", "violation"])
    for z in zs:
        ks = k_series(z)
        km = k_matrix(z, _dim_for(z, args.dim))
        violation = 2.0 * math.sqrt(1.0 + ks * ks)
        writer.writerow([repr(z), repr(ks), repr(km), repr(abs(ks - km)), repr(violation)])
    return buf.getvalue()


def cmd_chsh(args: argparse.Namespace) -> str:
    label = _parse_enum(HesLabel, args.label, "hybrid state label")
    dim = _dim_for(args.z, args.dim)
    ops = build_pseudospin(dim)
    state = hes_state(label, args.z, dim)
    analytic = analytic_optimum(args.z, label)
    numeric = optimize_chsh(state, ops, restarts=args.restarts, seed=args.seed)
    payload = {
        "command": "chsh",
        "z": args.z,
        "label": label.value,
        "dim": dim,
        "seed": args.seed,
        "restarts": numeric.restarts_used,
        "iterations": numeric.iterations,
        "analytic_value": analytic.value,
        "optimizer_value": numeric.value,
        "gap": numeric.value - analytic.value,
        "optimizer_settings": {
            "a": _direction_angles(numeric.settings.a),
            "a_prime": _direction_angles(numeric.settings.a_prime),
            "b": _direction_angles(numeric.settings.b),
            "b_prime": _direction_angles(numeric.settings.b_prime),
        },
    }
    return _json(payload)


def cmd_teleport(args: argparse.Namespace) -> str:
    if args.trials < 1:
        raise ValueError(f"trials must be >= 1, got {args.trials}")
    alpha, beta = _normalized_pair(
        _parse_amplitude(args.alpha, "alpha"), _parse_amplitude(args.beta, "beta")
    )
    channel = _parse_enum(HesLabel, args.channel, "channel label")
    dim = _dim_for(max(args.z, args.zpp if args.zpp is not None else args.z), args.dim)
    outcome_enum = SpinBellLabel if args.kind == "spin" else ParityBellLabel
    counts = {label.value: 0 for label in outcome_enum}
    fid_min, fid_sum = math.inf, 0.0
    for trial in range(args.trials):
        rng = RngStream(args.seed + trial)
        if args.kind == "spin":
            rec = teleport_spin(alpha, beta, channel, args.z, dim, rng)
        else:
            zpp = args.zpp if args.zpp is not None else args.z
            rec = teleport_parity(alpha, beta, zpp, channel, args.z, dim, rng)
        counts[rec.outcome.value] += 1
        fid_min = min(fid_min, rec.fidelity)
        fid_sum += rec.fidelity
    payload = {
        "command": "teleport",
        "kind": args.kind,
        "alpha": [alpha.real, alpha.imag],
        "beta": [beta.real, beta.imag],
        "z": args.z,
        "channel": channel.value,
        "dim": dim,
        "trials": args.trials,
        "seed": args.seed,
        "counts": counts,
        "frequencies": {k: v / args.trials for k, v in counts.items()},
        "fidelity_min": fid_min,
        "fidelity_mean": fid_sum / args.trials,
    }
    if args.kind == "parity":
        payload["z_dblprime"] = args.zpp if args.zpp is not None else args.z
    return _json(payload)


def cmd_swap(args: argparse.Namespace) -> str:
    if args.trials < 1:
        raise ValueError(f"trials must be >= 1, got {args.trials}")
    dim = args.dim
    if dim is None:
        dim = max(_dim_for(args.z, None), _dim_for(args.zprime, None))
    per_outcome = {
        label.value: {
            "count": 0,
            "parity_label": None,
            "fidelity_min": math.inf,
            "entropy_min": math.inf,
            "entropy_max": -math.inf,
        }
        for label in SpinBellLabel
    }
    fid_min = math.inf
    for trial in range(args.trials):
        rec = swap_entanglement(args.z, args.zprime, dim, RngStream(args.seed + trial))
        slot = per_outcome[rec.outcome.value]
        slot["count"] += 1
        slot["parity_label"] = rec.parity_label.value
        slot["fidelity_min"] = min(slot["fidelity_min"], rec.fidelity)
        cut = Bipartition.of(rec.mode_state.space, {0})
        ent = entanglement_entropy(rec.mode_state, cut)
        slot["entropy_min"] = min(slot["entropy_min"], ent)
        slot["entropy_max"] = max(slot["entropy_max"], ent)
        fid_min = min(fid_min, rec.fidelity)
    for slot in per_outcome.values():
        if slot["count"] == 0:
            slot["fidelity_min"] = None
            slot["entropy_min"] = None
            slot["entropy_max"] = None
    payload = {
        "command": "swap",
        "z": args.z,
        "zprime": args.zprime,
        "dim": dim,
        "trials": args.trials,
        "seed": args.seed,
        "fidelity_min": fid_min,
        "outcomes": per_outcome,
    }
    return _json(payload)


def _build_named_state(spec: str, dim_override: int | None) -> tuple[StateVector, Bipartition]:
    parts = _canon(spec).split(":")
    kind = parts[0] if parts else ""
    params: dict[str, float] = {}
    if parts and "=" in parts[-1]:
        for item in parts.pop().split(","):
            key, _, value = item.partition("=")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise ValueError(f"bad parameter {item!r} in state spec {spec!r}") from None
    if kind == "spinbell":
        if len(parts) != 2:
            raise ValueError(f"spinbell spec needs a label, got {spec!r}")
        label = _parse_enum(SpinBellLabel, parts[1], "spin Bell label")
        state = spin_bell_state(label)
    elif kind == "hes":
        if len(parts) != 2 or "z" not in params:
            raise ValueError(f"hes spec needs a label and z=..., got {spec!r}")
        label = _parse_enum(HesLabel, parts[1], "hybrid state label")
        z = params["z"]
        state = hes_state(label, z, _dim_for(z, dim_override))
    elif kind == "paritybell":
        if len(parts) != 2 or "z" not in params or "zp" not in params:
            raise ValueError(
                f"paritybell spec needs a label, z=... and zp=..., got {spec!r}"
            )
        label = _parse_enum(ParityBellLabel, parts[1], "parity Bell label")
        z, zp = params["z"], params["zp"]
        dim = dim_override
        if dim is None:
            dim = max(_dim_for(z, None), _dim_for(zp, None))
        state = parity_bell_state(label, z, zp, dim)
    elif kind == "product":
        if "z" not in params:
            raise ValueError(f"product spec needs z=..., got {spec!r}")
        z = params["z"]
        spin = StateVector(SpaceDescriptor.qubit(), np.array([1.0, 0.0]))
        state = tensor(spin, even_coherent(z, _dim_for(z, dim_override)))
    else:
        raise ValueError(
            f"unknown state spec {spec!r}; use spinbell:..., hes:..., "
            f"paritybell:... or product:z=..."
        )
    return state, Bipartition.of(state.space, {0})


def cmd_entropy(args: argparse.Namespace) -> str:
    state, cut = _build_named_state(args.statespec, args.dim)
    spectrum = schmidt_coefficients(state, cut)
    payload = {
        "command": "entropy",
        "statespec": args.statespec,
        "entropy_bits": entanglement_entropy(state, cut),
        "schmidt_coefficients": list(spectrum.coefficients),
    }
    return _json(payload)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hesim",
        description="Hybrid entangled state simulator: sweeps, CHSH optimization, "
        "teleportation and swapping Monte Carlo, entanglement reports.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("kz", help="sweep the overlap k(z) and the CHSH violation")
    p.add_argument("--zmin", type=float, required=True)
    p.add_argument("--zmax", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="number of rows")
    p.add_argument("--dim", type=int, default=None, help="override the adaptive Fock cutoff")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_kz)

    p = sub.add_parser("chsh", help="compare the CHSH optimizer with the closed form")
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--label", default="phi+", help="hybrid state label (default phi+)")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("teleport", help="Monte-Carlo teleportation runs")
    p.add_argument("kind", choices=("spin", "parity"))
    p.add_argument("--alpha", required=True, help="input amplitude (complex literal)")
    p.add_argument("--beta", required=True)
    p.add_argument("--z", type=float, required=True, help="channel cat amplitude")
    p.add_argument(
        "--zpp", type=float, default=None,
        help="input codeword amplitude for parity teleportation (default: z)",
    )
    p.add_argument("--channel", default="phi+")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("swap", help="Monte-Carlo entanglement swapping runs")
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--zprime", type=float, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_swap)

    p = sub.add_parser("entropy", help="entropy and Schmidt spectrum of a named state")
    p.add_argument(
        "statespec",
        help="spinbell:Phi+ | hes:phi+:z=1 | paritybell:phi~+:z=1,zp=0.5 | product:z=1",
    )
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_entropy)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        _emit(text, args.out)
    except (ValueError, TruncationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
