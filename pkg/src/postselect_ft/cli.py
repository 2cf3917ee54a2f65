"""Command-line entry point.

Exit codes: 0 member / accepted, 1 non-member / always-reject, 2 error.
JSON and CSV go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .distributions import FLOAT, RATIONAL, DomainError, pattern_to_str
from .gadgets import BUILDERS, PLACEMENTS, GadgetAborts, GadgetConfig, run_exact
from .io import (
    distribution_to_json,
    dumps,
    format_number,
    load_distribution,
    parse_number,
    parse_rates,
    result_to_json,
)
from .mixing import ZeroRateInfeasible, check_hull_membership, decomposition_to_json, mixing_coefficients
from .montecarlo import sample_pauli_frame, within_envelope
from .oracles import CapacityError, OracleError, basis_state, fidelity, gadget_circuit, lp_membership, statevector_run
from .quotient import quotient_of
from .threshold import Q_MAX, sweep_threshold, write_sweep_csv


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _config(args) -> GadgetConfig:
    mode = getattr(args, "mode", FLOAT)
    eta = parse_number(getattr(args, "eta", "0"), mode)
    return GadgetConfig(eta=eta, split=args.split, injections=args.injections,
                        placement=args.placement)


def _load(args):
    dist = load_distribution(args.dist)
    return dist, parse_rates(args.p, dist.n, dist.mode)


def cmd_check(args) -> int:
    dist, p = _load(args)
    verdict = check_hull_membership(dist, p)
    out = verdict.to_json()
    if verdict.zero_rate_wire is not None:
        out["zero_rate_wire"] = verdict.zero_rate_wire
    _emit(out)
    return 0 if verdict.member else 1


def cmd_decompose(args) -> int:
    dist, p = _load(args)
    try:
        decomp = mixing_coefficients(dist, p)
    except ZeroRateInfeasible as exc:
        _emit({"p": [format_number(v) for v in p], "coeffs": None, "member": False,
               "zero_rate_wire": exc.wire})
        return 1
    _emit(decomposition_to_json(decomp))
    return 0 if decomp.member else 1


def cmd_simulate(args) -> int:
    cfg = _config(args)
    g = BUILDERS[args.gadget](cfg)
    try:
        res = run_exact(g, cfg.mode)
    except GadgetAborts as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = {
        "gadget": args.gadget,
        "eta": format_number(cfg.eta),
        "split": cfg.split,
        "injections": cfg.injections,
        "placement": cfg.placement,
        "mode": cfg.mode,
        "exact": result_to_json(res),
    }
    if args.gadget == "bell-prep":
        out["quotient"] = quotient_of(res.output).to_json()
    if args.mc_shots > 0:
        mc = sample_pauli_frame(g, args.mc_shots, args.seed, workers=args.workers)
        report = within_envelope(mc, float(res.accept_probability), res.output.to_mode(FLOAT))
        emp = mc.distribution()
        report["shots"] = mc.shots
        report["accepted"] = mc.accepted
        report["seed"] = args.seed
        report["empirical"] = distribution_to_json(emp) if emp is not None else None
        out["monte_carlo"] = report
    _emit(out)
    return 0


def cmd_sweep(args) -> int:
    if not (0 <= args.eta_min < args.eta_max < 1) or args.steps < 2:
        raise UsageError("need 0 <= eta-min < eta-max < 1 and steps >= 2")
    cfg = GadgetConfig(split=args.split, injections=args.injections, placement=args.placement)
    res = sweep_threshold(args.eta_min, args.eta_max, args.steps, cfg,
                          refine_tol=args.refine_tol, q_max=args.q_max, workers=args.workers)
    for f in res.findings:
        print(f"finding: {f}", file=sys.stderr)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_sweep_csv(res.rows, fh)
    else:
        write_sweep_csv(res.rows, sys.stdout)
    sys.stdout.write(f"threshold_estimate={res.threshold:.6g}\n")
    return 0


def _parse_pairs(text: str | None, what: str) -> dict:
    out = {}
    for item in (text or "").split(","):
        if not item.strip():
            continue
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"bad {what} entry {item!r}; expected key=value")
        out[key.strip()] = val.strip()
    return out


def cmd_oracle_lp(args) -> int:
    dist, p = _load(args)
    report = lp_membership(dist, p)
    _emit(report.to_json())
    return 0 if report.feasible else 1


def cmd_oracle_statevec(args) -> int:
    g = BUILDERS[args.gadget](GadgetConfig())
    faults = _parse_pairs(args.faults, "fault")
    for label, f in faults.items():
        if f not in ("XI", "IX", "XX"):
            raise UsageError(f"fault for {label!r} must be XI, IX or XX")
    inputs = {int(k): v for k, v in _parse_pairs(args.inputs, "input").items()}
    ops = gadget_circuit(g, faults, inputs)
    prob, state = statevector_run(ops)
    amps = state.reordered(list(g.output_wires))
    m = len(g.output_wires)
    out = {
        "gadget": args.gadget,
        "accept_probability": float(np.round(prob, 12)),
        "output_wires": list(g.output_wires),
        "amplitudes": {
            pattern_to_str(k, m): [float(np.round(a.real, 12)), float(np.round(a.imag, 12))]
            for k, a in enumerate(amps) if abs(a) > 1e-12
        },
    }
    if args.gadget == "teleport-cnot" and set(inputs.values()) <= {"0", "1"}:
        a, b = int(inputs.get(0, "0")), int(inputs.get(1, "0"))
        out["expected"] = pattern_to_str(a | ((a ^ b) << 1), 2)
        out["fidelity"] = float(np.round(fidelity(basis_state([a, a ^ b]), amps), 12))
    _emit(out)
    return 0


def _noise_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--split", choices=("symmetric", "adversarial"), default="symmetric")
    p.add_argument("--injections", dest="injections", action="store_true", default=True)
    p.add_argument("--no-injections", dest="injections", action="store_false")
    p.add_argument("--placement", choices=PLACEMENTS, default="after_d")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="postselect-ft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (("check", cmd_check, "hull membership verdict"),
                            ("decompose", cmd_decompose, "signed mixture coefficients")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("dist", help="distribution or quotient JSON file")
        p.add_argument("--p", required=True, help="rate per wire, comma separated, or one rate")
        p.set_defaults(func=fn)

    p = sub.add_parser("simulate", help="run a gadget exactly, optionally with Monte Carlo")
    p.add_argument("gadget", choices=sorted(BUILDERS))
    p.add_argument("--eta", default="0")
    p.add_argument("--mc-shots", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=(FLOAT, RATIONAL), default=FLOAT)
    p.add_argument("--workers", type=int, default=1)
    _noise_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="level map on a grid and threshold estimate")
    p.add_argument("--eta-min", type=float, default=0.0)
    p.add_argument("--eta-max", type=float, default=0.3)
    p.add_argument("--steps", type=int, default=31)
    p.add_argument("--out", help="CSV path; stdout when omitted")
    p.add_argument("--q-max", type=float, default=Q_MAX)
    p.add_argument("--refine-tol", type=float, default=1e-4)
    p.add_argument("--workers", type=int, default=1)
    _noise_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="independent verifiers")
    osub = p.add_subparsers(dest="oracle", required=True)
    q = osub.add_parser("lp-check", help="hull membership by linear programming")
    q.add_argument("dist")
    q.add_argument("--p", required=True)
    q.set_defaults(func=cmd_oracle_lp)
    q = osub.add_parser("statevec", help="noiseless or fault-injected state-vector run")
    q.add_argument("gadget", choices=sorted(BUILDERS))
    q.add_argument("--faults", help="label=XI|IX|XX, comma separated")
    q.add_argument("--inputs", help="wire=0|1|+|-, comma separated")
    q.set_defaults(func=cmd_oracle_statevec)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (DomainError, UsageError, CapacityError, OracleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
