"""Command-line front end.

Subcommands::

    clonefeedback steady   --gamma G [--no-input | --e3 E --gate cnot ...]
    clonefeedback sweep    --sweep gamma 0 1 21 --sweep e3 -1 1 21 [...]
    clonefeedback lindblad --gamma-prime 1 --omega 5 --t 1 --dt 1e-3

Exit codes: 0 success, 2 usage or domain error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import dynamics
from .feedback import LoopConfig, SolverError, controllability, solve_steady_state
from .qmath import random_density

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

COLUMNS = (
    "gamma", "e3", "phi",
    "a1", "a2", "a3", "b1", "b2", "b3", "out1", "out2", "out3",
    "residual", "controllable", "sensitivity",
)
SWEEPABLE = ("gamma", "e3", "phi")


@dataclass
class ResultRow:
    gamma: float
    e3: Optional[float]
    phi: Optional[float]
    a1: float
    a2: float
    a3: float
    b1: float
    b2: float
    b3: float
    out1: float
    out2: float
    out3: float
    residual: float
    controllable: bool
    sensitivity: Optional[float]


@dataclass(frozen=True)
class SweepSpec:
    name: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


class NumericalFailure(RuntimeError):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _parse_cell(name: str, text: str):
    if text == "":
        return None
    if name == "controllable":
        return text == "true"
    return float(text)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        d = asdict(row)
        w.writerow([_fmt(d[c]) for c in COLUMNS])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    return [ResultRow(**{c: _parse_cell(c, r[c]) for c in COLUMNS}) for r in reader]


def rows_to_json(rows) -> str:
    return json.dumps([{c: asdict(r)[c] for c in COLUMNS} for r in rows], indent=1) + "\n"


def solve_row(cfg: LoopConfig) -> ResultRow:
    try:
        sol = solve_steady_state(cfg)
        ctl = controllability(cfg)
    except SolverError as exc:
        raise NumericalFailure(str(exc)) from exc
    a, b, out = sol.process_input_bloch, sol.process_output_bloch, sol.system_output_bloch
    return ResultRow(
        gamma=cfg.gamma,
        e3=cfg.input_bloch[2] if cfg.has_input else None,
        phi=cfg.phi if cfg.gate in ("cu", "cphase") else None,
        a1=float(a[0]), a2=float(a[1]), a3=float(a[2]),
        b1=float(b[0]), b2=float(b[1]), b3=float(b[2]),
        out1=float(out[0]), out2=float(out[1]), out3=float(out[2]),
        residual=sol.residual,
        controllable=ctl.controllable,
        sensitivity=ctl.sensitivity if cfg.has_input else None,
    )


def _add_loop_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", type=float, default=None, help="photon-loss probability in [0, 1]")
    p.add_argument("--e3", type=float, default=None, help="input Bloch z component")
    p.add_argument("--ex", type=float, default=0.0, help="input Bloch x component")
    p.add_argument("--ey", type=float, default=0.0, help="input Bloch y component")
    p.add_argument("--no-input", action="store_true", help="loop without an input terminal")
    p.add_argument("--gate", choices=("none", "cnot", "cu", "cphase"), default=None)
    p.add_argument("--phi", type=float, default=0.0, help="angle for cu (x rotation) or cphase")
    p.add_argument("--control", choices=("input", "feedback"), default="input",
                   help="leg placed on the gate's control qubit")
    p.add_argument("--solver", choices=("linear", "iteration"), default="linear")
    p.add_argument("--tol", type=float, default=1e-13, help="steady-state residual tolerance")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output file (default stdout)")
    p.add_argument("--seed", type=int, default=42)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clonefeedback", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    steady = sub.add_parser("steady", help="solve one steady state")
    _add_loop_args(steady)
    steady.set_defaults(func=cmd_steady, subparser=steady)

    sweep = sub.add_parser("sweep", help="steady states over a parameter grid")
    _add_loop_args(sweep)
    sweep.add_argument("--sweep", nargs=4, action="append", required=True,
                       metavar=("PARAM", "START", "STOP", "STEPS"),
                       help="sweep gamma, e3 or phi; repeat for a product grid")
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes")
    sweep.set_defaults(func=cmd_sweep, subparser=sweep)

    lind = sub.add_parser("lindblad", help="compare RK4 master-equation and Kraus solutions")
    lind.add_argument("--omega", type=float, default=0.0)
    lind.add_argument("--gamma-prime", type=float, default=1.0)
    lind.add_argument("--t", type=float, default=1.0)
    lind.add_argument("--dt", type=float, default=dynamics.DEFAULT_DT)
    lind.add_argument("--tol", type=float, default=1e-6)
    lind.add_argument("--seed", type=int, default=42)
    lind.add_argument("--states", type=int, default=20, help="random initial states to test")
    lind.add_argument("--format", choices=("csv", "json"), default="csv")
    lind.add_argument("--out", default="-")
    lind.set_defaults(func=cmd_lindblad, subparser=lind)
    return parser


def _config_from_args(parser, args, overrides=None) -> LoopConfig:
    vals = {"gamma": args.gamma, "e3": args.e3, "phi": args.phi}
    vals.update(overrides or {})
    gamma = vals["gamma"]
    if gamma is None:
        parser.error("argument --gamma: required")
    if not (math.isfinite(gamma) and 0.0 <= gamma <= 1.0):
        parser.error(f"argument --gamma: must lie in [0, 1], got {gamma!r}")
    if args.no_input:
        if vals["e3"] is not None:
            parser.error("argument --e3: not allowed with --no-input")
        if args.gate not in (None, "none"):
            parser.error("argument --gate: the no-input loop has no gate")
        return LoopConfig(gamma=gamma, input_bloch=None, gate="none", solver=args.solver, tol=args.tol)
    e = (args.ex, args.ey, 0.0 if vals["e3"] is None else vals["e3"])
    if not all(math.isfinite(x) for x in e):
        parser.error("argument --e3: input Bloch components must be finite")
    if not -1.0 <= e[2] <= 1.0:
        parser.error(f"argument --e3: must lie in [-1, 1], got {e[2]!r}")
    if math.sqrt(sum(x * x for x in e)) > 1 + 1e-12:
        parser.error("argument --e3: input Bloch vector (--ex, --ey, --e3) is longer than 1")
    if not math.isfinite(vals["phi"]):
        parser.error("argument --phi: must be finite")
    return LoopConfig(
        gamma=gamma, input_bloch=e, gate=args.gate or "cnot", phi=vals["phi"],
        control=args.control, solver=args.solver, tol=args.tol,
    )


def _parse_sweeps(parser, args) -> list[SweepSpec]:
    specs = []
    for name, start, stop, steps in args.sweep:
        if name not in SWEEPABLE:
            parser.error(f"argument --sweep: unknown parameter {name!r}; choose from {SWEEPABLE}")
        if name in (s.name for s in specs):
            parser.error(f"argument --sweep: parameter {name!r} swept twice")
        try:
            spec = SweepSpec(name, float(start), float(stop), int(steps))
        except ValueError:
            parser.error(f"argument --sweep: cannot parse {name} {start} {stop} {steps}")
        if spec.steps < 2:
            parser.error("argument --sweep: STEPS must be at least 2")
        if not spec.start < spec.stop:
            parser.error(f"argument --sweep: empty range {spec.start}..{spec.stop} for {name}")
        if name == "gamma" and not (0.0 <= spec.start and spec.stop <= 1.0):
            parser.error("argument --sweep: gamma range must stay inside [0, 1]")
        if name == "e3":
            if args.no_input:
                parser.error("argument --sweep: cannot sweep e3 with --no-input")
            if not (-1.0 <= spec.start and spec.stop <= 1.0):
                parser.error("argument --sweep: e3 range must stay inside [-1, 1]")
        if name == "phi" and args.gate not in ("cu", "cphase"):
            parser.error("argument --sweep: phi sweeps need --gate cu or --gate cphase")
        specs.append(spec)
    if args.gamma is None and "gamma" not in (s.name for s in specs):
        parser.error("argument --gamma: required unless gamma is swept")
    return specs


def _emit(rows, fmt: str, out: str) -> None:
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_steady(parser, args) -> int:
    cfg = _config_from_args(parser, args)
    row = solve_row(cfg)
    if args.format == "json":
        text = json.dumps({c: asdict(row)[c] for c in COLUMNS}, indent=1) + "\n"
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
    else:
        _emit([row], "csv", args.out)
    return EXIT_OK


def sweep_configs(parser, args) -> list[LoopConfig]:
    specs = _parse_sweeps(parser, args)
    cfgs = []
    for combo in itertools.product(*(s.values() for s in specs)):
        overrides = {s.name: float(v) for s, v in zip(specs, combo)}
        cfgs.append(_config_from_args(parser, args, overrides))
    return cfgs


def cmd_sweep(parser, args) -> int:
    cfgs = sweep_configs(parser, args)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(solve_row, cfgs, chunksize=16))
    else:
        rows = [solve_row(c) for c in cfgs]
    _emit(rows, args.format, args.out)
    return EXIT_OK


def cmd_lindblad(parser, args) -> int:
    if not (args.dt > 0):
        parser.error("argument --dt: must be positive")
    if args.t < 0 or not math.isfinite(args.t):
        parser.error("argument --t: must be a finite non-negative time")
    if args.dt >= args.t:
        parser.error(f"argument --dt: step {args.dt!r} must be smaller than --t {args.t!r}")
    if args.gamma_prime < 0:
        parser.error("argument --gamma-prime: must be non-negative")
    if args.states < 0:
        parser.error("argument --states: must be non-negative")
    p = dynamics.EmissionParams(args.omega, args.gamma_prime, args.t)
    rng = np.random.default_rng(args.seed)
    states = [np.diag([0.0, 1.0]).astype(complex)] + [random_density(rng) for _ in range(args.states)]
    worst, drift, steps = 0.0, 0.0, 0
    for rho0 in states:
        res = dynamics.lindblad_evolve(rho0, p, args.dt)
        gap = np.max(np.abs(dynamics.to_interaction_picture(res.rho, p) - dynamics.kraus_solution(rho0, p)))
        worst, drift, steps = max(worst, float(gap)), max(drift, res.trace_drift), res.steps
    report = {
        "omega": args.omega, "gamma_prime": args.gamma_prime, "t": args.t, "dt": args.dt,
        "gamma": dynamics.gamma_from_time(args.gamma_prime, args.t), "steps": steps,
        "states": len(states), "max_discrepancy": worst, "trace_drift": drift,
        "tol": args.tol, "pass": worst <= args.tol,
    }
    if args.format == "json":
        text = json.dumps(report, indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.keys())
        w.writerow([_fmt(v) for v in report.values()])
        text = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if worst > args.tol:
        print(f"error: max discrepancy {worst:.3e} exceeds --tol {args.tol:g}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args.subparser, args)
    except (NumericalFailure, dynamics.IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
