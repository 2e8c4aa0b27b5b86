"""
Command-line interface.

Exit codes: 0 success, 1 invariant/check failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import sys
from typing import IO, Sequence

import numpy as np

from . import bounds, performance, propagation, quantum
from .checks import run_checks
from .errors import QSLError
from .farhi_gutmann import fg_model, fg_pmax, fg_tmin
from .fileio import Problem, RunRecord, dumps, encode_vector, load_problem, load_runs, write_series_csv

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _with_overrides(problem: Problem, args: argparse.Namespace) -> Problem:
    fields = {}
    if getattr(args, "hbar", None) is not None:
        if not args.hbar > 0:
            raise UsageError("--hbar must be positive")
        fields["hbar"] = args.hbar
    if getattr(args, "t_max", None) is not None:
        if not args.t_max > 0:
            raise UsageError("--t-max must be positive")
        fields["t_max"] = args.t_max
    if getattr(args, "grid", None) is not None:
        if args.grid < 2:
            raise UsageError("--grid must be at least 2")
        fields["grid_points"] = args.grid
    if getattr(args, "level", None) is not None:
        if not 0.0 <= args.level <= 1.0:
            raise UsageError(f"--level must lie in [0, 1], got {args.level!r}")
        fields["level"] = args.level
    if not fields:
        return problem
    merged = {name: getattr(problem, name) for name in Problem.__dataclass_fields__}
    merged.update(fields)
    return Problem(**merged)


def _problem(args: argparse.Namespace) -> Problem:
    return _with_overrides(load_problem(args.problem), args)


def _target(problem: Problem) -> quantum.QuantumState:
    if problem.target_state is None:
        raise UsageError("missing required field: target_state")
    return problem.target_state


def _delta_h(problem: Problem) -> float:
    return quantum.std_dev(problem.hamiltonian, problem.initial_state)


def cmd_bound(args: argparse.Namespace, out: IO[str]) -> int:
    problem = _problem(args)
    k = problem.constants
    dh = _delta_h(problem)
    kind = args.kind
    if kind == "bhattacharyya":
        if problem.level is None:
            raise UsageError("missing required field: level (target probability for kind bhattacharyya)")
        report = bounds.bhattacharyya_time(dh, problem.level, k)
    elif kind == "orthogonal":
        report = bounds.orthogonal_bound(dh, k)
    elif kind == "offset":
        report = bounds.offset_bound(dh, bounds.angle_between(problem.initial_state, _target(problem)), k)
    else:
        report = bounds.general_transition_bound(problem.initial_state, _target(problem), dh, k)
    out.write(dumps({"kind": report.kind, "t_min": report.t_min, "delta_h": report.delta_h,
                     "hbar": report.hbar}) + "\n")
    return EXIT_OK


def cmd_evolve(args: argparse.Namespace, out: IO[str]) -> int:
    problem = _problem(args)
    k = problem.constants
    h, psi0, target = problem.hamiltonian, problem.initial_state, problem.target_state
    if args.t is not None:
        if not args.t >= 0:
            raise UsageError("--t must be non-negative")
        psi = propagation.evolve(h, psi0, args.t, k)
        doc = {"t": args.t, "state": encode_vector(psi.amplitudes)}
        if target is not None:
            doc["p_target"] = quantum.fidelity(target, psi)
        out.write(dumps(doc) + "\n")
        return EXIT_OK
    dh = _delta_h(problem)
    t_max = problem.t_max
    if t_max is None:
        if dh <= 0:
            raise UsageError("series mode needs t_max for a stationary initial state")
        t_max = propagation.default_t_max(dh, k)
    times = np.linspace(0.0, t_max, problem.grid_points)
    survival = propagation.TransitionAmplitude(h, psi0, psi0, k).probability(times)
    towards = None
    if target is not None:
        towards = propagation.TransitionAmplitude(h, psi0, target, k).probability(times)
    window = bounds.envelope_window(dh, k)
    rows = []
    for i, t in enumerate(times):
        env = bounds.mt_envelope(dh, t, k) if t <= window else None
        rows.append((t, None if towards is None else towards[i], survival[i], env))
    if args.csv and args.csv != "-":
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_series_csv(fh, rows)
    else:
        write_series_csv(out, rows)
    return EXIT_OK


def cmd_hit(args: argparse.Namespace, out: IO[str]) -> int:
    problem = _problem(args)
    target = _target(problem)
    level = 1.0 if problem.level is None else problem.level
    res = propagation.first_hitting_time(
        problem.hamiltonian, problem.initial_state, target, level, mode=args.mode,
        t_max=problem.t_max, k=problem.constants, grid_points=max(problem.grid_points, 3),
    )
    out.write(dumps({"time": res.time, "achieved": res.achieved, "converged": res.converged}) + "\n")
    return EXIT_OK


def _eta_for(kind: str, problem: Problem, run: RunRecord, dh: float) -> performance.EtaReport:
    k = problem.constants
    control = performance.ControlRun(run.t_cqs, achieved_fidelity=run.achieved_fidelity, label=run.label)
    psi0 = problem.initial_state
    if kind == "orthogonal":
        return performance.eta_orthogonal(dh, control, k)
    target = _target(problem)
    if kind == "offset":
        return performance.eta_offset(dh, bounds.angle_between(psi0, target), control, k)
    if kind == "general":
        return performance.eta_general(psi0, target, dh, control, k)
    if run.achieved_fidelity is not None:
        return performance.grade_run(problem.hamiltonian, psi0, target, control, k=k)
    return performance.eta_bhattacharyya(problem.hamiltonian, psi0, target, control, k)


def cmd_eta(args: argparse.Namespace, out: IO[str]) -> int:
    problem = _problem(args)
    dh = _delta_h(problem)
    if dh <= 0:
        raise UsageError("initial state is stationary (delta_h = 0): eta is undefined")
    if args.kind != "orthogonal":
        _target(problem)
    records = load_runs(args.runs)
    etas: list[float] = []
    failures = 0
    for record in records:
        if isinstance(record, Exception):
            failures += 1
            out.write(dumps({"error": str(record)}) + "\n")
            continue
        try:
            rep = _eta_for(args.kind, problem, record, dh)
        except QSLError as exc:
            failures += 1
            out.write(dumps({"label": record.label, "error": str(exc)}) + "\n")
            continue
        if rep.t_cqs is not None:
            etas.append(rep.eta)
        out.write(dumps({"label": record.label, "kind": rep.kind, "eta": rep.eta, "t_min": rep.t_min,
                         "t_cqs": rep.t_cqs, "clamped": rep.clamped}) + "\n")
    mean = sum(etas) / len(etas) if etas else None
    out.write(dumps({"summary": {"count": len(records), "failed": failures, "converged": len(etas),
                                 "mean_eta": mean}}) + "\n")
    if records and failures == len(records):
        return EXIT_USAGE
    return EXIT_OK


def cmd_fg(args: argparse.Namespace, out: IO[str]) -> int:
    model = fg_model(args.e_a, args.e_b, args.s)
    k = quantum.PhysicalConstants(args.hbar if args.hbar is not None else 1.0)
    doc = dict(model.as_dict())
    doc["p_max"] = fg_pmax(model)
    doc["t_min"] = fg_tmin(model, k)
    if args.t_cqs is not None:
        doc["eta"] = performance.eta_fg(model, performance.ControlRun(args.t_cqs), k).eta
    out.write(dumps(doc) + "\n")
    return EXIT_OK


def cmd_check(args: argparse.Namespace, out: IO[str]) -> int:
    if args.cases < 1:
        raise UsageError("--cases must be at least 1")
    results = run_checks(args.seed, args.cases)
    for r in results:
        out.write(f"{r.name:<16} {r.passed}/{r.total} {'PASS' if r.ok else 'FAIL'}\n")
    failed = [r for r in results if not r.ok]
    for r in failed:
        out.write(f"FAILED {r.name}: {dumps(r.failure)}\n")
    out.write(f"{'all suites passed' if not failed else f'{len(failed)} suite(s) failed'} "
              f"(seed={args.seed}, cases={args.cases})\n")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qslimit",
        description="Quantum speed limit bounds and minimum-time performance grading.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_parser(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("problem", help="problem JSON file")
        p.add_argument("--hbar", type=float)
        p.add_argument("--t-max", type=float, dest="t_max")
        p.add_argument("--grid", type=int)
        p.add_argument("--level", type=float)
        return p

    p = problem_parser("bound", "minimum transition time for the problem's initial state")
    p.add_argument("--kind", choices=bounds.BOUND_KINDS, default="orthogonal")
    p.set_defaults(func=cmd_bound)

    p = problem_parser("evolve", "evolved state at one time, or a probability time series as CSV")
    p.add_argument("--t", type=float, help="single evolution time; omit for series mode")
    p.add_argument("--csv", metavar="PATH", help="write the series here instead of standard output")
    p.set_defaults(func=cmd_evolve)

    p = problem_parser("hit", "first time the target probability reaches --level")
    p.add_argument("--mode", choices=("reach-level", "vanish"), default="reach-level")
    p.set_defaults(func=cmd_hit)

    p = problem_parser("eta", "grade control runs with the minimum-time performance measure")
    p.add_argument("runs", help="runs JSON file")
    p.add_argument("--kind", choices=bounds.BOUND_KINDS, default="bhattacharyya")
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("fg", help="Farhi-Gutmann model summary")
    p.add_argument("--e-a", type=float, required=True, dest="e_a")
    p.add_argument("--e-b", type=float, required=True, dest="e_b")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--t-cqs", type=float, dest="t_cqs")
    p.add_argument("--hbar", type=float)
    p.set_defaults(func=cmd_fg)

    p = sub.add_parser("check", help="run the randomized invariant suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=50)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None, out: IO[str] | None = None, err: IO[str] | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, QSLError) as exc:
        err.write(f"qslimit {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
