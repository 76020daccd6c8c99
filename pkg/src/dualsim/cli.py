"""Command-line front end.

Exit status: 0 success, 1 domain error (parse/validation), 2 verification
failure, 3 incomplete solution enumeration.
"""
from __future__ import annotations

import argparse
import hashlib
import math
import sys
import time

import numpy as np

from . import __version__
from .algorithms import (
    brute_force_solutions,
    duality_sat_state,
    enumerate_solutions,
    format_assignment,
    parse_dimacs,
    single_query_search,
)
from .amplitude import basis_state, norm_sq
from .engine import run_program
from .errors import DualityError
from .measurement import DEFAULT_SEED, MeasurementPolicy, measure
from .optics import mach_zehnder
from .program import parse_program
from .verify import SUITES, run_suites

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY, EXIT_INCOMPLETE = 0, 1, 2, 3
CROSS_CHECK_MAX_VARS = 20


def fmt(x: float) -> str:
    """15 significant digits, locale independent."""
    return f"{float(x):.14e}"


def _policy(args) -> MeasurementPolicy:
    return MeasurementPolicy(args.model, args.epsilon, args.t0)


def _echo(out, args, extra=()):
    out.append(f"model: {args.model}")
    out.append(f"epsilon: {fmt(args.epsilon)}")
    out.append(f"t0: {fmt(args.t0)}")
    out.append(f"seed: {args.seed}")
    out.extend(extra)


def _amplitude_table(out, state, nonzero_only=False):
    out.append(f"norm_sq: {fmt(norm_sq(state))}")
    out.append("index re im prob")
    for i, a in enumerate(state.amplitudes):
        if nonzero_only and a == 0:
            continue
        out.append(f"{i} {fmt(a.real)} {fmt(a.imag)} {fmt(abs(a) ** 2)}")


def _outcome_line(m) -> str:
    where = m.outcome if m.clicked else "-"
    return f"measurement: clicked={str(m.clicked).lower()} outcome={where} time_cost={fmt(m.time_cost)}"


def _finish(out, started):
    out.append(f"wall_time_s: {time.perf_counter() - started:.6f}")
    print("\n".join(out))


def cmd_run(args) -> int:
    started = time.perf_counter()
    with open(args.program, encoding="utf-8") as fh:
        text = fh.read()
    prog = parse_program(text)
    policy = _policy(args)
    final = run_program(basis_state(prog.n_dubits, 0), prog, threads=args.threads)
    out = ["# dualsim run", f"program: {args.program}",
           f"program_sha256: {hashlib.sha256(text.encode()).hexdigest()}",
           f"dubits: {prog.n_dubits}"]
    _echo(out, args, [f"threads: {args.threads}"])
    if args.emit in ("amplitudes", "both"):
        _amplitude_table(out, final, args.nonzero)
    if args.emit in ("outcome", "both"):
        out.append(_outcome_line(measure(final, policy, args.seed)))
    _finish(out, started)
    return EXIT_OK


def cmd_search(args) -> int:
    started = time.perf_counter()
    res = single_query_search(args.n, args.tau, _policy(args), args.seed)
    out = ["# dualsim search", f"n: {args.n}", f"tau: {args.tau}"]
    _echo(out, args)
    out.append(f"queries_used: {res.queries_used}")
    _amplitude_table(out, res.final_state, args.nonzero)
    out.append(_outcome_line(res.measurement))
    _finish(out, started)
    return EXIT_OK


def cmd_sat(args) -> int:
    started = time.perf_counter()
    with open(args.dimacs, encoding="utf-8") as fh:
        text = fh.read()
    f = parse_dimacs(text)
    policy = _policy(args)
    out = ["# dualsim sat", f"dimacs: {args.dimacs}",
           f"dimacs_sha256: {hashlib.sha256(text.encode()).hexdigest()}",
           f"variables: {f.n_vars}", f"clauses: {len(f.clauses)}"]
    _echo(out, args)
    status = EXIT_OK

    if not args.enumerate:
        state = duality_sat_state(f)
        m = measure(state, policy, args.seed)
        out.append(f"norm_sq: {fmt(norm_sq(state))}")
        out.append(_outcome_line(m))
        if m.clicked:
            out.append(f"solution: {format_assignment(m.outcome, f.n_vars)}")
        else:
            out.append("result: UNSAT (no click)")
        _finish(out, started)
        return status

    res = enumerate_solutions(f, policy, args.seed, retry_cap=args.retry_cap)
    out.append(f"passes: {res.passes}")
    out.append(f"satisfiable: {str(res.satisfiable).lower()}")
    out.append(f"complete: {str(res.complete).lower()}")
    out.append(f"solutions: {len(res.solutions)}")
    out.extend(format_assignment(s, f.n_vars) for s in res.solutions)
    if not res.complete:
        status = EXIT_INCOMPLETE
    if not args.no_check and f.n_vars <= CROSS_CHECK_MAX_VARS:
        agree = set(res.solutions) == brute_force_solutions(f)
        out.append(f"brute_force_check: {'PASS' if agree else 'FAIL'}")
        if not agree and res.complete:
            status = EXIT_VERIFY
    _finish(out, started)
    return status


def cmd_mz_sweep(args) -> int:
    if args.points < 2:
        raise DualityError("--points must be at least 2")
    rows = []
    for k in range(args.points):
        lam = 2 * math.pi * k / (args.points - 1)
        amp_f, _ = mach_zehnder(lam)
        rows.append(f"{fmt(lam)} {fmt(abs(amp_f) ** 2)}")
    print("\n".join(rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    failed = False
    for name, ok, detail in run_suites(args.suite, args.seed):
        failed |= not ok
        tail = f" ({detail})" if detail else ""
        print(f"{name}: {'PASS' if ok else 'FAIL'}{tail}")
    return EXIT_VERIFY if failed else EXIT_OK


def _add_policy(p, with_seed=True):
    p.add_argument("--model", type=int, choices=(1, 2, 3), default=1,
                   help="read-out model (default 1: Born rule with no-click)")
    p.add_argument("--epsilon", type=float, default=0.0, help="MODEL_3 amplitude threshold")
    p.add_argument("--t0", type=float, default=1.0, help="base detection time")
    if with_seed:
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--nonzero", action="store_true", help="list only nonzero amplitudes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dualsim", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"dualsim {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a program file on |0...0>")
    p.add_argument("program")
    _add_policy(p)
    p.add_argument("--emit", choices=("amplitudes", "outcome", "both"), default="both")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("search", help="single-query search for a marked index")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    _add_policy(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sat", help="SAT via duality search on a DIMACS CNF file")
    p.add_argument("dimacs")
    p.add_argument("--enumerate", action="store_true", help="find every solution by deletion")
    p.add_argument("--no-check", action="store_true", help="skip the brute-force cross-check")
    p.add_argument("--retry-cap", type=int, default=64,
                   help="consecutive MODEL_1 no-clicks before giving up")
    _add_policy(p)
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("mz-sweep", help="Mach-Zehnder intensity at detector f vs phase")
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_mz_sweep)

    p = sub.add_parser("verify", help="run invariant batteries")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DualityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
