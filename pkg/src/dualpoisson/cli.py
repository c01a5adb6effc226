"""Command-line front end.

Exit codes: 0 ok, 1 invariant failure, 2 bad flags, 3 degenerate
parameters, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import checks, classical, quantum
from .errors import DegenerateParametersError, InvalidParameterError
from .experiments import SweepSpec, gap_lengths, run_sweep
from .metrics import report
from .process import ProcessParams, discretize

EXIT_OK, EXIT_INVARIANT, EXIT_FLAGS, EXIT_DEGENERATE, EXIT_IO = 0, 1, 2, 3, 4
WRAP = 80


class _IOFailure(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {out}: {exc.strerror or exc}") from exc


def _params(args) -> ProcessParams:
    return ProcessParams(args.gamma1, args.gamma2, args.p, args.dt)


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _add_common(p: argparse.ArgumentParser, fmt_choices, fmt_default) -> None:
    p.add_argument("--format", choices=fmt_choices, default=fmt_default)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=classical.DEFAULT_DELTA)


def _add_process(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma1", type=float, default=12.0)
    p.add_argument("--gamma2", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.9)
    p.add_argument("--dt", type=float, default=0.1)


def cmd_metrics(args) -> int:
    r = report(_params(args), args.delta)
    d = r.as_dict()
    if args.format == "csv":
        cols = list(d)
        text = ",".join(cols) + "\n" + ",".join(repr(d[c]) for c in cols) + "\n"
    else:
        text = json.dumps(d) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        mode=args.mode,
        gamma1=args.gamma1,
        gamma2=args.gamma2,
        p=args.p,
        dt_start=args.dt_start,
        dt_stop=args.dt_stop,
        dt_points=args.dt_points,
        gamma_min=args.gamma_min,
        gamma_max=args.gamma_max,
        gamma_points=args.gamma_points,
        p_min=args.p_min,
        p_max=args.p_max,
        p_points=args.p_points,
        delta=args.delta,
        seed=args.seed,
        workers=args.workers,
    )
    if spec.mode == "precision":
        ProcessParams(spec.gamma1, spec.gamma2, spec.p, spec.dt_start)  # validate before work
    table = run_sweep(spec)
    if args.format == "json":
        text = json.dumps({"columns": list(table.columns), "rows": table.to_records()}) + "\n"
    else:
        text = table.to_csv()
    _emit(text, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    dp = discretize(_params(args))
    if args.model == "classical":
        machine = classical.build_machine(dp, args.delta)
        if args.start > machine.n_term:
            raise InvalidParameterError(f"--start must be <= n_term = {machine.n_term}")
        seq = classical.simulate(machine, args.start, args.steps, args.seed)
    else:
        model = quantum.build_model(dp)
        mode = "statevector" if args.statevector else "kraus"
        seq = quantum.simulate(model, args.start, args.steps, args.seed, mode=mode)

    gaps = gap_lengths(seq)
    hist = np.bincount(gaps) if gaps.size else np.zeros(0, dtype=int)
    stats = {
        "model": args.model,
        "steps": args.steps,
        "seed": args.seed,
        "ones": int(seq.sum()),
        "gaps": int(gaps.size),
        "gap_histogram": {str(k): int(c) for k, c in enumerate(hist) if c},
    }
    chars = (seq + ord("0")).tobytes().decode("ascii")
    if args.format == "json":
        text = json.dumps({"sequence": chars, "stats": stats}) + "\n"
    else:
        lines = [chars[i : i + WRAP] for i in range(0, len(chars), WRAP)]
        text = "\n".join(lines) + "\n" + json.dumps(stats) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = checks.Tolerances(
        unitarity=args.unitarity_tol,
        kraus=args.kraus_tol,
        recurrence=args.recurrence_tol,
        survival=args.survival_tol,
        rho=args.rho_tol,
        symmetry=args.symmetry_tol,
    )
    results = checks.run_checks(_params(args), args.delta, tol)
    if args.format == "json":
        text = json.dumps(
            [{"name": r.name, "status": r.status, "value": r.value, "tol": r.tol} for r in results]
        ) + "\n"
    else:
        text = "".join(r.line() + "\n" for r in results)
    _emit(text, args.out)
    return EXIT_OK if all(r.ok for r in results) else EXIT_INVARIANT


def cmd_export_model(args) -> int:
    _emit(quantum.build_model(discretize(_params(args))).to_json() + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualpoisson",
        description="Classical and quantum causal models of dual Poisson processes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="memory metrics at one parameter point")
    _add_process(p)
    _add_common(p, ("json", "csv"), "json")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("sweep", help="precision or (gamma, p) family sweep")
    _add_process(p)
    _add_common(p, ("csv", "json"), "csv")
    p.add_argument("--mode", choices=("precision", "family"), default="precision")
    d = SweepSpec()
    p.add_argument("--dt-start", type=float, default=d.dt_start)
    p.add_argument("--dt-stop", type=float, default=d.dt_stop)
    p.add_argument("--dt-points", type=_positive_int, default=d.dt_points)
    p.add_argument("--gamma-min", type=float, default=d.gamma_min)
    p.add_argument("--gamma-max", type=float, default=d.gamma_max)
    p.add_argument("--gamma-points", type=_positive_int, default=d.gamma_points)
    p.add_argument("--p-min", type=float, default=d.p_min)
    p.add_argument("--p-max", type=float, default=d.p_max)
    p.add_argument("--p-points", type=_positive_int, default=d.p_points)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="sample an output sequence")
    _add_process(p)
    _add_common(p, ("text", "json"), "text")
    p.add_argument("--model", choices=("classical", "quantum"), default="quantum")
    p.add_argument("--steps", type=_positive_int, default=1000)
    p.add_argument("--start", type=int, default=0, help="initial causal-state index")
    p.add_argument("--statevector", action="store_true", help="quantum: evolve the full two-qubit state")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the invariant suite at one point")
    _add_process(p)
    _add_common(p, ("text", "json"), "text")
    t = checks.Tolerances()
    p.add_argument("--unitarity-tol", type=float, default=t.unitarity)
    p.add_argument("--kraus-tol", type=float, default=t.kraus)
    p.add_argument("--recurrence-tol", type=float, default=t.recurrence)
    p.add_argument("--survival-tol", type=float, default=t.survival)
    p.add_argument("--rho-tol", type=float, default=t.rho)
    p.add_argument("--symmetry-tol", type=float, default=t.symmetry)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-model", help="write U, E0, E1 as JSON")
    _add_process(p)
    _add_common(p, ("json",), "json")
    p.set_defaults(func=cmd_export_model)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)  # exits 2 on malformed flags
    try:
        if getattr(args, "start", 0) < 0:
            raise InvalidParameterError("--start must be non-negative")
        if not (0.0 < args.delta <= 1.0):
            raise InvalidParameterError(f"--delta must lie in (0, 1], got {args.delta}")
        return args.func(args)
    except DegenerateParametersError as exc:
        print(f"dualpoisson: degenerate parameters: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except InvalidParameterError as exc:
        print(f"dualpoisson: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except _IOFailure as exc:
        print(f"dualpoisson: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
