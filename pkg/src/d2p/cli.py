"""Command-line entry point.

JSON results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
2 invalid arguments, 3 solver did not converge, 4 file I/O failure.
"""

import argparse
import json
import math
import sys

from . import circuit as cq
from . import experiments, solver
from . import statevector as sv
from .errors import DomainError, NoConvergence

EXIT_OK, EXIT_USAGE, EXIT_NOCONV, EXIT_IO = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise DomainError(message)


def _marked_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser():
    p = _Parser(prog="d2p", description="Deterministic two-phase Grover search toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve the two diffusion phases")
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--k", type=_positive_int)
    s.add_argument("--alpha", type=float, default=math.pi, help="oracle phase in radians")

    s = sub.add_parser("simulate", help="build and run the D2p circuit")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--marked", type=_marked_list, required=True)
    s.add_argument("--k", type=_positive_int)
    s.add_argument("--alpha", type=float, default=math.pi)
    s.add_argument("--lowered", action="store_true", help="lower MCPhase gates first")

    def add_output(s):
        s.add_argument("--out", required=True)
        s.add_argument("--format", choices=("csv", "json"), default="csv")

    s = sub.add_parser("sweep-lambda", help="solve on a log-spaced lambda grid")
    s.add_argument("--points", type=_positive_int, default=200)
    s.add_argument("--lambda-min", type=float, default=2.0**-16)
    s.add_argument("--lambda-max", type=float, default=0.25)
    s.add_argument("--alpha", type=float, default=math.pi)
    s.add_argument("--workers", type=_positive_int, default=1)
    add_output(s)

    s = sub.add_parser("sweep-alpha", help="minimal k over an oracle-phase grid")
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--points", type=_positive_int, default=721)
    s.add_argument("--k-cap", type=_positive_int)
    s.add_argument("--workers", type=_positive_int, default=1)
    add_output(s)

    s = sub.add_parser("trajectory", help="Bloch-sphere points of a solved schedule")
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--k", type=_positive_int)
    s.add_argument("--alpha", type=float, default=math.pi)
    add_output(s)

    s = sub.add_parser("emit-qasm", help="write the D2p circuit as OpenQASM 3")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--marked", type=_marked_list, required=True)
    s.add_argument("--k", type=_positive_int)
    s.add_argument("--alpha", type=float, default=math.pi)
    s.add_argument("--lowered", action="store_true")
    s.add_argument("--out", required=True)
    return p


def _validate(args):
    lam = getattr(args, "lam", None)
    if lam is not None and not 0.0 < lam <= 0.25:
        if 0.25 < lam < 1.0:
            raise DomainError(f"lambda={lam!r}: {solver.LARGE_LAMBDA_MESSAGE}")
        raise DomainError(f"lambda must lie in (0, 1/4], got {lam!r}")
    if args.command == "sweep-lambda":
        if not 0.0 < args.lambda_min <= args.lambda_max <= 0.25:
            raise DomainError("need 0 < lambda-min <= lambda-max <= 1/4")
    for name in ("alpha",):
        v = getattr(args, name, None)
        if v is not None and not math.isfinite(v):
            raise DomainError(f"--{name} must be finite")
    if hasattr(args, "marked"):
        spec = sv.SearchSpec(args.n, args.marked)
        if spec.lam > 0.25:
            raise DomainError(f"lambda={spec.lam!r}: {solver.LARGE_LAMBDA_MESSAGE}")
        args.spec = spec
    if args.command in ("solve", "trajectory") and args.k is not None and args.alpha == math.pi:
        if args.k < solver.k_opt(lam):
            raise DomainError(f"--k {args.k} is below k_opt={solver.k_opt(lam)}")


def _emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _schedule_for(lam, k, alpha):
    return solver.solve(lam, k, alpha)


def _cmd_solve(args):
    sched = _schedule_for(args.lam, args.k, args.alpha)
    out = sched.as_dict()
    out["success"] = sched.success
    _emit(out)


def _d2p_circuit(args):
    sched = _schedule_for(args.spec.lam, args.k, args.alpha)
    c = cq.build_d2p(args.spec, sched)
    if args.lowered:
        c = cq.lower_all(c)
    return sched, c


def _cmd_simulate(args):
    sched, c = _d2p_circuit(args)
    state = sv.run(c)
    _emit(
        {
            "n": args.n,
            "marked": list(args.spec.marked),
            "k": sched.k,
            "theta1": sched.theta1,
            "theta2": sched.theta2,
            "lowered": args.lowered,
            "gates": len(c),
            "success": sv.success_probability(state, args.spec.marked),
            "per_marked": {str(i): abs(state[i]) ** 2 for i in args.spec.marked},
        }
    )


def _cmd_sweep_lambda(args):
    grid = experiments.default_lambda_grid(args.points, args.lambda_min, args.lambda_max)
    recs = experiments.sweep_lambda(grid, args.alpha, workers=args.workers)
    experiments.export(recs, args.out, args.format)
    _emit({"path": args.out, "rows": len(recs), "failed": sum(not r.solved for r in recs)})


def _cmd_sweep_alpha(args):
    grid = experiments.default_alpha_grid(args.points)
    recs = experiments.sweep_alpha(args.lam, grid, args.k_cap, workers=args.workers)
    experiments.export(recs, args.out, args.format)
    _emit({"path": args.out, "rows": len(recs), "failed": sum(not r.solved for r in recs)})


def _cmd_trajectory(args):
    sched = _schedule_for(args.lam, args.k, args.alpha)
    points = experiments.schedule_trajectory(sched)
    experiments.export(points, args.out, args.format)
    _emit({"path": args.out, "points": len(points), "k": sched.k})


def _cmd_emit_qasm(args):
    sched, c = _d2p_circuit(args)
    text = cq.to_qasm(c)
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(e.errno, f"cannot write {args.out}: {e.strerror}") from e
    _emit({"path": args.out, "gates": len(c), "k": sched.k})


COMMANDS = {
    "solve": _cmd_solve,
    "simulate": _cmd_simulate,
    "sweep-lambda": _cmd_sweep_lambda,
    "sweep-alpha": _cmd_sweep_alpha,
    "trajectory": _cmd_trajectory,
    "emit-qasm": _cmd_emit_qasm,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        COMMANDS[args.command](args)
    except DomainError as e:
        print(f"d2p: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NoConvergence as e:
        print(f"d2p: no convergence: {e}", file=sys.stderr)
        return EXIT_NOCONV
    except OSError as e:
        print(f"d2p: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK
