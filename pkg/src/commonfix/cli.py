"""Command-line interface: ``verify``, ``solve``, ``endpoint`` and ``bounds``.

Exit codes: 0 success, 1 negative result, 2 certificate error,
3 max-iter, 4 stalled, 64 usage, 65 parse.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .contraction import CertificateError, check_gauge_conditions, check_weakly_contractive
from .endpoint import find_common_endpoint
from .metric import DomainError
from .problem import ProblemError, load_problem
from .solver import SolverConfig, check_recurrence, iterate_duality, rate_bound, verify_limit_fixed

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_CERTIFICATE = 2
EXIT_MAX_ITER = 3
EXIT_STALLED = 4
EXIT_USAGE = 64
EXIT_PARSE = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pairs_arg(value: str):
    if value == "all":
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'all' or a sample size, got {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("sample size must be >= 1")
    return n


def _int_list(value: str) -> list[int]:
    """``"3"``, ``"1,2,5"`` or an inclusive range ``"1:10"``."""
    out = []
    try:
        for part in value.split(","):
            if ":" in part:
                lo, hi = part.split(":", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {value!r}")
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("values must be integers >= 1")
    return out


def _load(path: str):
    try:
        return load_problem(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror}", file=sys.stderr)
    except ProblemError as exc:
        for ln, msg in exc.errors:
            where = f"{path}:{ln}" if ln else path
            print(f"{where}: {msg}", file=sys.stderr)
    return None


def _declared(problem) -> str:
    return (f"declared: alpha u.s.c. = {str(problem.alpha_usc).lower()}, "
            f"phi u.s.c. = {str(problem.phi_usc).lower()} (not verified)")


def cmd_verify(args) -> int:
    problem = _load(args.problem)
    if problem is None:
        return EXIT_PARSE
    space, S, T = problem.space, problem.S, problem.T
    try:
        spec = problem.spec()
        report = spec.check(space, S, T, pairs=args.pairs, seed=args.seed)
        print(report.render(space))
        if spec.gap is not None and S == T:
            print(check_weakly_contractive(space, T, spec.gap, args.pairs, args.seed).render(space))
        if spec.phi is not None:
            print(check_gauge_conditions(spec.phi).render())
    except CertificateError as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    print(_declared(problem))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_solve(args) -> int:
    problem = _load(args.problem)
    if problem is None:
        return EXIT_PARSE
    space, S, T = problem.space, problem.S, problem.T
    try:
        x0 = space.lookup(args.x0)
    except DomainError as exc:
        print(f"error: invalid --x0: {exc}", file=sys.stderr)
        return EXIT_USAGE
    mode = {"argmin": "argmin", "slack": "epsilon-slack"}[args.mode]
    config = SolverConfig(selection_mode=mode, seed=args.seed, residual_tolerance=args.tol,
                          max_iterations=args.max_iter, check_certificate=not args.unchecked)
    try:
        spec = problem.spec()
        alpha = spec.alpha_oracle(space, S, T)
        trace = iterate_duality(space, S, T, alpha, x0, config)
        limit = verify_limit_fixed(space, S, T, alpha, trace, tol=args.tol)
    except CertificateError as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    if args.trace:
        trace.to_csv(args.trace, space)
    rs, rt = trace.residuals[-1]
    print(f"{trace.terminated}: point {space.label(trace.final_point)} after {trace.steps} steps")
    print(f"residuals: d(x,Sx) = {rs:.6g}, d(x,Tx) = {rt:.6g}")
    if trace.alphas:
        gamma = max(trace.alphas)
        print(f"trace max alpha = {gamma:.6g} ({'< 1' if gamma < 1 else 'NOT < 1'}); "
              f"gap recurrence {'holds' if check_recurrence(trace.step_gaps, gamma) else 'fails'}")
    if spec.phi is not None:
        g = check_gauge_conditions(spec.phi)
        print(f"sampled limsup t->0 phi(t)/t = {g.small_t_ratio:.10g} "
              f"({'pass' if g.small_t_ok else 'fail'}"
              f"{', inconclusive' if g.small_t_inconclusive else ''})")
    print(f"limit check: {'common fixed point' if limit.fixed else 'not fixed'}, "
          f"tail max alpha(x_2k, x*) = {limit.tail_alpha_max:.6g}")
    print(_declared(problem))
    if trace.terminated == "converged":
        return EXIT_OK
    return EXIT_STALLED if trace.terminated == "stalled" else EXIT_MAX_ITER


def cmd_endpoint(args) -> int:
    problem = _load(args.problem)
    if problem is None:
        return EXIT_PARSE
    try:
        result = find_common_endpoint(problem.space, problem.S, problem.T, problem.spec(),
                                      tol=args.tol)
    except CertificateError as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    print(result.render(problem.space))
    return EXIT_OK if result.found else EXIT_NEGATIVE


def cmd_bounds(args) -> int:
    if not 0 <= args.gamma < 1:
        print("error: --gamma must lie in [0, 1)", file=sys.stderr)
        return EXIT_USAGE
    print(f"{'gamma':>8} {'n':>4} {'m':>4}  {'regime':<16} bound")
    for n in args.n:
        for m in args.m:
            b = rate_bound(args.gamma, n, m)
            print(f"{b.gamma:>8g} {b.n:>4} {b.m:>4}  {b.regime:<16} {b.value:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="commonfix",
                     description="Common fixed points and endpoints of multi-valued contraction pairs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="check the declared contraction certificate")
    p.add_argument("problem")
    p.add_argument("--pairs", type=_pairs_arg, default="all", help="'all' or a random sample size")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="run the alternating selection iteration")
    p.add_argument("problem")
    p.add_argument("--x0", required=True, help="start point (label or grid coordinate)")
    p.add_argument("--mode", choices=("argmin", "slack"), default="argmin")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--trace", metavar="PATH", help="write the iteration trace as CSV")
    p.add_argument("--unchecked", action="store_true",
                   help="do not abort when a visited pair violates the certificate")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("endpoint", help="look for the unique common endpoint")
    p.add_argument("problem")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_endpoint)

    p = sub.add_parser("bounds", help="a-priori Cauchy bounds for the gap recurrence")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--n", type=_int_list, required=True, help="e.g. 3, 1,2,5 or 1:10")
    p.add_argument("--m", type=_int_list, default=[1])
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "max_iter", 1) < 1:
        print("error: --max-iter must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "tol", None) is not None and args.tol <= 0 and args.command == "solve":
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
