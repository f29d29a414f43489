"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 the input could
not be parsed, 3 the parameters are unsupported (parity obstruction, k out
of range, dimension too small).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, experiments, jsonio
from .factorization import FactorizationError, factor_into_k_involutions, verify_factorization
from .minkowski import Isometry, IsometryError, Tolerances, random_isometry

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_PARAM = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, message: str, code: int = EXIT_PARSE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}", EXIT_PARSE)


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _orientation(text: str) -> int:
    if text not in ("+1", "1", "-1"):
        raise argparse.ArgumentTypeError("orientation must be +1 or -1")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kinvol", description="Factor hyperbolic isometries into k-involutions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("factor", help="factor an isometry into k-involutions")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--input", required=True, help="matrix JSON file ('-' for stdin)")
    f.add_argument("--tol", type=_positive_float, help="reconstruction tolerance")
    f.add_argument("--output", help="write the factorisation JSON here instead of stdout")

    v = sub.add_parser("verify", help="re-certify a factorisation JSON file")
    v.add_argument("--input", required=True)
    v.add_argument("--tol", type=_positive_float)

    b = sub.add_parser("bounds", help="length bounds and dimensions for 2 <= n <= n-max")
    b.add_argument("--n-max", type=int, required=True)
    b.add_argument("--format", choices=["csv", "json"], default="csv")

    ph = sub.add_parser("phi", help="Phi(n) proxy table")
    ph.add_argument("--n-max", type=int, required=True)

    r = sub.add_parser("rank", help="rank of the product map's differential")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--m", type=int, help="number of factors (default: lower bound - 1, at least 1)")
    r.add_argument("--trials", type=int, default=20)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--jobs", type=int, default=1, help="worker threads for independent trials")

    rnd = sub.add_parser("random", help="emit a random isometry as matrix JSON")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--orientation", type=_orientation, default=1)
    rnd.add_argument("--seed", type=int, default=0)
    return p


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _tolerances(tol: float | None) -> Tolerances:
    base = Tolerances.from_env()
    return base if tol is None else base.replace(tol_recon=tol)


def _cmd_factor(args, out) -> int:
    tol = _tolerances(args.tol)
    try:
        M = jsonio.matrix_from_json(_read_json(args.input))
        g = Isometry(M, tol)
    except (jsonio.FormatError, IsometryError) as exc:
        raise UsageError(f"invalid input matrix: {exc}") from exc
    try:
        result = factor_into_k_involutions(g, args.k, tol)
    except FactorizationError as exc:
        raise UsageError(f"{type(exc).__name__}: {exc}", EXIT_PARAM) from exc
    text = jsonio.dumps(jsonio.factorization_to_json(result))
    summary = (
        f"n={g.n} k={result.k} length={result.length} bound={result.bound} "
        f"residual={result.residual:.3e}"
    )
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(summary, file=out)
    else:
        out.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK if verify_factorization(result, tol).ok else EXIT_CHECK


def _cmd_verify(args, out) -> int:
    tol = _tolerances(args.tol)
    try:
        result = jsonio.factorization_from_json(_read_json(args.input))
    except (jsonio.FormatError, IsometryError) as exc:
        raise UsageError(f"invalid factorisation file: {exc}") from exc
    report = verify_factorization(result, tol)
    for line in report.lines():
        print(line, file=out)
    print("OK" if report.ok else f"FAILED ({len(report.failures())} checks)", file=out)
    return EXIT_OK if report.ok else EXIT_CHECK


def _cmd_bounds(args, out) -> int:
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2", EXIT_PARAM)
    rows = bounds.bounds_table(args.n_max)
    if args.format == "csv":
        out.write(bounds.bounds_csv(rows))
    else:
        out.write(jsonio.dumps([r.__dict__ for r in rows]))
    return EXIT_OK


def _cmd_phi(args, out) -> int:
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2", EXIT_PARAM)
    out.write(bounds.phi_csv(bounds.phi_asymptotic_check(args.n_max)))
    return EXIT_OK


def _cmd_rank(args, out) -> int:
    n, k = args.n, args.k
    if n < 2 or not 1 <= k <= n - 1:
        raise UsageError(f"need n >= 2 and 1 <= k <= n-1, got n={n}, k={k}", EXIT_PARAM)
    if args.trials < 1 or args.jobs < 1:
        raise UsageError("--trials and --jobs must be positive", EXIT_PARAM)
    m = args.m if args.m is not None else max(bounds.lower_bound(n, k) - 1, 1)
    if m < 1:
        raise UsageError("--m must be at least 1", EXIT_PARAM)
    report = experiments.rank_experiment(n, [k] * m, args.trials, args.seed, jobs=args.jobs)
    out.write(jsonio.dumps(report.to_json()))
    return EXIT_OK if not report.violations else EXIT_CHECK


def _cmd_random(args, out) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2", EXIT_PARAM)
    out.write(jsonio.dumps(jsonio.matrix_to_json(random_isometry(args.n, args.orientation, args.seed))))
    return EXIT_OK


COMMANDS = {
    "factor": _cmd_factor,
    "verify": _cmd_verify,
    "bounds": _cmd_bounds,
    "phi": _cmd_phi,
    "rank": _cmd_rank,
    "random": _cmd_random,
}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
