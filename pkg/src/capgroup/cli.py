"""Command-line entry point: ``capgroup {validate,product,evolve,verify,exp}``.

Exit codes: 0 success, 1 domain failure (non-invertible event, failed law),
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from importlib import resources
from pathlib import Path

from .algebra import NotInvertibleError, centered_product, f_anti_product, f_product
from .capfactor import TOL_RECIP, FactorRangeError, FactorSpecError, load_factor, validate_factor
from .events import format_event, parse_event
from .evolution import EvolutionCurve, exp_map, homomorphism_residual, time_grid, write_csv
from .report import format_table, reports_to_json
from .verify import LAW_IDS, UnknownLawError, VerifyConfig, all_passed, run_law, with_overrides

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_factor_path() -> Path:
    return Path(str(resources.files("capgroup") / "data" / "exponential_5pct.json"))


def _event_arg(text):
    try:
        return parse_event(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_global(p, suppress=False):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--factor", default=d(None), help="factor spec JSON (default: shipped 5%% exponential)")
    p.add_argument("--out", default=d("-"), help="output path, '-' for standard output")
    p.add_argument("--seed", type=int, default=d(None), help="seed for randomized checks")
    p.add_argument("--atol", type=float, default=d(None), help="absolute tolerance (also the reciprocity tolerance)")
    p.add_argument("--rtol", type=float, default=d(None), help="relative tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capgroup", description=__doc__.splitlines()[0])
    _add_global(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the factor axioms")
    _add_global(p, suppress=True)

    p = sub.add_parser("product", help="multiply two events")
    _add_global(p, suppress=True)
    p.add_argument("e", type=_event_arg, metavar="t,h,c")
    p.add_argument("e2", type=_event_arg, metavar="t,h,c")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--anti", action="store_true", help="use the anti-product")
    mode.add_argument("--center", type=_event_arg, metavar="t0,h0,c0", help="product centered at this event")

    p = sub.add_parser("evolve", help="sample the evolution curve of an event as CSV")
    _add_global(p, suppress=True)
    p.add_argument("e0", type=_event_arg, metavar="t0,h0,c0")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=10)

    p = sub.add_parser("verify", help="run the numerical law checks")
    _add_global(p, suppress=True)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--law", action="append", help="law id (repeatable)")
    which.add_argument("--all", action="store_true")
    p.add_argument("--samples", type=int, default=None)

    p = sub.add_parser("exp", help="tangent of the exponential map at (t0, e0)")
    _add_global(p, suppress=True)
    p.add_argument("t0", type=float)
    p.add_argument("e0", type=_event_arg, metavar="t0,h0,c0")
    return parser


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _factor(args):
    return load_factor(args.factor or default_factor_path())


def _config(args) -> VerifyConfig:
    try:
        return with_overrides(
            VerifyConfig(),
            seed=args.seed,
            atol=args.atol,
            rtol=args.rtol,
            tol_recip=args.atol,
            samples=getattr(args, "samples", None),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_validate(args) -> int:
    report = validate_factor(_factor(args), tol_recip=args.atol if args.atol is not None else TOL_RECIP)
    with _output(args.out) as out:
        print(format_table([report]), file=out)
        for c in report.checks:
            print(f"  {c.name}: {c.max_residual:.3e} (tol {c.tolerance:.1e}) {'ok' if c.passed else 'FAIL'}", file=out)
        for note in report.notes:
            print(f"  note: {note}", file=out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_product(args) -> int:
    f = _factor(args)
    if args.center is not None:
        try:
            result = centered_product(f, args.center, args.e, args.e2)
        except NotInvertibleError:
            print("error: center not invertible", file=sys.stderr)
            return EXIT_FAIL
    elif args.anti:
        result = f_anti_product(f, args.e, args.e2)
    else:
        result = f_product(f, args.e, args.e2)
    with _output(args.out) as out:
        print(format_event(result), file=out)
    return EXIT_OK


def cmd_evolve(args) -> int:
    f = _factor(args)
    try:
        ts = time_grid(args.start, args.stop, args.steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _output(args.out) as out:
        write_csv(EvolutionCurve(args.e0, f), ts, out)
    return EXIT_OK


def cmd_verify(args) -> int:
    f = _factor(args)
    cfg = _config(args)
    ids = LAW_IDS if args.all else args.law
    try:
        reports = [run_law(law_id, f, cfg) for law_id in ids]
    except UnknownLawError as exc:
        raise UsageError(str(exc)) from None
    table = format_table(reports)
    with _output(args.out) as out:
        print(reports_to_json(reports), file=out)
    print(table, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK if all_passed(reports) else EXIT_FAIL


def cmd_exp(args) -> int:
    f = _factor(args)
    cfg = _config(args)
    try:
        curve, tan = exp_map(f, args.t0, args.e0)
    except NotInvertibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    span = cfg.time_range
    pairs = [(args.t0 + span * (i / 10 - 1), args.t0 + span * (j / 10 - 1)) for i in range(21) for j in range(0, 21, 4)]
    residual = homomorphism_residual(curve, pairs, floor=cfg.floor)
    ok = residual <= cfg.rtol
    with _output(args.out) as out:
        print(format_event(tan.direction), file=out)
        print(
            f"# homomorphism residual {residual:.3e} over {len(pairs)} pairs (tol {cfg.rtol:.1e}): {'PASS' if ok else 'FAIL'}",
            file=out,
        )
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "validate": cmd_validate,
    "product": cmd_product,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "exp": cmd_exp,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, FactorSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FactorRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
