import argparse
import json
import logging
import sys

from config.load_configs import CHECK_CONFIG, CLI_CONFIG, FELL_BUNDLE_CONFIG
from src.commands.commands import (CHECK_KINDS, EXIT_INPUT_ERROR, cmd_check, cmd_classify, cmd_fell_demo,
                                   cmd_obstruction, cmd_selftest, cmd_tdual)
from src.commands.selftest import SELFTEST_SUITES
from src.fellbundle.suites import FELL_SUITES
from src.serialisation import dumps, read_json, write_json

INPUT_ERRORS = (ValueError, KeyError, IndexError, json.JSONDecodeError, FileNotFoundError)


def parse_ints(text):
    try:
        return [int(value) for value in text.split(",") if value.strip() != ""]
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"Expected comma-separated integers, got {text!r}.") from error


def add_global_flags(parser, suppress):
    """
        --mode, --tol, --seed, --json-out and --verbose, accepted before or after
        the subcommand.
    """
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parser.add_argument("--mode", choices=("exact", "float"), default=default(CLI_CONFIG.mode),
                        help="Exact rational / cyclotomic arithmetic or floating point.")
    parser.add_argument("--tol", type=float, default=default(None),
                        help=f"Float mode tolerance (default {CLI_CONFIG.tol}; {FELL_BUNDLE_CONFIG.tolerance} for fell-demo).")
    parser.add_argument("--seed", type=int, default=default(CHECK_CONFIG.seed), help="Seed for sampled checks.")
    parser.add_argument("--json-out", default=default(None), help="Write the JSON result here instead of stdout.")
    parser.add_argument("--verbose", action="store_true", default=default(False), help="Debug logging.")


def build_parser():
    parser = argparse.ArgumentParser(prog="run.py", description="Crossed-module, Brauer-class and T-duality checks.")
    add_global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    add_global_flags(common, suppress=True)
    subparsers = parser.add_subparsers(dest="command", required=True)

    check = subparsers.add_parser("check", parents=[common], help="Run a law checker on a JSON input.")
    check.add_argument("kind", choices=CHECK_KINDS)
    check.add_argument("input", help="Path to the JSON input.")

    for name, help_text in (("classify", "Classify a fibre action."),
                            ("obstruction", "Assemble the lifting obstruction from subtorus DD values."),
                            ("tdual", "Decide the T-dual type of a family over a base graph.")):
        subparser = subparsers.add_parser(name, parents=[common], help=help_text)
        subparser.add_argument("input", help="Path to the JSON input.")

    fell = subparsers.add_parser("fell-demo", parents=[common], help="Run a Fell-bundle suite on the grid model.")
    fell.add_argument("--n", type=int, default=FELL_BUNDLE_CONFIG.n)
    fell.add_argument("--N", type=int, default=FELL_BUNDLE_CONFIG.N)
    fell.add_argument("--m", type=parse_ints, default=FELL_BUNDLE_CONFIG.m,
                      help="Comma-separated integral tricharacter coefficients.")
    fell.add_argument("--suite", choices=FELL_SUITES, default="axioms")
    fell.add_argument("--save", default=None, help="Save the first sample's tables to this zarr path.")

    selftest = subparsers.add_parser("selftest", parents=[common], help="Run the invariant suites.")
    selftest.add_argument("--suite", action="append", choices=SELFTEST_SUITES, default=None)
    selftest.add_argument("--stress", action="store_true")
    selftest.add_argument("--save-stats", action="store_true", default=None)
    return parser


def dispatch(args):
    tol = CLI_CONFIG.tol if args.tol is None else args.tol
    if args.command == "check":
        return cmd_check(args.kind, read_json(args.input), args.mode, tol, args.seed)
    if args.command == "classify":
        return cmd_classify(read_json(args.input), args.mode, tol, args.seed)
    if args.command == "obstruction":
        return cmd_obstruction(read_json(args.input))
    if args.command == "tdual":
        return cmd_tdual(read_json(args.input), args.mode)
    if args.command == "fell-demo":
        return cmd_fell_demo(args.n, args.N, args.m, args.suite, args.seed, args.mode,
                             FELL_BUNDLE_CONFIG.tolerance if args.tol is None else args.tol, args.save)
    return cmd_selftest(args.suite, args.stress, args.save_stats, args.seed, progress=args.json_out is not None)


def summarise(command, payload):
    if command == "check" or command == "fell-demo":
        return f"{payload['law']}: {payload['samples']} samples, {len(payload['failures'])} failures"
    if command == "classify":
        return f"m = {payload['m']}, dd = {payload['dd']}, theta = {payload['theta']}"
    if command == "obstruction":
        return f"Liftable: {payload['liftable']}"
    if command == "tdual":
        return f"Verdict: {payload['verdict']}"
    return "\n".join(f"{name}: {'passed' if result['passed'] else 'FAILED'} ({result['seconds']} s)"
                     for name, result in payload["suites"].items())


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)

    try:
        payload, code = dispatch(args)
    except INPUT_ERRORS as error:
        print("-----", file=sys.stderr)
        print(f"Input error: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if args.json_out is None:
        print(dumps(payload))
    else:
        write_json(payload, args.json_out)
        print("-----")
        print(summarise(args.command, payload))
        print(f"Result written to {args.json_out}")
        print("-----")
    return code


if __name__ == "__main__":
    sys.exit(main())
