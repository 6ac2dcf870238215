"""Command-line interface.

Exit codes: 0 every emitted report passes, 1 a verification failed,
2 usage or parse error. Stdout carries only the report; logs go to stderr.
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from src.app_config import OUTPUT_FORMATS, configure_logging, load_config
from src.errors import LatticeError
from src.exact_linalg import signature
from src.hassett import (
    STAR_CONDITION,
    divisor_label,
    pair_witness,
    rational_loci,
    satisfies_star,
    sweep,
    triple_witness,
    verify,
)
from src.lattice_core import build_ambient, is_even, primitive_sublattice
from src import utils

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _emit(args, command: str, inputs: Dict[str, Any], report: Dict[str, Any], text: str) -> None:
    if args.format == "json":
        document = utils.build_document(command, inputs, report, args.config["report"]["schema_version"])
        utils.write_output(utils.dumps_document(document), args.output)
    else:
        utils.write_output(text, args.output)


def _require_star(**values: int) -> None:
    for name, d in values.items():
        if not satisfies_star(d):
            raise UsageError(f"--{name} {d} is not a Hassett discriminant: need {STAR_CONDITION}")


def cmd_admissible(args) -> int:
    if args.max < 7:
        raise UsageError(f"--max must be at least 7, got {args.max}")
    labels = [divisor_label(d) for d in range(7, args.max + 1)]
    rows = [label for label in labels if (label.satisfies_star if args.star_only else label.admissible)]
    report = {
        "sieve": "star" if args.star_only else "admissible",
        "rows": [{"d": r.d, "star": r.satisfies_star, "admissible": r.admissible} for r in rows],
    }
    text = "d star admissible\n" + "".join(
        f"{r.d} {str(r.satisfies_star).lower()} {str(r.admissible).lower()}\n" for r in rows
    )
    _emit(args, "admissible", {"max": args.max, "star_only": args.star_only}, report, text)
    return EXIT_PASS


def _witness_command(args, command: str, builder) -> int:
    _require_star(d1=args.d1, d2=args.d2)
    report = verify(builder(args.d1, args.d2))
    _emit(args, command, {"d1": args.d1, "d2": args.d2}, utils.report_to_dict(report), utils.render_report_text(report))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_witness(args) -> int:
    return _witness_command(args, "witness", pair_witness)


def cmd_triple(args) -> int:
    return _witness_command(args, "triple", triple_witness)


def cmd_rational_loci(args) -> int:
    _require_star(d=args.d)
    loci = rational_loci(args.d)
    _emit(args, "rational-loci", {"d": args.d}, utils.rational_loci_to_dict(loci), utils.render_rational_loci_text(loci))
    return EXIT_PASS if loci.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    report = verify(utils.read_witness_file(args.input))
    _emit(args, "verify", {"input": args.input}, utils.report_to_dict(report), utils.render_report_text(report))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    max_d = args.max if args.max is not None else args.config["sweep"]["max_d"]
    if max_d < 8:
        raise UsageError(f"--max must be at least 8, got {max_d}")
    jobs = args.jobs if args.jobs is not None else args.config["sweep"]["jobs"]
    progress = args.progress or args.config["sweep"].get("progress", False)
    summary = sweep(max_d, jobs=max(1, jobs), progress=progress)
    if args.csv:
        utils.export_sweep_csv(summary, args.csv)
    # inputs omit jobs: the document must not depend on the worker count
    _emit(args, "sweep", {"max": max_d}, utils.sweep_to_dict(summary), utils.render_sweep_text(summary))
    return EXIT_PASS if summary.passed else EXIT_FAIL


def ambient_facts() -> Dict[str, Any]:
    ambient = build_ambient()
    l0 = primitive_sublattice()
    facts = {
        "signature": list(ambient.gram.signature),
        "abs_det": abs(ambient.gram.det),
        "rank": ambient.gram.dim,
        "l0": {
            "rank": l0.rank,
            "even": is_even(l0.gram),
            "abs_det": abs(l0.gram.det),
            "signature": list(signature(l0.gram)),
        },
    }
    facts["checks_pass"] = (
        facts["signature"] == [21, 2, 0]
        and facts["abs_det"] == 1
        and facts["l0"]["rank"] == 22
        and facts["l0"]["even"]
        and facts["l0"]["abs_det"] == 3
    )
    return facts


def cmd_ambient(args) -> int:
    facts = ambient_facts()
    l0 = facts["l0"]
    text = (
        f"convention: {build_ambient().convention}\n"
        f"L: rank {facts['rank']}, signature ({facts['signature'][0]},{facts['signature'][1]}), |det| {facts['abs_det']}\n"
        f"L0: rank {l0['rank']}, signature ({l0['signature'][0]},{l0['signature'][1]}), "
        f"even {str(l0['even']).lower()}, |det| {l0['abs_det']}\n"
    )
    if args.check:
        text += "PASS\n" if facts["checks_pass"] else "FAIL\n"
    report = {key: (str(value) if key == "abs_det" else value) for key, value in facts.items()}
    _emit(args, "ambient", {"check": args.check}, report, text)
    if args.check and not facts["checks_pass"]:
        return EXIT_FAIL
    return EXIT_PASS


def _add_global_flags(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=default, help="output format")
    parser.add_argument("--output", metavar="PATH", default=default, help="write the report to PATH instead of stdout")
    parser.add_argument(
        "-v", "--verbose", action="store_true",
        default=False if default is None else default, help="debug logging on stderr",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hassett-lattice",
        description="Construct and verify lattice witnesses for intersections of Hassett divisors.",
    )
    _add_global_flags(parser, default=None)
    # accepted after the subcommand too; SUPPRESS keeps a value given before it
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("admissible", parents=[common], help="list (*) / admissible discriminants")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--star-only", action="store_true", help="list every (*) value instead of admissible ones")
    p.set_defaults(func=cmd_admissible)

    for name, func, help_text in (
        ("witness", cmd_witness, "rank-3 witness for C_d1 meeting C_d2"),
        ("triple", cmd_triple, "rank-4 witness for C_14, C_d1 and C_d2"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--d1", type=int, required=True)
        p.add_argument("--d2", type=int, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("rational-loci", parents=[common], help="three witnesses meeting C_14, C_26, C_38")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_rational_loci)

    p = sub.add_parser("verify", parents=[common], help="verify a basis file or a JSON witness document")
    p.add_argument("input", metavar="INPUT_PATH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="verify every (*) pair up to --max")
    p.add_argument("--max", type=int, default=None, help="largest discriminant (default sweep.max_d from config)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default from config)")
    p.add_argument("--csv", metavar="PATH", default=None, help="also export the per-pair table as CSV")
    p.add_argument("--progress", action="store_true", help="progress bar on stderr")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ambient", parents=[common], help="facts about L and L0")
    p.add_argument("--check", action="store_true", help="exit 1 unless every ambient fact holds")
    p.set_defaults(func=cmd_ambient)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.config = load_config()
    except (FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args.config, verbose=args.verbose)
    if args.format is None:
        args.format = args.config["output"]["format"]
    logger.debug("running %s with format %s", args.command, args.format)
    try:
        return args.func(args)
    except (UsageError, LatticeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
