"""
Command-line interface for the characteristic-two verifier.

Subcommands:
    verify   run verification suites and print CHECK lines
    lie      compute so(7) / so(8) and optionally print a basis
    census   inspect a quadratic form file
    fiber    run the fiber-model checks for one model

Exit codes: 0 all checks passed, 1 some check failed, 2 invalid input.
"""
import os
import argparse
import logging
import sys
from typing import List, Optional

# Add the project root directory to the Python path
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(current_dir)
sys.path.insert(0, project_root)

# Now import our modules
from config import DEFAULT_SEED, ENUMERATION_BOUND, LOG_LEVEL, WORKERS
from src.fibermodel import (
    KINDS,
    build_model,
    descent_obstruction,
    phi_class_in_quotient,
    verify_twist_identity,
)
from src.form_files import FormFileError, parse_form_file
from src.ortho import SCHEME_TANGENT, SMOOTH, enumerate_orthogonal_group, lie_algebra
from src.quadform import count_isotropic_vectors, so7_form, so8_form
from src.reports import Report
from src.scalars import GF2, TOWER, gf2k
from src.verifier import SUITES, VerifyOptions, run_suite

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

VARIANT_FLAGS = {"smooth": SMOOTH, "scheme": SCHEME_TANGENT}
FIBER_CHECKS = ("twist", "involution", "descent", "phi-class", "all")
WORKERS_HELP = ('Thread count for sharded enumeration. Shards are pure-Python CPU work sharing the interpreter lock, '
                'so extra workers check that output is worker-independent rather than speed it up')


def cmd_verify(args) -> int:
    options = VerifyOptions(n=args.n, k=args.k, seed=args.seed, workers=args.workers)
    return run_suite(args.suite, options)


def cmd_lie(args) -> int:
    field = gf2k(args.k)
    form = so8_form(field) if args.group == "so8" else so7_form(field)
    algebra = lie_algebra(form, VARIANT_FLAGS[args.variant])
    report = Report()
    report.info(f"lie.{args.group}.{args.variant}.dim", dim=algebra.dim, field=field.name)
    sys.stdout.write(report.render())
    if args.print_basis:
        for i, m in enumerate(algebra.matrices(), start=1):
            print(f"BASIS {i}")
            print(m)
    return 0


def cmd_census(args) -> int:
    form = parse_form_file(args.form)
    report = Report()
    radical = form.radical()
    report.check("census.nondegenerate", form.is_nondegenerate(), dim=form.dim, field=form.field.name,
                 witness=",".join(form.field.format(x) for x in radical.basis[0]) if radical.dim else None)
    report.info("census.radical", dim=radical.dim,
                generators=";".join(",".join(form.field.format(x) for x in b) for b in radical.basis) or None)
    if form.field.is_finite and form.field.k * form.dim <= ENUMERATION_BOUND:
        report.info("census.isotropic", count=count_isotropic_vectors(form, workers=args.workers))
    else:
        report.info("census.isotropic", count=None, reason="not enumerable")
    if args.group_order:
        group = enumerate_orthogonal_group(form, args.workers)
        report.info("census.group-order", order=group.order, dickson_kernel=group.dickson_kernel_order)
    sys.stdout.write(report.render())
    return report.exit_code


def cmd_fiber(args) -> int:
    checks = FIBER_CHECKS[:-1] if args.check == "all" else (args.check,)
    report = Report()
    prefix = f"fiber.{args.kind}.pad{args.pad}"
    if "twist" in checks or "involution" in checks:
        r = verify_twist_identity(build_model(args.kind, args.pad, TOWER), TOWER.s())
        if "twist" in checks:
            report.check(f"{prefix}.twist", r["holds"], s=r["s"], witness=r["witness"])
        if "involution" in checks:
            report.check(f"{prefix}.involution", r["involution"], s=r["s"],
                         witness=None if r["involution_defect"] is None else r["involution_defect"].support())
    if "descent" in checks:
        r = descent_obstruction(args.kind, args.pad)
        report.check(f"{prefix}.descent.K", r["graph_identity"] and not r["k_square"],
                     witness=r["k_witness"] if r["k_square"] else r["graph_identity_witness"])
        report.check(f"{prefix}.descent.Kprime", r["kprime_isotropic"], **{"lambda": r["kprime_witness"]},
                     witness=r["kprime_restricted"])
    if "phi-class" in checks:
        r = phi_class_in_quotient(build_model(args.kind, args.pad, GF2))
        failed = [name for name in ("in_g", "class_nonzero", "in_hom_layer") if not r[name]]
        report.check(f"{prefix}.phi-class", not failed,
                     n=r["n"], nonzero=r["class_nonzero"], hom_layer=r["in_hom_layer"],
                     witness=",".join(failed) or None)
    sys.stdout.write(report.render())
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Characteristic-two quadratic form and orthogonal Lie algebra verifier')
    subparsers = parser.add_subparsers(dest='command', required=True)

    verify = subparsers.add_parser('verify', help='Run verification suites')
    verify.add_argument('--suite', '-s', default='all', choices=sorted(SUITES) + ['all'], help='Suite to run')
    verify.add_argument('--n', type=int, help='Restrict dimension-indexed suites to this n')
    verify.add_argument('--k', type=int, help='Work over GF(2^k) where a suite allows it')
    verify.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Seed for randomized sweeps')
    verify.add_argument('--workers', '-w', type=int, default=WORKERS, help=WORKERS_HELP)
    verify.set_defaults(handler=cmd_verify)

    lie = subparsers.add_parser('lie', help='Compute so(7) or so(8)')
    lie.add_argument('--group', '-g', required=True, choices=['so7', 'so8'], help='Which algebra')
    lie.add_argument('--variant', default='smooth', choices=sorted(VARIANT_FLAGS), help='Lie algebra variant')
    lie.add_argument('--k', type=int, default=1, help='Work over GF(2^k)')
    lie.add_argument('--print-basis', action='store_true', help='Print the canonical basis')
    lie.set_defaults(handler=cmd_lie)

    census = subparsers.add_parser('census', help='Inspect a quadratic form file')
    census.add_argument('--form', '-f', required=True, help='Form file path')
    census.add_argument('--group-order', action='store_true', help='Enumerate O(Q) over GF(2)')
    census.add_argument('--workers', '-w', type=int, default=WORKERS, help=WORKERS_HELP)
    census.set_defaults(handler=cmd_census)

    fiber = subparsers.add_parser('fiber', help='Fiber-model checks')
    fiber.add_argument('--kind', required=True, choices=list(KINDS), help='Model kind')
    fiber.add_argument('--pad', type=int, default=0, help='Number of hyperbolic planes')
    fiber.add_argument('--check', default='all', choices=list(FIBER_CHECKS), help='Which check')
    fiber.set_defaults(handler=cmd_fiber)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main function to run the verifier CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except FormFileError as e:
        logger.error(f"Invalid form file: {e}")
        return 2
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
