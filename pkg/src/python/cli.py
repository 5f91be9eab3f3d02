"""
Command-line entry point for twisted torsion computations and theorem checks
"""

import argparse
import hashlib
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, ValidationError

from errors import InputError, TwistedTorsionError
from fields import parse_field_spec
from fox import GroupPresentation, abelianization, format_presentation, knot_table, parse_presentation
from invariants import (
    TwistedAlexInvariant,
    alexander_order,
    associated,
    canonical_text,
    degree_bound_check,
    degree_parity_check,
    palindromic_normalize,
    symmetry_check,
    torsion_via_orders,
    wada_invariant,
)
from laurent import format_laurent, format_rational
from models import (
    EnumeratedRepModel,
    EnumerationReport,
    ErrorReport,
    IndeterminacyModel,
    InvariantReport,
    OrdersReport,
    PalindromeReport,
    ParityReport,
    RunConfig,
    SymmetryReportModel,
)
from monitoring import record_check, set_corpus_size, timed, write_metrics
from reps import (
    Representation,
    enumerate_sl2_reps,
    format_representation,
    load_representation,
    read_input_file,
    trivial_representation,
)
from selftest import run_selftest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_INCONCLUSIVE = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--knot", help="Name of a table knot or link (trefoil, figure8, 5_1, 5_2, 6_1, hopf, whitehead, unknot)")
    source.add_argument("--presentation", help="Path to a presentation file")
    common.add_argument("--rep", help="Representation file, or the name of a shipped one under data/reps/")
    common.add_argument("--field", default="Q", help="Coefficient field for the trivial representation: Q, Fp:<p>, Qi, Qi:trivial")
    common.add_argument("--prime", type=int, help="Prime for enumerate (3, 5 or 7)")
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for enumeration")
    common.add_argument("--out", help="Write the report to this path instead of stdout")
    common.add_argument("--json", action="store_true", help="Emit the report as JSON")
    common.add_argument("--metrics-out", help="Write Prometheus metrics to this path after the run")
    common.add_argument("--thurston-norm", type=int, help="x(phi), overriding the table metadata")
    common.add_argument("--all-columns", action="store_true", help="Compare Wada's invariant across every valid column")
    common.add_argument("--closed", action="store_true", help="Use the closed-manifold formula for torsion via orders")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="Warnings only")

    parser = argparse.ArgumentParser(description="Twisted Reidemeister torsion and twisted Alexander invariants.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common], help="Twisted Alexander invariant")
    sub.add_parser("orders", parents=[common], help="Twisted Alexander orders and their ratio")
    sub.add_parser("check-symmetry", parents=[common], help="Symmetry of the invariant under the involution")
    sub.add_parser("check-parity", parents=[common], help="Degree parity and degree bound")
    sub.add_parser("palindrome", parents=[common], help="Palindromic normal form")
    sub.add_parser("enumerate", parents=[common], help="All SL(2, F_p) representations of a two-generator presentation")
    sub.add_parser("selftest", parents=[common], help="Run the acceptance suite")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        field=args.field,
        knot=args.knot,
        presentation=args.presentation,
        rep=args.rep,
        prime=args.prime,
        out=args.out,
        json_output=args.json,
        jobs=args.jobs,
        metrics_out=args.metrics_out,
        thurston_norm=args.thurston_norm,
        all_columns=args.all_columns,
        closed=args.closed,
    )


# Inputs


def load_presentation(config: RunConfig) -> GroupPresentation:
    if config.knot is not None:
        return knot_table(config.knot)
    path = Path(config.presentation)
    if not path.is_file():
        raise InputError("presentation file not found", config.presentation)
    return parse_presentation(read_input_file(path))


def load_alpha(config: RunConfig, P: GroupPresentation) -> Representation:
    if config.rep is not None:
        return load_representation(config.rep, P)
    return trivial_representation(P, parse_field_spec(config.field))


def input_hash(config: RunConfig, P: GroupPresentation, alpha: Representation) -> str:
    text = f"{config.command}\n{format_presentation(P)}{format_representation(alpha)}"
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# Report assembly


def invariant_report(config: RunConfig, P: GroupPresentation, alpha: Representation, inv: TwistedAlexInvariant) -> InvariantReport:
    field = alpha.field
    degree = None
    if not inv.is_zero and inv.rank == 1:
        degree = inv.degree()
    return InvariantReport(
        command=config.command,
        input_hash=input_hash(config, P, alpha),
        presentation=P.label(),
        representation=alpha.label(),
        field=field.spec,
        representative=format_rational(inv.representative),
        canonical=canonical_text(inv.representative),
        is_zero=inv.is_zero,
        degree=degree,
        is_polynomial=not inv.is_zero and inv.as_polynomial() is not None,
        column=inv.column,
        columns_checked=list(inv.columns_checked),
        indeterminacy=IndeterminacyModel(
            dimension=inv.indeterminacy.dim,
            sign_allowed=inv.indeterminacy.sign_allowed,
            det_generators=[field.format_element(g) for g in inv.indeterminacy.det_data.generators],
        ),
    )


def _outcome(holds: bool, inconclusive: bool = False) -> str:
    if inconclusive:
        return "inconclusive"
    return "pass" if holds else "fail"


def run(config: RunConfig) -> Tuple[int, BaseModel]:
    """
    Execute one command

    Returns:
        The exit code (0 success, 1 check failed, 2 input error,
        3 inconclusive) and the report model
    """
    try:
        if config.command == "selftest":
            report = run_selftest(jobs=config.jobs)
            return (EXIT_OK if report.success else EXIT_CHECK_FAILED), report
        P = load_presentation(config)
        if config.command == "enumerate":
            return run_enumerate(config, P)
        alpha = load_alpha(config, P)
        phi = abelianization(P)
        with timed("wada_invariant"):
            inv = wada_invariant(P, alpha, phi, all_columns=config.all_columns)
        report = invariant_report(config, P, alpha, inv)
        code = EXIT_OK

        if config.command == "orders":
            with timed("alexander_order"):
                delta0 = alexander_order(P, alpha, phi, 0).polynomial
                delta1 = alexander_order(P, alpha, phi, 1).polynomial
                ratio = torsion_via_orders(P, alpha, phi, closed=config.closed) if delta0 else None
            matches = None if ratio is None or config.closed else associated(inv.representative, ratio)
            report.orders = OrdersReport(
                order0=format_laurent(delta0),
                order1=format_laurent(delta1),
                ratio=canonical_text(ratio) if ratio is not None else None,
                closed=config.closed,
                matches_invariant=matches,
            )
            if matches is False:
                code = EXIT_CHECK_FAILED

        elif config.command == "check-symmetry":
            b0 = P.boundary_components if P.boundary_components is not None else 1
            result = symmetry_check(inv, alpha, phi, b0)
            record_check("symmetry", _outcome(result.holds, result.inconclusive))
            report.symmetry = SymmetryReportModel(
                holds=result.holds,
                inconclusive=result.inconclusive,
                unit_coefficient=None if result.unit_coefficient is None else alpha.field.format_element(result.unit_coefficient),
                unit_exponent=None if result.unit_exponent is None else list(result.unit_exponent),
                charge=None if result.charge is None else list(result.charge),
                charge_valid=result.charge_valid,
                reason=result.reason,
            )
            if result.inconclusive:
                code = EXIT_INCONCLUSIVE
            elif not result.holds or result.charge_valid is False:
                code = EXIT_CHECK_FAILED

        elif config.command == "check-parity":
            x_phi = config.thurston_norm if config.thurston_norm is not None else P.thurston_norm
            if x_phi is None:
                raise InputError("x(phi) is unknown for this presentation; pass --thurston-norm", P.label())
            parity = degree_parity_check(inv, alpha.dim, x_phi)
            bound = degree_bound_check(inv, alpha.dim, x_phi)
            record_check("degree_parity", _outcome(parity))
            record_check("degree_bound", _outcome(bound))
            report.parity = ParityReport(
                degree=inv.degree(), dimension=alpha.dim, thurston_norm=x_phi, parity_holds=parity, bound_holds=bound
            )
            if not (parity and bound):
                code = EXIT_CHECK_FAILED

        elif config.command == "palindrome":
            form = palindromic_normalize(inv)
            record_check("palindrome", _outcome(form is not None))
            if form is None:
                report.palindrome = PalindromeReport(found=False)
                code = EXIT_CHECK_FAILED
            else:
                report.palindrome = PalindromeReport(
                    found=True, shift=form.shift, coefficients=[alpha.field.format_element(a) for a in form.coefficients]
                )
        return code, report

    except TwistedTorsionError as e:
        logger.error(f"{config.command} failed: {e}")
        return e.exit_code, ErrorReport(error=e.message, code=e.exit_code, item=e.item)


def run_enumerate(config: RunConfig, P: GroupPresentation) -> Tuple[int, EnumerationReport]:
    with timed("enumerate_sl2_reps"):
        found = enumerate_sl2_reps(P, config.prime, jobs=config.jobs)
    set_corpus_size(len(found))
    reps = [
        EnumeratedRepModel(
            name=e.representation.label(),
            images=[line for line in format_representation(e.representation).splitlines() if line.split(":")[0] in P.generators],
            irreducible=e.irreducible,
        )
        for e in found
    ]
    report = EnumerationReport(
        presentation=P.label(),
        prime=config.prime,
        count=len(found),
        irreducible_count=sum(1 for e in found if e.irreducible),
        representations=reps,
    )
    return EXIT_OK, report


# Output


def _flatten(value: Any, prefix: str = "") -> List[Tuple[str, str]]:
    if isinstance(value, dict):
        rows = []
        for k, v in value.items():
            rows += _flatten(v, f"{prefix}{k}." if isinstance(v, (dict, list)) and v else f"{prefix}{k}")
        return rows
    if isinstance(value, list) and value and isinstance(value[0], dict):
        rows = []
        for n, v in enumerate(value):
            rows += _flatten(v, f"{prefix}{n}.")
        return rows
    if isinstance(value, list):
        value = ", ".join(str(v) for v in value)
    return [(prefix.rstrip("."), "-" if value is None else str(value))]


def format_text(report: BaseModel) -> str:
    """Aligned key : value lines"""
    rows = _flatten(report.model_dump())
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)} : {v}" for k, v in rows) + "\n"


def emit(report: BaseModel, json_output: bool, out: Optional[str]):
    text = report.model_dump_json(indent=2) + "\n" if json_output else format_text(report)
    if out:
        Path(out).write_text(text)
        logger.info(f"Report written to {out}")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else (logging.WARNING if args.quiet else logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        config = config_from_args(args)
    except ValidationError as e:
        message = "; ".join(err["msg"] for err in e.errors())
        logger.error(f"Invalid arguments: {message}")
        emit(ErrorReport(error=message, code=EXIT_INPUT_ERROR), args.json, args.out)
        return EXIT_INPUT_ERROR

    code, report = run(config)
    emit(report, config.json_output, config.out)
    if config.metrics_out:
        write_metrics(config.metrics_out)
    return code


if __name__ == "__main__":
    sys.exit(main())
