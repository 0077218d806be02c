"""Command-line front end.

Subcommands map one-to-one onto library calls: ``verify`` runs registry
records, ``discover`` searches for a gamma-product closed form, ``lsum``,
``lvalue``, ``moment``, and ``expand`` print single computed objects.
Exit codes: 0 success, 1 a verification or discovery failed, 2 usage
error, 3 the requested accuracy could not be reached.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import lattice, lseries, qseries, quadrature, registry, relations
from .errors import (
    AccuracyShortfall,
    ConvergenceFailure,
    DomainError,
    UnknownIdError,
)
from .precision import PrecisionContext

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_SHORTFALL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kprime",
        description="verify and explore elliptic-moment / L-value identities",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        metavar="T",
        help="worker processes for multi-record verification (default 1)",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_verify = sub.add_parser(
        "verify", help="run one registry record, or every record"
    )
    p_verify.add_argument("--id", dest="record_id", help="registry record id")
    p_verify.add_argument(
        "--digits", type=int, help="override the record's digit target"
    )
    p_verify.add_argument(
        "--json",
        dest="json_path",
        metavar="PATH",
        help="write the JSON report array to PATH ('-' for stdout)",
    )

    p_disc = sub.add_parser(
        "discover", help="search a constant for a gamma-product closed form"
    )
    p_disc.add_argument(
        "--recipe",
        required=True,
        help="value to analyse: moment:ID, lvalue:FORM:S, or lattice:SPEC",
    )
    p_disc.add_argument(
        "--basis", required=True, help="constant basis name (see relations)"
    )
    p_disc.add_argument("--digits", type=int, default=60)

    p_lsum = sub.add_parser("lsum", help="evaluate a cataloged lattice sum")
    p_lsum.add_argument("--spec", required=True, help="lattice spec name")
    p_lsum.add_argument("--digits", type=int, default=12)

    p_lv = sub.add_parser("lvalue", help="evaluate L(form, s)")
    p_lv.add_argument("--form", required=True, help="cusp form name")
    p_lv.add_argument("--s", type=int, required=True, help="argument s")
    p_lv.add_argument("--digits", type=int, default=40)

    p_mom = sub.add_parser("moment", help="evaluate a cataloged moment integral")
    p_mom.add_argument("--id", dest="moment_id", required=True)
    p_mom.add_argument("--digits", type=int, default=40)

    p_exp = sub.add_parser("expand", help="q-expand an eta quotient")
    p_exp.add_argument("--eta", required=True, help='e.g. "eta(1)^4*eta(2)^2"')
    p_exp.add_argument("--order", type=int, required=True, metavar="N")

    return parser


def _print_value(value, digits: int) -> None:
    # Decimal strings carry ten digits beyond the requested count; the
    # tail is unverified and marked as such.
    import mpmath

    shown = min(digits + 10, value.precision)
    print(mpmath.nstr(value.value, shown, strip_zeros=False))
    print(f"(requested {digits} digits; tail beyond {digits} is unverified)")


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.record_id:
        reports = [registry.verify(args.record_id, target=args.digits)]
    else:
        ctx = PrecisionContext(args.digits) if args.digits else None
        reports = registry.run_all("*", parallelism=args.threads, ctx=ctx)
    stream = sys.stderr if args.json_path == "-" else sys.stdout
    for rep in reports:
        detail = (
            f"{rep.digits_achieved} digits"
            if rep.digits_achieved is not None
            else (rep.first_mismatch or "")
        )
        print(f"{rep.id:24s} {rep.status:9s} {detail:>14s}  "
              f"{rep.wall_time:6.2f}s", file=stream)
    statuses = {rep.status for rep in reports}
    counts = (
        f"{sum(r.status == 'pass' for r in reports)} pass, "
        f"{sum(r.status == 'fail' for r in reports)} fail, "
        f"{sum(r.status == 'shortfall' for r in reports)} shortfall"
    )
    print(counts, file=stream)
    if args.json_path:
        payload = registry.reports_to_json(reports)
        if args.json_path == "-":
            print(payload)
        else:
            with open(args.json_path, "w") as handle:
                handle.write(payload + "\n")
    if "fail" in statuses:
        return EXIT_FAIL
    if "shortfall" in statuses:
        return EXIT_SHORTFALL
    return EXIT_OK


def _recipe_value(recipe: str, ctx: PrecisionContext):
    parts = recipe.split(":")
    kind = parts[0]
    if kind == "moment" and len(parts) == 2:
        return quadrature.moment(parts[1], ctx)
    if kind == "lvalue" and len(parts) == 3:
        return lseries.lvalue(parts[1], int(parts[2]), ctx)
    if kind == "lattice" and len(parts) == 2:
        return lattice.accelerated_sum(lattice.lattice_spec(parts[1]), ctx)
    raise UnknownIdError(
        f"bad recipe {recipe!r}; expected moment:ID, lvalue:FORM:S, "
        f"or lattice:SPEC"
    )


def _cmd_discover(args: argparse.Namespace) -> int:
    ctx = PrecisionContext(args.digits)
    basis = relations.basis_by_name(args.basis)
    value = _recipe_value(args.recipe, ctx)

    def recompute(wide: PrecisionContext):
        return _recipe_value(args.recipe, wide)

    report = relations.discovery_report(value, basis, ctx, recompute=recompute)
    if report is None:
        print("no integer relation found in this basis", file=sys.stderr)
        return EXIT_FAIL
    print(report["closed_form_text"])
    print(f"(verified to {report['verified_digits']} digits)")
    return EXIT_OK


def _cmd_lsum(args: argparse.Namespace) -> int:
    spec = lattice.lattice_spec(args.spec)
    ctx = PrecisionContext(max(args.digits + 10, 25))
    value = lattice.accelerated_sum(spec, ctx, target_digits=args.digits)
    _print_value(value, args.digits)
    return EXIT_OK


def _cmd_lvalue(args: argparse.Namespace) -> int:
    ctx = PrecisionContext(args.digits)
    value = lseries.lvalue(args.form, args.s, ctx)
    _print_value(value, args.digits)
    return EXIT_OK


def _cmd_moment(args: argparse.Namespace) -> int:
    ctx = PrecisionContext(args.digits)
    value = quadrature.moment(args.moment_id, ctx)
    _print_value(value, args.digits)
    return EXIT_OK


def _cmd_expand(args: argparse.Namespace) -> int:
    if args.order < 1:
        raise DomainError("--order must be at least 1")
    series = qseries.eta_quotient_expand(args.eta, args.order + 1)
    if series.lead.denominator == 1:
        start = max(int(series.lead), 1)
        for n in range(start, args.order + 1):
            print(f"{n}\t{series.coefficient(Fraction(n))}")
    else:
        shown = 0
        e = series.lead
        while shown < args.order and e <= series.valid_through():
            print(f"{e}\t{series.coefficient(e)}")
            shown += 1
            e += 1
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "discover": _cmd_discover,
    "lsum": _cmd_lsum,
    "lvalue": _cmd_lvalue,
    "moment": _cmd_moment,
    "expand": _cmd_expand,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except UnknownIdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _print_schema(args.command)
        return EXIT_USAGE
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _print_schema(args.command)
        return EXIT_USAGE
    except AccuracyShortfall as exc:
        print(f"accuracy shortfall: {exc}", file=sys.stderr)
        return EXIT_SHORTFALL
    except ConvergenceFailure as exc:
        print(f"did not converge: {exc}", file=sys.stderr)
        return EXIT_SHORTFALL


def _print_schema(command: str) -> None:
    """On a usage error, remind the caller what the subcommand accepts."""
    parser = _build_parser()
    # argparse keeps subparsers in a private action; walking it here is
    # the documented-enough way to reprint one subcommand's help.
    for action in parser._actions:  # noqa: SLF001
        if isinstance(action, argparse._SubParsersAction):  # noqa: SLF001
            subparser = action.choices.get(command)
            if subparser is not None:
                subparser.print_help(sys.stderr)
            return


if __name__ == "__main__":
    sys.exit(main())
