#!/usr/bin/env python3
"""
Command line for the filtered algebra workbench.

Every sub-command reads a ``.alg`` presentation file and prints one JSON report
on standard output; logs go to standard error.

Exit codes: 0 success or verified, 1 Inconclusive / NotFound / Nonconfluent, 2 error.
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

import config
from action import invariant_series, is_small, parse_skew, reflections, skew_mul
from auslander import Inconclusive, pertinency_certificate, quotient_growth, truncated_injectivity, verify_certificate
from congenial import central_witness, congeniality_report, order_and_reduce
from errors import DomainMismatch, NcfiltError
from presentation import AlgebraHandle
from presentation_file import PresentationFile, format_presentation, load_presentation
from reports import CommandReport, ErrorReport, render_table, to_json
from scalars import DomainKind
from zoo import associated_graded

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_ERROR = 2

Outcome = Tuple[int, str, Dict[str, Any]]


def _load(args) -> Tuple[PresentationFile, AlgebraHandle]:
    parsed = load_presentation(args.file)
    bound = getattr(args, "bound", None) or config.DEFAULT_BOUND
    return parsed, parsed.handle(bound=bound)


def _load_for_weight(args, weight: int) -> Tuple[PresentationFile, AlgebraHandle]:
    """Handle whose confluence check covers words of the given weight."""
    parsed = load_presentation(args.file)
    return parsed, parsed.handle(bound=max(weight, config.DEFAULT_BOUND))


def cmd_check_pbw(args) -> Outcome:
    parsed, handle = _load(args)
    result = {"algebra": parsed.name, "confluence": handle.report.to_dict(handle.alphabet),
              "presentation": handle.presentation.to_dict()}
    if handle.confluent:
        top = handle.max_basis_weight()
        result["dims"] = handle.dims(min(top, args.bound))
        return EXIT_OK, handle.report.status.value, result
    return EXIT_INCONCLUSIVE, handle.report.status.value, result


def cmd_dims(args) -> Outcome:
    parsed, handle = _load_for_weight(args, 2 * args.upto)
    handle.require_certified(2 * args.upto, purpose=f"dimensions up to weight {args.upto}")
    dims = handle.dims(args.upto)
    exact = handle.hilbert_series(args.upto)
    rows = [{"n": n, "dim F_n": dims[n], "dim F_n/F_n-1": exact[n]} for n in range(args.upto + 1)]
    return EXIT_OK, "ok", {"algebra": parsed.name, "dims": dims, "hilbert_series": exact, "table": rows}


def cmd_gr(args) -> Outcome:
    parsed, handle = _load(args)
    graded = associated_graded(handle)
    return EXIT_OK, "ok", {"algebra": parsed.name, "graded": graded.to_dict(),
                           "file": format_presentation(graded, name=f"gr_{parsed.name}")}


def cmd_auto_verify(args) -> Outcome:
    parsed, handle = _load(args)
    phi = parsed.automorphism(handle, args.auto)
    return EXIT_OK, "verified", {"algebra": parsed.name, "automorphism": phi.to_dict()}


def cmd_group(args) -> Outcome:
    parsed, handle = _load(args)
    group = parsed.group(handle, args.group, cap=args.cap)
    result = group.to_dict()
    result.update(reflections=reflections(group), small=is_small(group))
    if group.order_invertible and args.invariants is not None:
        result["invariant_series"] = invariant_series(group, args.invariants)
    return EXIT_OK, "ok", result


def cmd_skew_mul(args) -> Outcome:
    parsed, handle = _load(args)
    group = parsed.group(handle, args.group)
    u = parse_skew(args.lhs, group)
    v = parse_skew(args.rhs, group)
    return EXIT_OK, "ok", {"lhs": u.to_string(), "rhs": v.to_string(), "product": skew_mul(u, v).to_string()}


def _reduced(args, handle: AlgebraHandle) -> Tuple[Optional[dict], AlgebraHandle]:
    if handle.domain.kind is DomainKind.PRIME_FIELD:
        if handle.domain.characteristic != args.prime:
            raise DomainMismatch(f"the presentation is already over {handle.domain}", domain=str(handle.domain),
                                 prime=args.prime)
        return None, handle
    order_spec, reduced = order_and_reduce(handle, args.prime)
    return {"description": order_spec.describe(), "generators": order_spec.generator_names(),
            "witnesses": dict(order_spec.witnesses)}, reduced


def cmd_modp(args) -> Outcome:
    parsed, handle = _load(args)
    order, reduced = _reduced(args, handle)
    result = {"algebra": parsed.name, "prime": args.prime, "order": order,
              "reduced": reduced.presentation.to_dict(),
              "confluence": reduced.report.to_dict(reduced.alphabet)}
    if not reduced.confluent:
        return EXIT_INCONCLUSIVE, reduced.report.status.value, result
    return EXIT_OK, "ok", result


def cmd_central_witness(args) -> Outcome:
    parsed, handle = _load(args)
    _, reduced = _reduced(args, handle)
    witness = central_witness(reduced, args.gen, i_max=args.imax, mode=args.mode, n_max=args.nmax)
    if witness is None:
        return EXIT_INCONCLUSIVE, "NotFound", {"algebra": parsed.name, "generator": args.gen, "prime": args.prime}
    return EXIT_OK, "found", {"algebra": parsed.name, "prime": args.prime, "witness": witness.to_dict(reduced)}


def cmd_congenial(args) -> Outcome:
    parsed, handle = _load(args)
    report = congeniality_report(handle, args.primes, args.bound)
    return (EXIT_OK if report.passed else EXIT_INCONCLUSIVE), ("pass" if report.passed else "fail"), \
        report.model_dump(mode="json", exclude_none=True)


def cmd_pertinency(args) -> Outcome:
    parsed, handle = _load_for_weight(args, 2 * args.bound)
    group = parsed.group(handle, args.group)
    result = pertinency_certificate(group, args.cap, args.bound)
    if isinstance(result, Inconclusive):
        growth = quotient_growth(group, args.bound)
        doc = result.to_dict()
        doc["growth"] = growth.to_dict()
        return EXIT_INCONCLUSIVE, "Inconclusive", doc
    return EXIT_OK, "certified", result.model_dump(mode="json", exclude_none=True)


def cmd_auslander_inj(args) -> Outcome:
    parsed, handle = _load_for_weight(args, 2 * (args.N + args.M))
    group = parsed.group(handle, args.group)
    report = truncated_injectivity(group, args.N, args.M)
    status = "injective" if report.kernel_dim == 0 else "kernel"
    return (EXIT_OK if report.kernel_dim == 0 else EXIT_INCONCLUSIVE), status, report.to_dict()


def cmd_growth(args) -> Outcome:
    parsed, handle = _load_for_weight(args, 2 * args.bound)
    group = parsed.group(handle, args.group)
    series = quotient_growth(group, args.bound)
    doc = series.to_dict()
    doc["table"] = [{"n": n, "dim quotient": d, "dim F_n#G": u} for n, (d, u) in enumerate(zip(series.dims,
                                                                                               series.upper))]
    return EXIT_OK, "ok", doc


def _certificate_document(path: str) -> dict:
    with open(path, encoding="utf-8") as handle:
        document = json.load(handle)
    if document.get("command") == "pertinency" and "result" in document:
        document = document["result"]
    return document


def cmd_verify_cert(args) -> Outcome:
    document = _certificate_document(args.certificate)
    bound = max((entry.get("bound", 0) for entry in document.get("generators", [])), default=0)
    parsed, handle = _load_for_weight(args, 2 * bound)
    group = parsed.group(handle, args.group or document.get("group", ""))
    verify_certificate(document, group)
    return EXIT_OK, "verified", {"group": group.name, "generators": [g["generator"] for g in document["generators"]]}


COMMANDS = {
    "check-pbw": cmd_check_pbw,
    "dims": cmd_dims,
    "gr": cmd_gr,
    "auto-verify": cmd_auto_verify,
    "group": cmd_group,
    "skew-mul": cmd_skew_mul,
    "modp": cmd_modp,
    "central-witness": cmd_central_witness,
    "congenial": cmd_congenial,
    "pertinency": cmd_pertinency,
    "auslander-inj": cmd_auslander_inj,
    "growth": cmd_growth,
    "verify-cert": cmd_verify_cert,
}


def _primes(text: str) -> List[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of primes, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncfilt", description="Exact workbench for filtered noncommutative algebras")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--pretty", action="store_true", help="Render tables instead of JSON where available")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="Presentation file (.alg)")
        return p

    p = command("check-pbw", "Check confluence of the oriented relations")
    p.add_argument("--bound", type=int, default=config.DEFAULT_BOUND)
    p = command("dims", "Dimensions of the filtration pieces")
    p.add_argument("--upto", type=int, default=config.DEFAULT_BOUND // 2)
    command("gr", "Associated graded presentation")
    p = command("auto-verify", "Verify a declared automorphism")
    p.add_argument("--auto", required=True)
    p = command("group", "Close a declared group under composition")
    p.add_argument("--group", required=True)
    p.add_argument("--cap", type=int, default=config.GROUP_CAP)
    p.add_argument("--invariants", type=int, default=None, help="Also count invariants up to this weight")
    p = command("skew-mul", "Multiply two elements of A#G")
    p.add_argument("--group", required=True)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p = command("modp", "Extract an order and reduce modulo a prime")
    p.add_argument("--prime", type=int, required=True)
    p = command("central-witness", "Search for a central power of a generator modulo a prime")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--gen", required=True)
    p.add_argument("--imax", type=int, default=1)
    p.add_argument("--mode", choices=["p_power", "power"], default="p_power")
    p.add_argument("--nmax", type=int, default=None)
    p = command("congenial", "Congeniality report")
    p.add_argument("--primes", type=_primes, required=True)
    p.add_argument("--bound", type=int, default=config.DEFAULT_BOUND)
    p = command("pertinency", "Search for a pertinency certificate")
    p.add_argument("--group", required=True)
    p.add_argument("--cap", type=int, default=3)
    p.add_argument("--bound", type=int, default=config.DEFAULT_BOUND)
    p = command("auslander-inj", "Truncated injectivity of the Auslander map")
    p.add_argument("--group", required=True)
    p.add_argument("-N", type=int, default=2)
    p.add_argument("-M", type=int, default=2)
    p = command("growth", "Growth of (A#G)/(f_G) by weight")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, default=config.DEFAULT_BOUND)
    p = command("verify-cert", "Re-verify a pertinency certificate")
    p.add_argument("certificate", help="Certificate JSON written by the pertinency command")
    p.add_argument("--group", default=None, help="Group name; defaults to the one recorded in the certificate")
    command("format", "Print the explicit-relations form of a presentation")
    return parser


def run(argv: Optional[List[str]] = None, out=None) -> int:
    """Parse arguments, run one command and write its report; returns the exit code."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    config.configure_logging(args.verbose)

    if args.command == "format":
        try:
            parsed = load_presentation(args.file)
        except NcfiltError as exc:
            logger.error(exc.message)
            out.write(to_json(ErrorReport(command=args.command, **exc.to_dict())) + "\n")
            return EXIT_ERROR
        out.write(format_presentation(parsed.presentation, parsed.name, parsed.automorphisms, parsed.groups))
        return EXIT_OK

    try:
        code, status, result = COMMANDS[args.command](args)
    except NcfiltError as exc:
        logger.error(f"{args.command} failed: {exc.message}")
        out.write(to_json(ErrorReport(command=args.command, **exc.to_dict())) + "\n")
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        logger.error(f"{args.command} failed: {exc}")
        report = ErrorReport(command=args.command, type=type(exc).__name__, error=str(exc))
        out.write(to_json(report) + "\n")
        return EXIT_ERROR
    except Exception as exc:
        logger.exception(f"{args.command} failed unexpectedly")
        report = ErrorReport(command=args.command, type=type(exc).__name__, error=str(exc))
        out.write(to_json(report) + "\n")
        return EXIT_ERROR

    table = result.pop("table", None)
    if args.pretty and table:
        out.write(render_table(table) + "\n")
    else:
        out.write(to_json(CommandReport(command=args.command, status=status, result=result)) + "\n")
    return code


def main() -> int:
    try:
        return run()
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
