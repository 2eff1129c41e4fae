"""
Command-line front end.

    v1di4 adams-verify [--perturb R,C]
    v1di4 solve-l [--prec P]
    v1di4 ko-phi1
    v1di4 homotopy [--min I] [--max J]
    v1di4 pseudosphere-pi [--min I] [--max J] [--reconstruct [--window W]]
    v1di4 match [--L L]
    v1di4 selftest [--list]

Every subcommand takes -v/--verbose, --format {md,json} and --output PATH.
Exit codes: 0 all checks pass, 1 a check or consistency test failed,
2 bad input (including an unsolvable congruence).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from v1di4 import __version__
from v1di4.adams_di4 import (
    ALPHA,
    BETA,
    GAMMA,
    DI4_PSI2,
    DI4_PSI3_DIAG,
    commutator_solve,
    ko_phi1,
    psi_scalar,
    rat_matrix,
    verify_commutation,
)
from v1di4.config import DEFAULT_CONFIG, V1Config
from v1di4.errors import V1Error
from v1di4.homotopy import pi_T_moore_certified, reconstruct_pi_T, v1_homotopy
from v1di4.padic_core import LEQ_RIGHT_SIDE, lifting_stages, lifting_trace, modpow2, rat_to_residue, solve_L
from v1di4.pseudosphere import match_adams_modules, pseudosphere_discriminator, shifted_adams_table
from v1di4.report import Report, TableRow, render
from v1di4.selftest import list_checks, run_selftest

logger = logging.getLogger(__name__)


def _cell(text: str) -> Tuple[int, int]:
    try:
        r, c = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ROW,COL, got {text!r}")
    if r < 1 or c < 1:
        raise argparse.ArgumentTypeError(f"ROW and COL are 1-based, got {text!r}")
    return r, c


def cmd_adams_verify(args: argparse.Namespace, config: V1Config) -> Report:
    solved = [list(row) for row in commutator_solve(DI4_PSI2, DI4_PSI3_DIAG)]
    n = len(solved)
    if args.perturb is not None:
        r, c = args.perturb
        if r > n or c > n:
            raise ValueError(f"--perturb {r},{c} is outside a {n}x{n} matrix")
        solved[r - 1][c - 1] = solved[r - 1][c - 1] + 1
        logger.info("perturbed psi3[%d,%d] to %s", r, c, solved[r - 1][c - 1])
    psi3 = rat_matrix(solved)

    report = Report("adams-verify")
    for name, (i, j), expected in (("alpha", (1, 0), ALPHA), ("beta", (2, 0), BETA), ("gamma", (2, 1), GAMMA)):
        got = psi3[i][j]
        report.check(f"thm2.1-{name}", got == expected, f"psi3[{i + 1},{j + 1}] = {got}, expected {expected}")
    commutes = verify_commutation(DI4_PSI2, psi3)
    report.check("commutation", bool(commutes), commutes.describe())
    for i in range(n):
        for j in range(i + 1):
            report.values[f"psi3[{i + 1},{j + 1}]"] = psi3[i][j].to_dict()
    return report


def cmd_solve_l(args: argparse.Namespace, config: V1Config) -> Report:
    prec = args.prec if args.prec is not None else config.prec
    config = dataclasses.replace(
        config,
        prec=prec,
        trace_prec=min(config.trace_prec, prec),
        lifting_stages=tuple(s for s in config.lifting_stages if s <= prec - 4),
    )
    config.validate()
    rhs = rat_to_residue(LEQ_RIGHT_SIDE, prec)
    L = solve_L(rhs)

    report = Report("solve-l")
    report.values.update(
        {
            "L": str(L),
            "modulus": f"2^{prec - 4}",
            "rhs_mod_16": str(rhs.value % 16),
        }
    )
    for bits in (3, 10, 17):
        if bits <= prec - 4:
            report.values[f"L_mod_2^{bits}"] = str(L % (1 << bits))
    report.check("congruence", modpow2(3, 4 * L + 2, prec) == rhs, f"3^(4L+2) = {rhs}")

    stages = lifting_stages(LEQ_RIGHT_SIDE, config.lifting_stages)
    report.check(
        "lifting-stages",
        all(v == L % (1 << s) for s, v in stages),
        ", ".join(f"{v} mod 2^{s}" for s, v in stages),
    )
    if prec - 4 >= 17:
        # 3^{4L} mod 2^21 depends on L mod 2^17 only
        trace = lifting_trace(L, prec=config.trace_prec, terms=config.trace_terms)
        for c in trace.checks():
            report.check(f"trace {c.name}", c.passed, f"{c.value} (expected {c.expected})")
    else:
        report.values["lifting_trace"] = "skipped: needs prec >= 21"
    return report


def cmd_ko_phi1(args: argparse.Namespace, config: V1Config) -> Report:
    table = ko_phi1()
    report = Report("ko-phi1")
    for n in range(8):
        slot = table.ko.slot_at(n)
        psi3 = None if slot.is_zero else table.ko.psi(3, n)
        report.tables.append(TableRow(n, slot.group, psi3, label=f"KO^{n}"))
        if slot.certificate is not None:
            cert = slot.certificate
            report.values[f"certificate.{cert.name}"] = f"{cert.resolved} ({cert.justification.value})"
    for n in range(2):
        report.values[f"K^{n}"] = str(table.k.group(n))
    report.values["psi3_K^1"] = psi_scalar(table, 3, "K1").to_dict()
    report.values["coker_theta_generators"] = ", ".join(str(img[0]) for img in table.presentation.gen_images)
    for w in table.witnesses:
        report.check(f"exact {w.segment}", w.holds, f"{w.expected} vs {w.observed}")
    kind = pseudosphere_discriminator(table)
    report.values["classification"] = kind.value
    return report


def _i_range(args: argparse.Namespace, default: int) -> range:
    lo = args.min if args.min is not None else default
    hi = args.max if args.max is not None else lo
    if lo > hi:
        raise ValueError(f"--min {lo} exceeds --max {hi}")
    return range(lo, hi + 1)


def cmd_homotopy(args: argparse.Namespace, config: V1Config) -> Report:
    report = Report("homotopy", layout="grid8")
    for i in _i_range(args, config.shift_index):
        for d in range(1, 9):
            report.tables.append(TableRow(8 * i + d, v1_homotopy(i, d, config.shift_index)))
    report.values["L"] = str(config.shift_index)
    return report


def cmd_pseudosphere_pi(args: argparse.Namespace, config: V1Config) -> Report:
    report = Report("pseudosphere-pi")
    indices = _i_range(args, 0)
    for i in indices:
        for d in range(-2, 6):
            group, cert = pi_T_moore_certified(i, d, config.moore_exponent)
            report.tables.append(TableRow(8 * i + d, group))
            if cert is not None and i == indices.start:
                ev = cert.evidence
                report.check(
                    f"split {cert.name}",
                    ev["twosum_order"] == ev["split_order"] > ev["max_nonsplit_order"],
                    f"{cert.resolved}: |pi(Y ^ M(2))| = {ev['twosum_order']}",
                )
    if args.reconstruct:
        table = reconstruct_pi_T(args.window or config.reconstruct_window)
        report.check("pi_T exact", table.exact, f"{len(table.witnesses)} degrees")
        report.values["pi_T_window"] = str(table.window)
        report.values["pi_T_nu_ansatz"] = "used" if table.used_ansatz else "not needed"
        for r, rule in sorted(table.rules.items()):
            report.values[f"pi_T[8i+{r}]"] = rule.describe()
    return report


def cmd_match(args: argparse.Namespace, config: V1Config) -> Report:
    L = args.L if args.L is not None else config.shift_index
    config = dataclasses.replace(config, shift_index=L)
    config.validate()
    phi = ko_phi1()
    shifted = shifted_adams_table(L, config.moore_exponent)
    result = match_adams_modules(phi, shifted, config.prec)

    report = Report("match")
    for c in result.comparisons:
        report.check(f"{c.kind}{c.degree}", c.ok, c.describe())
    for n in range(8):
        report.tables.append(TableRow(n, phi.ko.group(n), label=f"KO^{n}"))
    report.values["L"] = str(L)
    report.values["right"] = shifted.name
    if not result:
        report.values["first_mismatch"] = result.first_mismatch.describe()
    return report


def cmd_selftest(args: argparse.Namespace, config: V1Config) -> Optional[Report]:
    if args.list:
        for name in list_checks():
            print(name)
        return None
    return run_selftest(config, stop_on_failure=not args.keep_going)


def _parse_args(argv: Optional[List[str]]) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    common.add_argument("--format", choices=("md", "json"), default="md")
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="v1di4", description="v1-periodic homotopy of DI(4)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("adams-verify", parents=[common], help="solve psi^3 from psi^2 and check it")
    p.add_argument("--perturb", type=_cell, metavar="R,C", help="add 1 to the solved entry (1-based)")
    p.set_defaults(func=cmd_adams_verify)

    p = sub.add_parser("solve-l", parents=[common], help="solve 3^(4L+2) = rhs mod 2^P")
    p.add_argument("--prec", type=int, help="2-adic precision P (4..40, default 21)")
    p.set_defaults(func=cmd_solve_l)

    p = sub.add_parser("ko-phi1", parents=[common], help="KO^* and K^* of Phi_1 DI(4)")
    p.set_defaults(func=cmd_ko_phi1)

    p = sub.add_parser("homotopy", parents=[common], help="v1-periodic homotopy groups of DI(4)")
    p.add_argument("--min", type=int, help="first i (default L)")
    p.add_argument("--max", type=int, help="last i (default --min)")
    p.set_defaults(func=cmd_homotopy)

    p = sub.add_parser("pseudosphere-pi", parents=[common], help="pi_*(T ^ M(2^21)) and pi_*(T)")
    p.add_argument("--min", type=int, help="first i (default 0)")
    p.add_argument("--max", type=int, help="last i (default --min)")
    p.add_argument("--reconstruct", action="store_true", help="also solve for pi_*(T)")
    p.add_argument("--window", type=int, help="|i| bound for --reconstruct")
    p.set_defaults(func=cmd_pseudosphere_pi)

    p = sub.add_parser("match", parents=[common], help="compare Phi_1 DI(4) with S^(8L+3) T ^ M(2^21)")
    p.add_argument("--L", type=int, help="shift index (default 90627)")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("selftest", parents=[common], help="run the named checks")
    p.add_argument("--list", action="store_true", help="print check names without running them")
    p.add_argument("--keep-going", action="store_true", help="run every check even after a failure")
    p.set_defaults(func=cmd_selftest)

    return parser.parse_args(argv)


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, output: Optional[Path]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")
        logger.info("report written to %s", output)


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    _configure_logging(args.verbose)
    config = DEFAULT_CONFIG

    try:
        report = args.func(args, config)
    except V1Error as e:
        logger.error("%s: %s", type(e).__name__, e)
        return 1 if isinstance(e, RuntimeError) else 2
    except (ValueError, ArithmeticError) as e:
        logger.error("%s", e)
        return 2

    if report is None:
        return 0
    _emit(render(report, args.format), args.output)
    for c in report.checks:
        if not c.passed:
            logger.warning("check %s failed: %s", c.name, c.detail)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
