"""
Named end-to-end checks of the whole computation.

Each check returns ``(passed, detail)``; ``run_selftest`` times them and
stops at the first failure unless asked to continue.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from v1di4.adams_di4 import (
    ALPHA,
    BETA,
    GAMMA,
    DI4_PSI2,
    DI4_PSI3_DIAG,
    AdamsFreeModule,
    commutator_solve,
    exponent_bound,
    ko_phi1,
    di4_psi_matrices,
    psi_scalar,
    theta_of,
    verify_commutation,
)
from v1di4.config import DEFAULT_CONFIG, V1Config
from v1di4.errors import V1Error
from v1di4.homotopy import (
    ORACLE_RESIDUES,
    reconstruct_pi_T,
    splitting_oracle,
    v1_homotopy,
)
from v1di4.padic_core import (
    LEQ_RIGHT_SIDE,
    PadicResidue,
    dlog3,
    lifting_stages,
    lifting_trace,
    modpow2,
    rat_to_residue,
    solve_L,
)
from v1di4.pseudosphere import (
    Classification,
    adams_table_T,
    match_adams_modules,
    order_counting_certificate,
    pseudosphere_discriminator,
    shifted_adams_table,
)
from v1di4.report import CheckResult, Report
from v1di4.types import FinAbGroup2
from v1di4.zlinalg import IntMatrix, brute_force_quotient, coker_presentation, invariant_factors, snf

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, str]


@dataclass
class SelftestContext:
    config: V1Config
    module: AdamsFreeModule


Check = Callable[[SelftestContext], Outcome]


def _entry_check(row: int, col: int, expected) -> Check:
    def check(ctx: SelftestContext) -> Outcome:
        solved = commutator_solve(DI4_PSI2, DI4_PSI3_DIAG)[row][col]
        given = ctx.module.psi3[row][col]
        ok = solved == expected and given == expected
        return ok, f"solved {solved}, module {given}, expected {expected}"

    return check


def _check_commutation(ctx: SelftestContext) -> Outcome:
    result = verify_commutation(ctx.module.psi2, ctx.module.psi3)
    return bool(result), result.describe()


def _check_coker_generator(ctx: SelftestContext) -> Outcome:
    pres = coker_presentation(theta_of(ctx.module))
    images = tuple(img[0] for img in pres.gen_images)
    ok = pres.group == FinAbGroup2.cyclic(21) and images == (1, 8, 256)
    return ok, f"coker theta = {pres.group}, generators -> {images}"


def _check_ko_phi1(ctx: SelftestContext) -> Outcome:
    table = ko_phi1(ctx.module)
    got = [str(table.group(f"KO{n}")) for n in range(8)] + [str(table.group(f"K{n}")) for n in range(2)]
    want = ["0", "0", "0", "Z/2^21", "Z/2", "Z/2 + Z/2", "Z/2", "Z/2^21", "0", "Z/2^21"]
    return got == want and table.exact, ", ".join(got)


def _check_psi3_mod16(ctx: SelftestContext) -> Outcome:
    table = ko_phi1(ctx.module)
    k1 = psi_scalar(table, 3, "K1").residue(4).value
    rhs = LEQ_RIGHT_SIDE.residue(4).value
    return k1 == rhs == 9, f"psi^3 on K^1 = {k1}, right side = {rhs} mod 16"


def _check_discriminator(ctx: SelftestContext) -> Outcome:
    phi = pseudosphere_discriminator(ko_phi1(ctx.module))
    t = pseudosphere_discriminator(adams_table_T())
    ok = phi is Classification.PSEUDOSPHERE_LIKE and t is Classification.PSEUDOSPHERE_LIKE
    return ok, f"Phi_1 DI(4): {phi.value}, T: {t.value}"


def _check_exponent_bound(ctx: SelftestContext) -> Outcome:
    bound = exponent_bound(ctx.module)
    return bound == ctx.config.moore_exponent, f"largest exponent {bound}"


def _check_solve_l(ctx: SelftestContext) -> Outcome:
    L = solve_L(rat_to_residue(LEQ_RIGHT_SIDE, ctx.config.prec))
    return L == ctx.config.shift_index, f"L = {L}"


def _check_congruence(ctx: SelftestContext) -> Outcome:
    prec, L = ctx.config.prec, ctx.config.shift_index
    lhs = modpow2(3, 4 * L + 2, prec)
    rhs = rat_to_residue(LEQ_RIGHT_SIDE, prec)
    return lhs == rhs, f"3^(4L+2) = {lhs}, right side = {rhs}"


def _check_lifting_stages(ctx: SelftestContext) -> Outcome:
    stages = lifting_stages(LEQ_RIGHT_SIDE, ctx.config.lifting_stages)
    L = ctx.config.shift_index
    ok = all(v == L % (1 << s) for s, v in stages)
    return ok, ", ".join(f"L = {v} mod 2^{s}" for s, v in stages)


def _check_lifting_trace(ctx: SelftestContext) -> Outcome:
    trace = lifting_trace(ctx.config.shift_index, prec=ctx.config.trace_prec, terms=ctx.config.trace_terms)
    checks = trace.checks()
    failed = [c for c in checks if not c.passed]
    return not failed, ", ".join(f"{c.name} = {c.value}" for c in checks)


def _check_dlog3(ctx: SelftestContext) -> Outcome:
    cases = 0
    for prec in range(3, 13):
        for x in range(1 << (prec - 2)):
            u = modpow2(3, x, prec)
            got = dlog3(u)
            if got.value != x:
                return False, f"dlog3({u}) = {got.value}, expected {x} mod 2^{prec - 2}"
            cases += 1
    # -1 = 7 mod 8 is not a power of 3
    try:
        dlog3(PadicResidue.of(-1, 12))
    except V1Error:
        return True, f"{cases} residues recovered"
    return False, "dlog3(-1) did not raise"


def _check_order_counting(ctx: SelftestContext) -> Outcome:
    cert = order_counting_certificate(ctx.config.moore_exponent)
    ok = cert.resolved == FinAbGroup2.of(1, 1) and cert.evidence["moore_split_order"] == 8
    return ok, f"{cert.resolved}, evidence {cert.evidence}"


def _check_oracles(ctx: SelftestContext) -> Outcome:
    parts, ok = [], True
    for d in ORACLE_RESIDUES:
        cert = splitting_oracle(d)
        ev = cert.evidence
        ok = ok and ev["twosum_order"] == ev["split_order"] > ev["max_nonsplit_order"]
        parts.append(f"d={d}: {ev['twosum_order']}")
    return ok, ", ".join(parts)


def _check_dual_route(ctx: SelftestContext) -> Outcome:
    r, L = ctx.config.dual_route_range, ctx.config.shift_index
    for i in range(-r, r + 1):
        for d in range(1, 9):
            v1_homotopy(i, d, L)
    return True, f"{(2 * r + 1) * 8} degrees agree"


def _check_match(ctx: SelftestContext) -> Outcome:
    phi = ko_phi1(ctx.module)
    L, e = ctx.config.shift_index, ctx.config.moore_exponent
    here = match_adams_modules(phi, shifted_adams_table(L, e), ctx.config.prec)
    if not here:
        return False, f"L = {L}: {here.first_mismatch.describe()}"
    for other in (L - 1, L + 1):
        report = match_adams_modules(phi, shifted_adams_table(other, e), ctx.config.prec)
        if report:
            return False, f"L = {other} also matches"
    return True, f"matches at L = {L} only among L-1, L, L+1"


def _check_reconstruction(ctx: SelftestContext) -> Outcome:
    table = reconstruct_pi_T(ctx.config.reconstruct_window)
    zhat = FinAbGroup2.free()
    ok = table.exact and table.group(0) == zhat and table.group(-1) == zhat and table.group(7) == FinAbGroup2.cyclic(4)
    return ok, "; ".join(table.rules[r].describe() for r in sorted(table.rules))


def _random_matrix(rng: random.Random, n: int, m: int, bound: int = 20) -> IntMatrix:
    return IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)])


def _check_snf(ctx: SelftestContext) -> Outcome:
    rng = random.Random(ctx.config.random_seed)
    for _ in range(ctx.config.random_trials):
        A = _random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        snf(A)  # raises on a failed U A V = D, det or divisibility check
        if A.is_square:
            ours = [abs(x) for x in invariant_factors(A) if x]
            ref = smith_normal_form(Matrix(A.to_rows()))
            theirs = [abs(int(ref[k, k])) for k in range(min(ref.shape)) if ref[k, k] != 0]
            if ours != theirs:
                return False, f"{A.to_rows()}: {ours} vs {theirs}"
    return True, f"{ctx.config.random_trials} matrices"


def _unimodular(rng: random.Random, n: int) -> IntMatrix:
    M = IntMatrix.identity(n)
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        E = [[int(r == c) for c in range(n)] for r in range(n)]
        E[i][j] = rng.randint(-2, 2)
        M = M @ IntMatrix.from_rows(E)
    return M


def _check_brute_force(ctx: SelftestContext) -> Outcome:
    rng = random.Random(ctx.config.random_seed + 1)
    trials = max(1, ctx.config.random_trials // 5)
    for _ in range(trials):
        n = rng.randint(1, 3)
        exps = [rng.randint(0, 3) for _ in range(n)]
        while sum(exps) > 10:
            exps[rng.randrange(n)] -= 1
        A = _unimodular(rng, n) @ IntMatrix.diagonal([2**e for e in exps]) @ _unimodular(rng, n)
        fast = coker_presentation(A).group
        slow = brute_force_quotient(A, bound=ctx.config.brute_det_bound)
        if fast != slow:
            return False, f"{A.to_rows()}: {fast} vs {slow}"
    return True, f"{trials} cokernels"


CHECKS: Tuple[Tuple[str, Check], ...] = (
    ("thm2.1-alpha", _entry_check(1, 0, ALPHA)),
    ("thm2.1-beta", _entry_check(2, 0, BETA)),
    ("thm2.1-gamma", _entry_check(2, 1, GAMMA)),
    ("thm2.1-commutation", _check_commutation),
    ("coker-generator", _check_coker_generator),
    ("ko-phi1-table", _check_ko_phi1),
    ("psi3-mod-16", _check_psi3_mod16),
    ("discriminator", _check_discriminator),
    ("exponent-bound", _check_exponent_bound),
    ("solve-l", _check_solve_l),
    ("congruence", _check_congruence),
    ("lifting-stages", _check_lifting_stages),
    ("lifting-trace", _check_lifting_trace),
    ("dlog3-brute-force", _check_dlog3),
    ("ko2-order-counting", _check_order_counting),
    ("splitting-oracles", _check_oracles),
    ("dual-route", _check_dual_route),
    ("match-at-l", _check_match),
    ("pi-t-reconstruction", _check_reconstruction),
    ("snf-random", _check_snf),
    ("coker-brute-force", _check_brute_force),
)


def list_checks() -> List[str]:
    return [name for name, _ in CHECKS]


def run_selftest(
    config: Optional[V1Config] = None,
    *,
    module: Optional[AdamsFreeModule] = None,
    only: Optional[Sequence[str]] = None,
    stop_on_failure: bool = True,
) -> Report:
    """
    Run the named checks in order. ``module`` replaces the built-in psi
    matrices, so a corrupted entry shows up under its own check name.
    """
    config = config or DEFAULT_CONFIG
    config.validate()
    names = list_checks()
    unknown = [n for n in (only or ()) if n not in names]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")
    ctx = SelftestContext(config, module if module is not None else di4_psi_matrices())

    report = Report("selftest")
    for name, fn in CHECKS:
        if only and name not in only:
            continue
        start = time.perf_counter()
        try:
            passed, detail = fn(ctx)
        except (V1Error, ValueError, ArithmeticError) as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        elapsed = time.perf_counter() - start
        report.checks.append(CheckResult(name, passed, detail, elapsed))
        logger.info("%s %s (%.3fs)", "PASS" if passed else "FAIL", name, elapsed)
        if not passed and stop_on_failure:
            break
    return report
