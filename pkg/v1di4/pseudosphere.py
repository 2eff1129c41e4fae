"""
Adams modules of the K/2-local pseudosphere T and its Moore smashes.

Builds KO^* and K^* of S^0, M(2), T and T ^ M(2^e) from each other through
the Moore long exact sequence, resolves the extensions that sequence leaves
open, suspends T ^ M(2^e) by 8L + 3 and compares the result with
KO^*(Phi_1 DI(4)).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from v1di4.errors import ContradictionNotFound, InternalMismatch, Unclassifiable
from v1di4.graded import (
    AdamsGradedTable,
    AdamsModule,
    PsiLaw,
    Resolver,
    extension_candidates,
    moore_pieces,
    smash_moore,
    suspend_module,
    table_from_groups,
)
from v1di4.padic_core import DI4_L
from v1di4.types import FinAbGroup2, Justification, SplitCertificate

logger = logging.getLogger(__name__)

Z = FinAbGroup2.free()
Z2 = FinAbGroup2.cyclic(1)


def ko_sphere_table() -> AdamsModule:
    """KO^*(S^0) and K^*(S^0) with psi^k = k^{-n/2} on the Bott classes."""
    ko = table_from_groups("S^0", 8, {0: (Z, PsiLaw.bott()), 4: (Z, PsiLaw.bott()), 6: (Z2, PsiLaw()), 7: (Z2, PsiLaw())})
    k = table_from_groups("S^0", 2, {0: (Z, PsiLaw.bott())})
    return AdamsModule("S^0", ko, k)


def adams_table_T() -> AdamsModule:
    """KO^*(T) and K^*(T): Zhat_2 at 0 mod 4 (K: every even degree), Z/2 at 2 and 3."""
    ko = table_from_groups("T", 8, {0: (Z, PsiLaw.bott()), 2: (Z2, PsiLaw()), 3: (Z2, PsiLaw()), 4: (Z, PsiLaw.bott())})
    k = table_from_groups("T", 2, {0: (Z, PsiLaw.bott())})
    return AdamsModule("T", ko, k)


# KO^{-2}(M(2)) = KO~^0(RP^2) = Z/4
RP2_NAME = "KO-2-M2-Z4"


def _rp2_resolver(degree: int, sub: FinAbGroup2, quotient: FinAbGroup2) -> SplitCertificate:
    if degree != 6 or sub != Z2 or quotient != Z2:
        raise ContradictionNotFound(f"no certificate for KO^{degree}(M(2)) as {sub} by {quotient}")
    return SplitCertificate(
        name=RP2_NAME,
        location="KO^6(M(2))",
        justification=Justification.EXTERNAL,
        sub=sub,
        quotient=quotient,
        resolved=FinAbGroup2.cyclic(2),
        split=False,
        evidence={"order": 4},
        note="identified with KO~^0(RP^2) = Z/4; externally sourced",
    )


def ko_moore2_table() -> AdamsModule:
    """KO^*(M(2)) and K^*(M(2)) from the sphere tables."""
    sphere = ko_sphere_table()
    return AdamsModule(
        "M(2)",
        smash_moore(sphere.ko, 1, _rp2_resolver, name="M(2)"),
        smash_moore(sphere.k, 1, name="M(2)"),
    )


def _moore_resolver(moore: AdamsModule) -> Resolver:
    def resolve(degree: int, sub: FinAbGroup2, quotient: FinAbGroup2) -> SplitCertificate:
        slot = moore.ko.slot_at(degree)
        if slot.certificate is None:
            raise ContradictionNotFound(f"S^4 M(2) carries no certificate in degree {degree}")
        return SplitCertificate(
            name="MTM-" + slot.certificate.name,
            location=f"KO^{degree}(T ^ M(2))",
            justification=slot.certificate.justification,
            sub=sub,
            quotient=quotient,
            resolved=slot.group,
            split=slot.group == sub.direct_sum(quotient),
            evidence={"order": slot.group.order},
            note="T ^ M(2) = S^4 M(2)",
        )

    return resolve


def _t_moore2_ko(t: AdamsModule) -> AdamsGradedTable:
    """KO^*(T ^ M(2)), checked degree by degree against KO^*(S^4 M(2))."""
    moore = suspend_module(ko_moore2_table(), 4)
    ko = smash_moore(t.ko, 1, _moore_resolver(moore), name="T ^ M(2^1)")
    for n in range(8):
        if ko.group(n) != moore.ko.group(n):
            raise InternalMismatch(f"KO^{n}(T ^ M(2)) = {ko.group(n)} but KO^{n}(S^4 M(2)) = {moore.ko.group(n)}")
    return ko


def adams_table_T_moore(e: int) -> AdamsModule:
    """
    KO^* and K^* of T ^ M(2^e).

    For e > 1 the KO^2 extension is settled by order counting; for e = 1 it
    comes from T ^ M(2) = S^4 M(2) and the Z/4 in KO^{-2}(M(2)).
    """
    if e < 1:
        raise ValueError(f"Moore exponent must be >= 1, got {e}")
    t = adams_table_T()
    name = f"T ^ M(2^{e})"
    if e == 1:
        ko = _t_moore2_ko(t)
    else:

        def resolve(degree: int, sub: FinAbGroup2, quotient: FinAbGroup2) -> SplitCertificate:
            if degree != 2:
                raise ContradictionNotFound(f"unexpected open extension in KO^{degree}({name})")
            return order_counting_certificate(e)

        ko = smash_moore(t.ko, e, resolve, name=name)
    return AdamsModule(name, ko, smash_moore(t.k, e, name=name))


def order_counting_certificate(e: int, *, t_module: Optional[AdamsModule] = None) -> SplitCertificate:
    """
    Settle 0 -> Z/2 -> KO^2(Y) -> Z/2 -> 0 for Y = T ^ M(2^e), e > 1.

    |KO^2(Y ^ M(2))| is 8 by M(2^e) ^ M(2) = S^{-1} M(2) v M(2); each candidate
    for KO^2(Y) predicts |KO^2(Y)/2| * |KO^3(Y)[2]| instead, and only one
    candidate may agree.
    """
    if e <= 1:
        raise ValueError(f"order counting needs e > 1, got {e}")
    t = t_module if t_module is not None else adams_table_T()
    sub, quotient = moore_pieces(t.ko, e, 2)
    s3, q3 = moore_pieces(t.ko, e, 3)
    if not q3.is_zero:
        raise ContradictionNotFound(f"KO^3(T ^ M(2^{e})) is itself an open extension")
    ko3_y = s3.group

    tm2 = _t_moore2_ko(t)
    msplit = tm2.group(2).order * tm2.group(3).order

    counts: Dict[FinAbGroup2, int] = {
        cand: cand.mod_power(1).order * ko3_y.torsion_power(1).order
        for cand in extension_candidates(sub.group, quotient.group)
    }
    agreeing = [g for g, n in counts.items() if n == msplit]
    if len(agreeing) != 1:
        raise ContradictionNotFound(
            f"|KO^2(Y ^ M(2))| = {msplit} does not single out one of {[str(g) for g in counts]}"
        )
    resolved = agreeing[0]
    evidence = {"moore_split_order": msplit}
    evidence.update({f"order_if_{g}": n for g, n in counts.items()})
    logger.debug("KO^2(T ^ M(2^%d)) = %s by order counting", e, resolved)
    return SplitCertificate(
        name="KO2-split",
        location=f"KO^2(T ^ M(2^{e}))",
        justification=Justification.ORDER_COUNTING,
        sub=sub.group,
        quotient=quotient.group,
        resolved=resolved,
        split=resolved == sub.group.direct_sum(quotient.group),
        evidence=evidence,
    )


def shifted_adams_table(L: int = DI4_L, e: int = 21) -> AdamsModule:
    """S^{8L+3} T ^ M(2^e); psi^3 on KO^{4t-1} is 3^{-2(t-2L-1)}."""
    return suspend_module(adams_table_T_moore(e), 8 * L + 3, name=f"S^(8*{L}+3) T ^ M(2^{e})")


@dataclass(frozen=True)
class SlotComparison:
    kind: str
    degree: int
    left: FinAbGroup2
    right: FinAbGroup2
    prec: int = 0
    psi3: Tuple[Optional[int], Optional[int]] = (None, None)
    psi_minus1: Tuple[Optional[int], Optional[int]] = (None, None)

    @property
    def ok(self) -> bool:
        return self.left == self.right and self.psi3[0] == self.psi3[1] and self.psi_minus1[0] == self.psi_minus1[1]

    def describe(self) -> str:
        where = f"{self.kind}^{self.degree}"
        if self.left != self.right:
            return f"{where}: groups {self.left} vs {self.right}"
        if self.psi3[0] != self.psi3[1]:
            return f"{where}: psi^3 {self.psi3[0]} vs {self.psi3[1]} mod 2^{self.prec}"
        if self.psi_minus1[0] != self.psi_minus1[1]:
            return f"{where}: psi^-1 {self.psi_minus1[0]} vs {self.psi_minus1[1]} mod 2^{self.prec}"
        return f"{where}: {self.left}"


@dataclass(frozen=True)
class MatchReport:
    left: str
    right: str
    comparisons: Tuple[SlotComparison, ...]

    @property
    def matched(self) -> bool:
        return all(c.ok for c in self.comparisons)

    @property
    def first_mismatch(self) -> Optional[SlotComparison]:
        return next((c for c in self.comparisons if not c.ok), None)

    def __bool__(self) -> bool:
        return self.matched


def _compare_tables(a: AdamsGradedTable, b: AdamsGradedTable, prec: int) -> List[SlotComparison]:
    if a.period != b.period:
        raise ValueError(f"cannot compare a {a.kind} table with a {b.kind} table")
    out = []
    for n in range(a.period):
        ga, gb = a.group(n), b.group(n)
        if ga != gb or ga.is_trivial:
            out.append(SlotComparison(a.kind, n, ga, gb))
            continue
        p = min(prec, ga.exponent) if ga.is_finite else prec
        psi3 = (a.psi_residue(3, n, p).value, b.psi_residue(3, n, p).value)
        psim = (a.psi_residue(-1, n, p).value, b.psi_residue(-1, n, p).value)
        out.append(SlotComparison(a.kind, n, ga, gb, p, psi3, psim))
    return out


def match_adams_modules(a: AdamsModule, b: AdamsModule, prec: int = 21) -> MatchReport:
    """Slotwise isomorphism of groups and agreement of psi^3, psi^-1 modulo each group's exponent."""
    comparisons = _compare_tables(a.ko, b.ko, prec) + _compare_tables(a.k, b.k, prec)
    report = MatchReport(a.name, b.name, tuple(comparisons))
    if report.matched:
        logger.info("%s and %s have isomorphic Adams modules", a.name, b.name)
    else:
        logger.info("%s vs %s: %s", a.name, b.name, report.first_mismatch.describe())
    return report


class Classification(str, Enum):
    SPHERE_LIKE = "sphere-like"
    PSEUDOSPHERE_LIKE = "pseudosphere-like"


def _is_elementary(g: FinAbGroup2) -> bool:
    return g.is_finite and not g.is_trivial and g.exponent == 1


def discriminator_residue(module: AdamsModule) -> Tuple[int, int]:
    """(degree, psi^3 mod 16) in the KO degree just above the block of Z/2's."""
    ko = module.ko
    flags = [_is_elementary(ko.group(n)) for n in range(8)]
    if not any(flags):
        raise ValueError(f"{module.name} has no Z/2 slots")
    if all(flags):
        raise ValueError(f"every KO slot of {module.name} is elementary")
    start = next(n for n in range(8) if flags[n] and not flags[n - 1])
    above = start
    while flags[above % 8]:
        above += 1
    above %= 8
    if ko.group(above).is_trivial:
        raise Unclassifiable(f"KO^{above}({module.name}) above the Z/2 block is zero")
    return above, ko.psi_residue(3, above, 4).value


def pseudosphere_discriminator(module: AdamsModule) -> Classification:
    degree, r = discriminator_residue(module)
    if r == 1:
        return Classification.SPHERE_LIKE
    if r == 9:
        return Classification.PSEUDOSPHERE_LIKE
    raise Unclassifiable(f"psi^3 = {r} mod 16 on KO^{degree}({module.name})")
