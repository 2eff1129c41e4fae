"""
Graded Adams tables.

A table records, for each degree class modulo its period (8 for KO, 2 for
K), a 2-group together with the action of psi^3 and psi^{-1}. Laws are kept
in absolute degrees, so suspension re-keys slots and shifts the weight of
each law instead of rewriting scalars.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from sympy.utilities.iterables import partitions

from v1di4.errors import ContradictionNotFound, ZeroGroup
from v1di4.padic_core import ONE, OddRational, PadicResidue, modpow2
from v1di4.types import ZERO, FinAbGroup2, SplitCertificate

logger = logging.getLogger(__name__)


def _power(k: int, exp: int) -> OddRational:
    return OddRational(k) ** exp


def _power_residue(k: int, exp: int, prec: int) -> PadicResidue:
    if k == -1:
        return PadicResidue.of(-1 if exp % 2 else 1, prec)
    r = modpow2(k, abs(exp), prec)
    return r.inverse() if exp < 0 else r


@dataclass(frozen=True)
class PsiLaw:
    """
    psi^k = c_k * k^{(weight - n)/2} on a group in absolute degree n.

    With ``weight`` None the operations are degree-independent scalars
    (``psi^3 = c3``, ``psi^{-1} = cm1``).
    """

    c3: OddRational = ONE
    cm1: int = 1
    weight: Optional[int] = None

    def __post_init__(self) -> None:
        if self.cm1 not in (1, -1):
            raise ValueError(f"psi^-1 constant must be +-1, got {self.cm1}")
        object.__setattr__(self, "c3", OddRational.coerce(self.c3))

    @classmethod
    def bott(cls, weight: int = 0) -> "PsiLaw":
        """psi^k = k^{(weight - n)/2}, the law on the Bott classes of a sphere."""
        return cls(ONE, 1, weight)

    def exponent(self, degree: int) -> int:
        if self.weight is None:
            return 0
        if (self.weight - degree) % 2:
            raise ValueError(f"law of weight {self.weight} is undefined in odd offset degree {degree}")
        return (self.weight - degree) // 2

    def _constant(self, k: int) -> OddRational:
        if k == 3:
            return self.c3
        if k == -1:
            return OddRational(self.cm1)
        raise ValueError(f"only psi^3 and psi^-1 are tracked, got k={k}")

    def value(self, k: int, degree: int) -> OddRational:
        return self._constant(k) * _power(k, self.exponent(degree))

    def residue(self, k: int, degree: int, prec: int) -> PadicResidue:
        return self._constant(k).residue(prec) * _power_residue(k, self.exponent(degree), prec)

    def suspended(self, s: int) -> "PsiLaw":
        if self.weight is None:
            return self
        return replace(self, weight=self.weight + s)

    def describe(self, k: int) -> str:
        c = self._constant(k)
        if self.weight is None:
            return str(c)
        law = f"{k}^(({self.weight}-n)/2)"
        return law if c == ONE else f"{c}*{law}"


TRIVIAL_LAW = PsiLaw()


@dataclass(frozen=True)
class AdamsSlot:
    group: FinAbGroup2 = ZERO
    law: PsiLaw = TRIVIAL_LAW
    certificate: Optional[SplitCertificate] = field(default=None, compare=False)

    @property
    def is_zero(self) -> bool:
        return self.group.is_trivial


ZERO_SLOT = AdamsSlot()


@dataclass(frozen=True)
class AdamsGradedTable:
    """
    Slots indexed by degree modulo ``period``; ``shift`` records how far the
    table has been suspended from the spectrum it was built from.
    """

    name: str
    period: int
    slots: Tuple[AdamsSlot, ...]
    shift: int = 0

    def __post_init__(self) -> None:
        if self.period not in (2, 8):
            raise ValueError(f"period must be 2 (K) or 8 (KO), got {self.period}")
        if len(self.slots) != self.period:
            raise ValueError(f"{self.name}: expected {self.period} slots, got {len(self.slots)}")

    @property
    def kind(self) -> str:
        return "KO" if self.period == 8 else "K"

    def slot_at(self, degree: int) -> AdamsSlot:
        return self.slots[degree % self.period]

    def group(self, degree: int) -> FinAbGroup2:
        return self.slot_at(degree).group

    def psi(self, k: int, degree: int) -> OddRational:
        slot = self.slot_at(degree)
        if slot.is_zero:
            raise ZeroGroup(f"{self.kind}^{degree}({self.name}) is zero")
        return slot.law.value(k, degree)

    def psi_residue(self, k: int, degree: int, prec: int) -> PadicResidue:
        slot = self.slot_at(degree)
        if slot.is_zero:
            raise ZeroGroup(f"{self.kind}^{degree}({self.name}) is zero")
        return slot.law.residue(k, degree, prec)

    def certificates(self) -> List[SplitCertificate]:
        return [s.certificate for s in self.slots if s.certificate is not None]

    def __iter__(self) -> Iterator[Tuple[int, AdamsSlot]]:
        return iter(enumerate(self.slots))


@dataclass(frozen=True)
class AdamsModule:
    """KO-type and K-type tables of one spectrum."""

    name: str
    ko: AdamsGradedTable
    k: AdamsGradedTable

    def tables(self) -> Tuple[AdamsGradedTable, AdamsGradedTable]:
        return self.ko, self.k

    def certificates(self) -> List[SplitCertificate]:
        return self.ko.certificates() + self.k.certificates()


def table_from_groups(
    name: str,
    period: int,
    groups: Dict[int, Tuple[FinAbGroup2, PsiLaw]],
) -> AdamsGradedTable:
    """Build a table from ``{residue: (group, law)}``; missing residues are zero."""
    slots = []
    for r in range(period):
        if r in groups:
            g, law = groups[r]
            slots.append(AdamsSlot(g, law))
        else:
            slots.append(ZERO_SLOT)
    return AdamsGradedTable(name, period, tuple(slots))


def suspend(table: AdamsGradedTable, s: int, *, name: Optional[str] = None) -> AdamsGradedTable:
    """KO^n(Sigma^s X) = KO^{n-s}(X)."""
    slots = tuple(
        replace(table.slot_at(n - s), law=table.slot_at(n - s).law.suspended(s))
        for n in range(table.period)
    )
    return AdamsGradedTable(name or f"S^{s} {table.name}", table.period, slots, table.shift + s)


def suspend_module(module: AdamsModule, s: int, *, name: Optional[str] = None) -> AdamsModule:
    label = name or f"S^{s} {module.name}"
    return AdamsModule(label, suspend(module.ko, s, name=label), suspend(module.k, s, name=label))


def _dominates(big: Tuple[int, ...], small: Tuple[int, ...]) -> bool:
    total_big = total_small = 0
    for k in range(max(len(big), len(small))):
        total_big += big[k] if k < len(big) else 0
        total_small += small[k] if k < len(small) else 0
        if total_big < total_small:
            return False
    return True


@lru_cache(maxsize=None)
def is_extension(sub: FinAbGroup2, quotient: FinAbGroup2, middle: FinAbGroup2) -> bool:
    """
    Whether ``middle`` can sit in 0 -> sub -> middle -> quotient -> 0.

    Finite parts must satisfy sub (+) quotient <= middle <= (sub_k + quotient_k)_k in
    dominance order and contain both ends; free ranks must add up.
    """
    if sub.free_rank + quotient.free_rank != middle.free_rank:
        return False
    a, c, g = (FinAbGroup2(x.exponents) for x in (sub, quotient, middle))
    if a.log2_order + c.log2_order != g.log2_order:
        return False
    if not (g.contains_type(a) and g.contains_type(c)):
        return False
    split = a.direct_sum(c).exponents
    n = max(len(a.exponents), len(c.exponents))
    pad_a = a.exponents + (0,) * (n - len(a.exponents))
    pad_c = c.exponents + (0,) * (n - len(c.exponents))
    stacked = tuple(x + y for x, y in zip(pad_a, pad_c))
    return _dominates(g.exponents, split) and _dominates(stacked, g.exponents)


def extension_candidates(sub: FinAbGroup2, quotient: FinAbGroup2) -> List[FinAbGroup2]:
    """All finite middle groups of 0 -> sub -> ? -> quotient -> 0, split sum first."""
    if not (sub.is_finite and quotient.is_finite):
        raise ValueError("extension_candidates is defined for finite groups")
    n = sub.log2_order + quotient.log2_order
    if n == 0:
        return [ZERO]
    max_parts = len(sub.exponents) + len(quotient.exponents)
    found = []
    for p in partitions(n, m=max_parts):
        exps = tuple(sorted((part for part, mult in p.items() for _ in range(mult)), reverse=True))
        g = FinAbGroup2(exps)
        if is_extension(sub, quotient, g):
            found.append(g)
    split = sub.direct_sum(quotient)
    found.sort(key=lambda g: (g != split, -len(g.exponents), g.exponents))
    return found


# (degree residue, sub, quotient) -> certificate naming the middle group
Resolver = Callable[[int, FinAbGroup2, FinAbGroup2], SplitCertificate]


def moore_pieces(table: AdamsGradedTable, e: int, degree: int) -> Tuple[AdamsSlot, AdamsSlot]:
    """
    End terms of 0 -> coker(2^e | G^n) -> H^n -> ker(2^e | G^{n+1}) -> 0 for
    H = KO^*(X wedge M(2^e)), each carrying the law it inherits.
    """
    here, above = table.slot_at(degree), table.slot_at(degree + 1)
    sub = AdamsSlot(here.group.mod_power(e), here.law)
    quotient = AdamsSlot(above.group.torsion_power(e), above.law.suspended(-1))
    return sub, quotient


def smash_moore(
    table: AdamsGradedTable,
    e: int,
    resolver: Optional[Resolver] = None,
    *,
    name: Optional[str] = None,
) -> AdamsGradedTable:
    """
    Table of X wedge M(2^e) from the table of X.

    Degrees where both end terms are nonzero need a certificate from
    ``resolver``; without one the extension is left open and
    ``ContradictionNotFound`` is raised.
    """
    if e < 1:
        raise ValueError(f"Moore exponent must be >= 1, got {e}")
    label = name or f"{table.name} ^ M(2^{e})"
    slots = []
    for n in range(table.period):
        sub, quotient = moore_pieces(table, e, n)
        if sub.is_zero:
            slots.append(quotient if not quotient.is_zero else ZERO_SLOT)
            continue
        if quotient.is_zero:
            slots.append(sub)
            continue
        if resolver is None:
            raise ContradictionNotFound(
                f"{table.kind}^{n}({label}): extension of {quotient.group} by {sub.group} is unresolved"
            )
        cert = resolver(n, sub.group, quotient.group)
        if not is_extension(sub.group, quotient.group, cert.resolved):
            raise ContradictionNotFound(
                f"certificate {cert.name} resolves to {cert.resolved}, not an extension of "
                f"{quotient.group} by {sub.group}"
            )
        if sub.law != quotient.law:
            raise ValueError(f"{table.kind}^{n}({label}): end terms carry different psi laws")
        logger.debug("%s^%d(%s) resolved by %s to %s", table.kind, n, label, cert.name, cert.resolved)
        slots.append(AdamsSlot(cert.resolved, sub.law, cert))
    return AdamsGradedTable(label, table.period, tuple(slots), table.shift)
