"""
Homotopy groups: pi_*(M_{K/2}), pi_*(T ^ M(2^21)), v1-periodic pi_*(DI(4)),
and a reconstruction of pi_*(T) from the Moore long exact sequence.

Degrees are absolute integers. ``(i, d)`` stands for degree 8i + d and is
normalised to d in [-2, 5] before any table lookup.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

from v1di4.errors import (
    AmbiguousTable,
    ContradictionNotFound,
    InternalMismatch,
    NoConsistentTable,
)
from v1di4.graded import extension_candidates, is_extension
from v1di4.padic_core import DI4_L, clamped_exponent, val2
from v1di4.types import ZERO, FinAbGroup2, Justification, SplitCertificate

logger = logging.getLogger(__name__)

MOORE_EXPONENT = 21

FOUR_SEQ_RESIDUES = (3, 4, 5, -2)
ORACLE_RESIDUES = (2, 3, 4, 5, -2)


def normalize(i: int, d: int) -> Tuple[int, int]:
    """(i, d) -> (i', d') with 8i + d = 8i' + d' and -2 <= d' <= 5."""
    q, r = divmod(8 * i + d + 2, 8)
    return q, r - 2


def _cyc(e: int) -> FinAbGroup2:
    return FinAbGroup2.cyclic(e)


FLASH_PATTERN = (1, 1, 2, 1, 1)

# pi_{8i+d}(M_{K/2}) as displayed, keyed by d in [-2, 5]
DISPLAYED_PI_M = {
    -2: _cyc(1),
    -1: FinAbGroup2.of(1, 1),
    0: FinAbGroup2.of(2, 1),
    1: FinAbGroup2.of(2, 1),
    2: FinAbGroup2.of(1, 1),
    3: _cyc(1),
    4: ZERO,
    5: ZERO,
}


def lightning_flash(start: int) -> Dict[int, FinAbGroup2]:
    """Z/2, Z/2, Z/4, Z/2, Z/2 in degrees start .. start+4, repeating mod 8; keys in [-2, 5]."""
    out = {d: ZERO for d in range(-2, 6)}
    for offset, e in enumerate(FLASH_PATTERN):
        out[normalize(0, start + offset)[1]] = _cyc(e)
    return out


def pi_M_K2(d: int) -> FinAbGroup2:
    """pi_{8i+d}(M_{K/2}), the sum of the flashes starting at -2 and -1."""
    r = normalize(0, d)[1]
    g = lightning_flash(-2)[r].direct_sum(lightning_flash(-1)[r])
    if g != DISPLAYED_PI_M[r]:
        raise InternalMismatch(f"flash sum {g} differs from the displayed pi_{r}(M_K/2) = {DISPLAYED_PI_M[r]}")
    return g


def four_seq(i: int, d: int) -> Tuple[FinAbGroup2, FinAbGroup2]:
    """End terms (sub, quotient) of the short exact sequence for pi_{8i+d}(T ^ M(2^21))."""
    i, d = normalize(i, d)
    if d == 3:
        return _cyc(1), _cyc(3)
    if d == 4:
        return FinAbGroup2.of(1, 1), _cyc(1)
    if d == 5:
        return _cyc(1), FinAbGroup2.of(1, 1)
    if d == -2:
        return _cyc(clamped_exponent(i)), _cyc(1)
    raise ValueError(f"no four-term sequence in degree 8i{d:+d}")


def pi_T_moore(i: int, d: int, e: int = MOORE_EXPONENT) -> FinAbGroup2:
    """pi_{8i+d}(T ^ M(2^21)) with every sequence from ``four_seq`` split."""
    if e != MOORE_EXPONENT:
        raise ValueError(f"the table is known for M(2^{MOORE_EXPONENT}) only, got e={e}")
    i, d = normalize(i, d)
    if d == -1:
        return _cyc(clamped_exponent(i))
    if d in (0, 1):
        return ZERO
    if d == 2:
        return _cyc(3)
    sub, quotient = four_seq(i, d)
    return sub.direct_sum(quotient)


def _summands(g: FinAbGroup2) -> int:
    return g.num_summands


def splitting_oracle(d: int, i: int = 0) -> SplitCertificate:
    """
    Compare |pi_{8i+d}(Y ^ M(2))|, Y = T ^ M(2^21), two ways.

    From M(2^21) ^ M(2) = S^{-1} M(2) v M(2) and T ^ M(2) = S^4 M_{K/2} the
    order is |pi_{d-3}(M_K/2)| * |pi_{d-4}(M_K/2)|. From the sequence for
    Y ^ M(2) it is 2^{r(pi_{d+1} Y) + r(pi_d Y)} with r the number of cyclic
    summands, which only the split extensions reach.
    """
    if d not in ORACLE_RESIDUES:
        raise ValueError(f"splitting_oracle is defined for d in {ORACLE_RESIDUES}, got {d}")
    twosum = pi_M_K2(d - 3).order * pi_M_K2(d - 4).order

    def count(groups: Dict[int, FinAbGroup2]) -> int:
        return 2 ** (_summands(groups[d + 1]) + _summands(groups[d]))

    split = {k: pi_T_moore(i, k) for k in (d, d + 1)}
    split_count = count(split)

    nonsplit: List[int] = []
    for k in (d, d + 1):
        if normalize(i, k)[1] not in FOUR_SEQ_RESIDUES:
            continue
        sub, quotient = four_seq(i, k)
        for cand in extension_candidates(sub, quotient):
            if cand == split[k]:
                continue
            nonsplit.append(count({**split, k: cand}))

    if split_count != twosum:
        raise ContradictionNotFound(f"d={d}: split hypothesis gives {split_count}, S^4 M(2) gives {twosum}")
    if any(n >= twosum for n in nonsplit):
        raise ContradictionNotFound(f"d={d}: a non-split hypothesis also reaches order {twosum}")

    if d in FOUR_SEQ_RESIDUES:
        sub, quotient = four_seq(i, d)
        note = ""
    else:
        sub, quotient = pi_T_moore(i, d), ZERO
        note = "no extension in this degree; the count bounds the sequence one degree up"
    logger.debug("splitting oracle d=%d: order %d, best non-split %s", d, twosum, max(nonsplit, default=None))
    return SplitCertificate(
        name=f"4seq-d{d}",
        location=f"pi_(8i{d:+d})(T ^ M(2^21))",
        justification=Justification.ORDER_COUNTING,
        sub=sub,
        quotient=quotient,
        resolved=sub.direct_sum(quotient),
        evidence={
            "twosum_order": twosum,
            "split_order": split_count,
            "max_nonsplit_order": max(nonsplit, default=0),
        },
        note=note,
    )


def pi_T_moore_certified(i: int, d: int, e: int = MOORE_EXPONENT) -> Tuple[FinAbGroup2, Optional[SplitCertificate]]:
    group = pi_T_moore(i, d, e)
    i, d = normalize(i, d)
    cert = splitting_oracle(d, i) if d in FOUR_SEQ_RESIDUES else None
    if cert is not None and cert.resolved != group:
        raise InternalMismatch(f"certificate {cert.name} resolves to {cert.resolved}, table says {group}")
    return group, cert


def v1_closed_form(i: int, d: int, L: int = DI4_L) -> FinAbGroup2:
    """v1^{-1} pi_{8i+d}(DI(4)) for d in 1..8, with e_i = min(21, 4 + nu(i - L))."""
    e_i = clamped_exponent(i - L)
    rows = {
        1: FinAbGroup2.of(e_i, 1),
        2: _cyc(e_i),
        3: ZERO,
        4: ZERO,
        5: _cyc(3),
        6: FinAbGroup2.of(3, 1),
        7: FinAbGroup2.of(1, 1, 1),
        8: FinAbGroup2.of(1, 1, 1),
    }
    if d not in rows:
        raise ValueError(f"d must be in 1..8, got {d}")
    return rows[d]


def v1_homotopy(i: int, d: int, L: int = DI4_L) -> FinAbGroup2:
    """
    v1^{-1} pi_{8i+d}(DI(4)), computed from the closed form and again from
    Phi_1 DI(4) = S^{8L+3} T ^ M(2^21); the two must agree.
    """
    closed = v1_closed_form(i, d, L)
    shift = 8 * L + 3
    shifted = pi_T_moore(0, 8 * i + d - shift)
    if closed != shifted:
        raise InternalMismatch(f"pi_(8*{i}+{d}): closed form {closed}, suspension {shifted}")
    return closed


@dataclass(frozen=True)
class DegreeWitness:
    """0 -> pi_{j+1}(T)/2^21 -> pi_j(T ^ M(2^21)) -> pi_j(T)[2^21] -> 0 in degree j."""

    degree: int
    sub: FinAbGroup2
    quotient: FinAbGroup2
    middle: FinAbGroup2
    pinned: bool = False

    @property
    def holds(self) -> bool:
        return is_extension(self.sub, self.quotient, self.middle)


@dataclass(frozen=True)
class PiTRule:
    """
    Torsion of pi_{8i+r}(T) as a function of i, plus isolated free summands.

    ``constant``: the same torsion for every i. ``nu_family``: Z/2^{nu(i-c)+k},
    torsion-free at i = c. ``explicit``: listed values only.
    """

    residue: int
    kind: str
    torsion: FinAbGroup2 = ZERO
    center: int = 0
    offset: int = 0
    free: Dict[int, int] = field(default_factory=dict)
    values: Dict[int, FinAbGroup2] = field(default_factory=dict)

    def torsion_at(self, i: int) -> FinAbGroup2:
        if self.kind == "constant":
            return self.torsion
        if self.kind == "nu_family":
            return ZERO if i == self.center else _cyc(int(val2(i - self.center)) + self.offset)
        return self.values[i]

    def at(self, i: int) -> FinAbGroup2:
        t = self.torsion_at(i)
        return FinAbGroup2(t.exponents, self.free.get(i, 0))

    def describe(self) -> str:
        n = f"8i+{self.residue}"
        if self.kind == "constant":
            text = f"pi_({n})(T) = {self.torsion}"
        elif self.kind == "nu_family":
            text = f"pi_({n})(T) = Z/2^(nu(i-({self.center}))+{self.offset})"
        else:
            text = f"pi_({n})(T) listed for {len(self.values)} values of i"
        extra = [f"Zhat_2^{r} at i={i}" if r > 1 else f"Zhat_2 at i={i}" for i, r in sorted(self.free.items())]
        return text + (" plus " + ", ".join(extra) if extra else "")


@dataclass(frozen=True)
class PiTTable:
    window: int
    groups: Dict[int, FinAbGroup2]
    rules: Dict[int, PiTRule]
    witnesses: Tuple[DegreeWitness, ...]
    used_ansatz: bool = False

    def group(self, n: int) -> FinAbGroup2:
        return self.groups[n]

    @property
    def exact(self) -> bool:
        return all(w.holds for w in self.witnesses)


@lru_cache(maxsize=None)
def _subtypes(g: FinAbGroup2) -> Tuple[FinAbGroup2, ...]:
    combos = itertools.product(*(range(a + 1) for a in g.exponents))
    return tuple(sorted({FinAbGroup2(tuple(x for x in c if x)) for c in combos}, key=lambda h: h.exponents))


def _mod_moore(g: FinAbGroup2) -> FinAbGroup2:
    return g.mod_power(MOORE_EXPONENT)


def _torsion_moore(g: FinAbGroup2) -> FinAbGroup2:
    return g.torsion_power(MOORE_EXPONENT)


def _fit_rule(residue: int, torsion: Dict[int, FinAbGroup2], free: Dict[int, int]) -> Optional[PiTRule]:
    """Constant or nu-family rule for one residue, or None."""
    values = set(torsion.values())
    if len(values) == 1:
        return PiTRule(residue, "constant", values.pop(), free=free)
    if any(len(g.exponents) > 1 for g in values):
        return None
    indices = sorted(torsion)
    for c in indices:
        if not torsion[c].is_trivial:
            continue
        probe = c + 1 if c + 1 in torsion else c - 1
        if probe not in torsion:
            continue
        k = torsion[probe].exponent
        rule = PiTRule(residue, "nu_family", center=c, offset=k, free=free)
        if all(rule.torsion_at(i) == torsion[i] for i in indices):
            return rule
    return None


def _rules(groups: Dict[int, FinAbGroup2]) -> Tuple[Dict[int, PiTRule], bool]:
    """Per-residue rules; the flag is False when some residue fits no rule."""
    rules: Dict[int, PiTRule] = {}
    all_fit = True
    for r in range(8):
        by_i = {(n - r) // 8: g for n, g in groups.items() if n % 8 == r}
        torsion = {i: FinAbGroup2(g.exponents) for i, g in by_i.items()}
        free = {i: g.free_rank for i, g in by_i.items() if g.free_rank}
        rule = _fit_rule(r, torsion, free)
        if rule is None:
            all_fit = False
            rule = PiTRule(r, "explicit", free=free, values=torsion)
        rules[r] = rule
    return rules, all_fit


# Linked list of chosen groups, newest degree first
_Chain = Optional[Tuple[FinAbGroup2, "_Chain"]]


def reconstruct_pi_T(
    window: int = 256,
    *,
    moore_table: Callable[[int, int], FinAbGroup2] = pi_T_moore,
    max_solutions: int = 64,
) -> PiTTable:
    """
    Solve for pi_n(T), -8W+1 <= n <= 8W+2, from

        0 -> pi_{j+1}(T)/2^21 -> pi_j(T ^ M(2^21)) -> pi_j(T)[2^21] -> 0

    with the four-term sequences pinned to their split ends. Each unknown is
    Zhat_2^f (+) (2-torsion of exponent <= 21). When several tables satisfy
    every sequence, keep those whose torsion depends on i only through a
    constant or a nu-family rule.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    lo, hi = -8 * window + 1, 8 * window + 2

    ys = {n: moore_table(0, n) for n in range(lo - 1, hi + 1)}
    pins: Dict[int, Optional[Tuple[FinAbGroup2, FinAbGroup2]]] = {}
    for j in range(lo, hi):
        i, d = normalize(0, j)
        pins[j] = four_seq(i, d) if d in FOUR_SEQ_RESIDUES else None

    domains: Dict[int, List[FinAbGroup2]] = {}
    for n in range(lo, hi + 1):
        below = ys[n - 1]
        top = sum(1 for a in below.exponents if a == MOORE_EXPONENT)
        domains[n] = [
            FinAbGroup2(t.exponents, f)
            for t in _subtypes(ys[n])
            for f in range(top + 1)
            if below.contains_type(_mod_moore(FinAbGroup2(t.exponents, f)))
        ]
        if not domains[n]:
            raise NoConsistentTable(f"no candidate for pi_{n}(T)")

    def compatible(j: int, here: FinAbGroup2, above: FinAbGroup2) -> bool:
        sub, quotient = _mod_moore(above), _torsion_moore(here)
        pin = pins[j]
        if pin is not None and (sub, quotient) != pin:
            return False
        return is_extension(sub, quotient, ys[j])

    # forward pass: number of consistent prefixes ending in each candidate
    counts: Dict[int, Dict[FinAbGroup2, int]] = {lo: {g: 1 for g in domains[lo]}}
    for n in range(lo + 1, hi + 1):
        prev = counts[n - 1]
        counts[n] = {
            g: sum(c for h, c in prev.items() if c and compatible(n - 1, h, g))
            for g in domains[n]
        }
    total = sum(counts[hi].values())
    logger.info("pi_*(T) on |i| <= %d: %d consistent table(s)", window, total)
    if total == 0:
        raise NoConsistentTable(f"no table is exact in every degree for |i| <= {window}")
    if total > max_solutions:
        raise AmbiguousTable(f"{total} tables are exact in every degree")

    # backward pass: enumerate the consistent tables
    chains: List[_Chain] = [(g, None) for g, c in counts[hi].items() if c]
    for n in range(hi - 1, lo - 1, -1):
        chains = [
            (h, chain)
            for chain in chains
            for h, c in counts[n].items()
            if c and compatible(n, h, chain[0])
        ]

    tables = []
    for chain in chains:
        groups: Dict[int, FinAbGroup2] = {}
        n, node = lo, chain
        while node is not None:
            groups[n], node = node[0], node[1]
            n += 1
        tables.append(groups)

    used_ansatz = len(tables) > 1
    if used_ansatz:
        tables = [t for t in tables if _rules(t)[1]]
        logger.info("nu-family ansatz keeps %d of %d tables", len(tables), total)
        if not tables:
            raise NoConsistentTable("no exact table has torsion depending on i only through nu")
        if len(tables) > 1:
            raise AmbiguousTable(f"{len(tables)} exact tables remain under the nu-family ansatz")

    groups = tables[0]
    rules, _ = _rules(groups)
    witnesses = tuple(
        DegreeWitness(
            j,
            _mod_moore(groups[j + 1]),
            _torsion_moore(groups[j]),
            ys[j],
            pins[j] is not None,
        )
        for j in range(lo, hi)
    )
    bad = next((w for w in witnesses if not w.holds), None)
    if bad is not None:
        raise InternalMismatch(f"reconstructed table is not exact in degree {bad.degree}")
    return PiTTable(window, groups, rules, witnesses, used_ansatz)
