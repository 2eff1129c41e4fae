"""
Adams operations on the free module of KO^*(Phi_1 DI(4)) generators.

psi^2 and psi^3 act on a free 2-adic module M on three generators (modulo
decomposables); theta = psi^2 / 2 and its kernel and cokernel, integrally
and mod 2, give KO^*(Phi_1 DI(4)) and K^*(Phi_1 DI(4)).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from v1di4.errors import (
    InternalMismatch,
    NonScalarAction,
    NotInjective,
    OddEntry,
    SingularSolve,
    ZeroGroup,
)
from v1di4.graded import AdamsGradedTable, AdamsModule, AdamsSlot, PsiLaw, ZERO_SLOT
from v1di4.padic_core import ONE, OddRational
from v1di4.types import FinAbGroup2, Justification, SplitCertificate
from v1di4.zlinalg import (
    CokerPresentation,
    IntMatrix,
    cokernel_mod2,
    coker_presentation,
    image_mod2,
    kernel_mod2,
)

logger = logging.getLogger(__name__)

RatMatrix = Tuple[Tuple[OddRational, ...], ...]


def rat_matrix(rows: Sequence[Sequence[Union[int, Fraction, OddRational]]]) -> RatMatrix:
    return tuple(tuple(OddRational.coerce(x) for x in row) for row in rows)


def _frac_rows(m: Union[IntMatrix, RatMatrix]) -> List[List[Fraction]]:
    if isinstance(m, IntMatrix):
        return [[Fraction(x) for x in row] for row in m.to_rows()]
    return [[x.as_fraction() for x in row] for row in m]


def _frac_matmul(a: List[List[Fraction]], b: List[List[Fraction]]) -> List[List[Fraction]]:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for i in range(len(a))]


def _is_lower_triangular(rows: Sequence[Sequence]) -> bool:
    return all(rows[i][j] == 0 for i in range(len(rows)) for j in range(i + 1, len(rows[i])))


@dataclass(frozen=True)
class CommutationCheck:
    ok: bool
    row: Optional[int] = None
    col: Optional[int] = None
    left: Optional[Fraction] = None
    right: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "psi2*psi3 == psi3*psi2"
        return (
            f"(psi2*psi3)[{self.row + 1},{self.col + 1}] = {self.left} but "
            f"(psi3*psi2)[{self.row + 1},{self.col + 1}] = {self.right}"
        )


def verify_commutation(psi2: Union[IntMatrix, RatMatrix], psi3: Union[IntMatrix, RatMatrix]) -> CommutationCheck:
    """Compare psi2*psi3 and psi3*psi2 entrywise; report the first differing entry."""
    a, b = _frac_rows(psi2), _frac_rows(psi3)
    if len(a) != len(b) or any(len(r) != len(a) for r in a + b):
        raise ValueError("psi2 and psi3 must be square of the same size")
    left, right = _frac_matmul(a, b), _frac_matmul(b, a)
    for i, (lrow, rrow) in enumerate(zip(left, right)):
        for j, (x, y) in enumerate(zip(lrow, rrow)):
            if x != y:
                return CommutationCheck(False, i, j, x, y)
    return CommutationCheck(True)


@dataclass(frozen=True)
class AdamsFreeModule:
    """
    psi^2 and psi^3 on a free module, matrices acting on column vectors:
    column j holds the image of the j-th generator. psi^{-1} is the identity.
    """

    psi2: IntMatrix
    psi3: RatMatrix
    labels: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def rank(self) -> int:
        return self.psi2.rows

    @property
    def psi_minus1(self) -> IntMatrix:
        return IntMatrix.identity(self.rank)

    def validate(self) -> None:
        if not self.psi2.is_square:
            raise ValueError(f"psi2 must be square, got {self.psi2.rows}x{self.psi2.cols}")
        if len(self.psi3) != self.rank or any(len(r) != self.rank for r in self.psi3):
            raise ValueError("psi3 must have the shape of psi2")
        if not _is_lower_triangular(self.psi2.to_rows()):
            raise ValueError("psi2 must be lower triangular")
        check = verify_commutation(self.psi2, self.psi3)
        if not check:
            raise ValueError(f"psi2 and psi3 do not commute: {check.describe()}")

    def rescaled(self, units: Sequence[int]) -> "AdamsFreeModule":
        """Same module in the basis u_j g_j (each u_j odd): D^{-1} psi D."""
        if len(units) != self.rank or any(u % 2 == 0 for u in units):
            raise ValueError(f"need {self.rank} odd scale factors, got {list(units)}")
        n = self.rank
        psi2 = [[Fraction(self.psi2[i, j] * units[j], units[i]) for j in range(n)] for i in range(n)]
        if any(x.denominator != 1 for row in psi2 for x in row):
            raise ValueError(f"rescaling by {list(units)} leaves psi2 non-integral")
        psi3 = [[self.psi3[i][j] * units[j] / units[i] for j in range(n)] for i in range(n)]
        return AdamsFreeModule(
            IntMatrix.from_rows([[int(x) for x in row] for row in psi2]),
            rat_matrix(psi3),
            self.labels,
        )


DI4_PSI2 = IntMatrix.from_rows([[2**4, 0, 0], [-2, 2**6, 0], [0, -2, 2**14]])
DI4_PSI3_DIAG = (3**4, 3**6, 3**14)

ALPHA = OddRational(-(3**3))
BETA = OddRational(36, 527)
GAMMA = OddRational(-(3**5) * 41, 17)


def di4_psi_matrices() -> AdamsFreeModule:
    psi3 = rat_matrix(
        [
            [3**4, 0, 0],
            [ALPHA, 3**6, 0],
            [BETA, GAMMA, 3**14],
        ]
    )
    return AdamsFreeModule(DI4_PSI2, psi3, ("g8", "g12", "g24"))


def commutator_solve(psi2: IntMatrix, diag3: Sequence[Union[int, OddRational]]) -> RatMatrix:
    """
    The lower-triangular matrix with diagonal ``diag3`` commuting with ``psi2``.

    Entry (i, j) below the diagonal solves
    (p_i - p_j) Q_ij = q_i P_ij - P_ij q_j + sum_{j<k<i} (Q_ik P_kj - P_ik Q_kj),
    so entries are filled in order of increasing i - j.
    """
    n = psi2.rows
    if not psi2.is_square or len(diag3) != n:
        raise ValueError(f"need a square psi2 and {n} diagonal entries")
    if not _is_lower_triangular(psi2.to_rows()):
        raise ValueError("psi2 must be lower triangular")
    p = [psi2[i, i] for i in range(n)]
    for i in range(n):
        for j in range(i):
            if p[i] == p[j]:
                raise SingularSolve(f"psi2 diagonal entries {j + 1} and {i + 1} are both {p[i]}")

    P = _frac_rows(psi2)
    Q = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        Q[i][i] = OddRational.coerce(diag3[i]).as_fraction()
    for gap in range(1, n):
        for j in range(n - gap):
            i = j + gap
            rhs = Q[i][i] * P[i][j] - P[i][j] * Q[j][j]
            rhs += sum((Q[i][k] * P[k][j] - P[i][k] * Q[k][j] for k in range(j + 1, i)), Fraction(0))
            Q[i][j] = rhs / (P[i][i] - P[j][j])
    # OddRational rejects an even denominator
    return rat_matrix(Q)


def theta_of(module: AdamsFreeModule) -> IntMatrix:
    """theta = psi^2 / 2."""
    odd = [(i, j) for i in range(module.rank) for j in range(module.rank) if module.psi2[i, j] % 2]
    if odd:
        i, j = odd[0]
        raise OddEntry(f"psi2[{i + 1},{j + 1}] = {module.psi2[i, j]} is odd")
    return IntMatrix(module.psi2.rows, module.psi2.cols, tuple(x // 2 for x in module.psi2.entries))


@dataclass(frozen=True)
class ExactnessWitness:
    """Two orders an exact segment forces to be equal."""

    segment: str
    expected: int
    observed: int

    @property
    def holds(self) -> bool:
        return self.expected == self.observed


# The bottom cell of Phi_1 DI(4) splits 0 -> coker(theta mod 2) -> KO^5 -> ker(theta mod 2) -> 0.
KO5_SPLIT_NAME = "KO5-bottom-cell"


def ko5_certificate(sub: FinAbGroup2, quotient: FinAbGroup2) -> SplitCertificate:
    return SplitCertificate(
        name=KO5_SPLIT_NAME,
        location="KO^5(Phi_1 DI(4))",
        justification=Justification.BOTTOM_CELL,
        sub=sub,
        quotient=quotient,
        resolved=sub.direct_sum(quotient),
        evidence={"sub_order": sub.order, "quotient_order": quotient.order},
        note="split by inclusion of the bottom cell",
    )


def parse_slot(module: AdamsModule, name: str) -> Tuple[AdamsGradedTable, int]:
    """``"KO5"`` -> (module.ko, 5), ``"K1"`` -> (module.k, 1)."""
    key = name.strip().upper()
    if key.startswith("KO"):
        table, index = module.ko, key[2:]
    elif key.startswith("K"):
        table, index = module.k, key[1:]
    else:
        raise ValueError(f"unknown slot {name!r}")
    if not index.isdigit() or int(index) >= table.period:
        raise ValueError(f"no slot {name!r} in a period-{table.period} table")
    return table, int(index)


@dataclass(frozen=True)
class KOPhiTable(AdamsModule):
    """
    KO^* and K^* of Phi_1 DI(4) with psi laws, plus what produced them:
    theta, the cokernel presentation, certificates and exactness witnesses.
    """

    theta: IntMatrix = field(default=IntMatrix.identity(1), compare=False)
    presentation: Optional[CokerPresentation] = field(default=None, compare=False)
    witnesses: Tuple[ExactnessWitness, ...] = field(default=(), compare=False)

    def slot(self, name: str) -> AdamsSlot:
        table, index = parse_slot(self, name)
        return table.slot_at(index)

    def group(self, name: str) -> FinAbGroup2:
        return self.slot(name).group

    @property
    def exact(self) -> bool:
        return all(w.holds for w in self.witnesses)


def _psi3_mod2(module: AdamsFreeModule) -> List[List[int]]:
    return [[x.num % 2 for x in row] for row in module.psi3]


def _apply_mod2(m: List[List[int]], v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) % 2 for row in m)


def _reduce_mod2(v: Sequence[int], image: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    out = list(v)
    for row in image:
        lead = row.index(1)
        if out[lead]:
            out = [(a + b) % 2 for a, b in zip(out, row)]
    return tuple(out)


def _line_scalar(psi3: List[List[int]], basis: Sequence[Sequence[int]], image: Sequence[Sequence[int]]) -> int:
    """psi^3 mod 2 on a subquotient of (Z/2)^n spanned by ``basis`` modulo ``image``."""
    scalar = None
    for v in basis:
        w = _reduce_mod2(_apply_mod2(psi3, v), image)
        v_red = _reduce_mod2(v, image)
        if w == v_red:
            c = 1
        elif not any(w):
            c = 0
        else:
            raise InternalMismatch(f"psi^3 mod 2 does not preserve the line through {tuple(v)}")
        if scalar is not None and c != scalar:
            raise InternalMismatch("psi^3 mod 2 is not a scalar on this subquotient")
        scalar = c
    if scalar == 0:
        raise InternalMismatch("psi^3 mod 2 kills a line; psi^3 must be invertible")
    return 1


def coker_psi3(module: AdamsFreeModule, presentation: CokerPresentation) -> OddRational:
    """
    psi^3 on coker(theta) as a scalar.

    The scalar is read off on a basis vector generating the top summand and
    then checked on every basis vector against every summand; a cokernel on
    which psi^3 is not a single unit raises ``NonScalarAction``.
    """
    exponents = presentation.group.exponents
    images = presentation.gen_images
    if not exponents:
        return ONE

    def psi3_class(j: int, k: int) -> OddRational:
        return sum((module.psi3[i][j] * img[k] for i, img in enumerate(images)), OddRational(0))

    j0 = next(j for j, img in enumerate(images) if img[0] % 2)
    scalar = psi3_class(j0, 0) / images[j0][0]
    for j in range(module.rank):
        for k, e in enumerate(exponents):
            if int((psi3_class(j, k) - scalar * images[j][k]).residue(e)):
                raise NonScalarAction(
                    f"psi^3 on coker(theta) = {presentation.group} is not multiplication by {scalar}"
                    f" (basis vector {j}, summand Z/2^{e})"
                )
    return scalar


def _restrict_to_doubles(theta: IntMatrix) -> IntMatrix:
    """
    Matrix of theta on 2M in the basis 2g_j, i.e. (2I)^{-1} theta (2I).

    Conjugation by 2I is the identity, so this is theta again and the KO^3
    witness built from it only cross-checks |det theta| against the Smith form.
    """
    doubled = theta @ IntMatrix.diagonal([2] * theta.cols)
    return IntMatrix(theta.rows, theta.cols, tuple(x // 2 for x in doubled.entries))


def ko_phi1(module: Optional[AdamsFreeModule] = None) -> KOPhiTable:
    """Evaluate the KO and K exact sequences of theta into groups with psi laws."""
    module = module if module is not None else di4_psi_matrices()
    module.validate()
    theta = theta_of(module)
    det = theta.det()
    if det == 0:
        raise NotInjective("det theta = 0")

    pres_m = coker_presentation(theta)
    pres_2m = coker_presentation(_restrict_to_doubles(theta))
    theta2 = theta.mod2()
    ker2 = kernel_mod2(theta2)
    coker2 = cokernel_mod2(theta2)
    ko4 = FinAbGroup2((1,) * len(ker2))
    ko6 = FinAbGroup2((1,) * len(coker2))
    cert = ko5_certificate(ko6, ko4)
    ko5 = cert.resolved

    c3 = coker_psi3(module, pres_m)
    logger.debug("psi^3 on coker(theta) = %s is %s", pres_m.group, c3)
    odd_law = PsiLaw(c3, 1, -1)

    # psi^3 induced on the mod-2 lines; psi^{-1} is the identity on M
    psi3_2 = _psi3_mod2(module)
    ker_law = PsiLaw(_line_scalar(psi3_2, ker2, [])) if ker2 else PsiLaw()
    coker_law = PsiLaw(_line_scalar(psi3_2, coker2, image_mod2(theta2))) if coker2 else PsiLaw()
    if ker_law != coker_law and ker2 and coker2:
        raise InternalMismatch("psi^3 differs on the two halves of KO^5")

    def slot(g: FinAbGroup2, law: PsiLaw, certificate: Optional[SplitCertificate] = None) -> AdamsSlot:
        return AdamsSlot(g, law, certificate) if not g.is_trivial else ZERO_SLOT

    ko = AdamsGradedTable(
        "Phi_1 DI(4)",
        8,
        (
            ZERO_SLOT,
            ZERO_SLOT,
            ZERO_SLOT,
            slot(pres_2m.group, odd_law),
            slot(ko4, ker_law),
            slot(ko5, ker_law if ker2 else coker_law, cert),
            slot(ko6, coker_law),
            slot(pres_m.group, odd_law),
        ),
    )
    k = AdamsGradedTable("Phi_1 DI(4)", 2, (ZERO_SLOT, slot(pres_m.group, odd_law)))

    mod2_dim = module.rank
    witnesses = (
        ExactnessWitness("0 -> M -> M -> KO^7 -> 0", abs(det), pres_m.group.order),
        ExactnessWitness("0 -> 2M -> 2M -> KO^3 -> 0", abs(det), pres_2m.group.order),
        ExactnessWitness("0 -> M -> M -> K^1 -> 0", abs(det), pres_m.group.order),
        ExactnessWitness(
            "0 -> KO^4 -> M/2 -> M/2 -> KO^6 -> 0",
            ko4.order * 2**mod2_dim,
            2**mod2_dim * ko6.order,
        ),
        ExactnessWitness("0 -> KO^6 -> KO^5 -> KO^4 -> 0", ko4.order * ko6.order, ko5.order),
    )
    for w in witnesses:
        if not w.holds:
            raise InternalMismatch(f"exactness fails on {w.segment}: {w.expected} != {w.observed}")
    logger.info("KO^*(Phi_1 DI(4)): KO^7 = %s, KO^5 = %s", pres_m.group, ko5)
    return KOPhiTable(
        name="Phi_1 DI(4)",
        ko=ko,
        k=k,
        theta=theta,
        presentation=pres_m,
        witnesses=witnesses,
    )


def psi_scalar(table: KOPhiTable, k: int, slot: str, degree: Optional[int] = None) -> OddRational:
    """
    psi^k (k = 3 or -1) on a named slot ("KO0".."KO7", "K0", "K1").

    ``degree`` is the absolute degree at which the law is evaluated; it
    defaults to the KO index, and to 6 or 7 for K slots so that K^1 is read
    in the degree of KO^7.
    """
    tbl, index = parse_slot(table, slot)
    n = degree if degree is not None else (index if tbl.period == 8 else index + 6)
    if n % tbl.period != index:
        raise ValueError(f"degree {n} does not lie in slot {slot}")
    if tbl.slot_at(index).is_zero:
        raise ZeroGroup(f"{slot} is the zero group")
    return tbl.psi(k, n)


def exponent_bound(module: Optional[AdamsFreeModule] = None) -> int:
    """Largest cyclic exponent in KO^* and K^* of the module's Phi_1 table."""
    table = ko_phi1(module)
    return max(s.group.exponent for t in table.tables() for _, s in t)
