"""
Integer matrix algebra over Z and the 2-local integers.

Smith normal form with unimodular witnesses, cokernel presentations of
square matrices whose determinant is a power of 2, and kernels/cokernels
over F_2.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from sympy import Matrix, factorint
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from v1di4.errors import InfiniteCokernel, InternalMismatch, NotTwoLocal
from v1di4.padic_core import inv_odd, val2
from v1di4.types import FinAbGroup2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major matrix of Python integers."""

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"shape must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, tuple(int(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntMatrix":
        n = len(diag)
        return cls.from_rows([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = [other.col(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)]
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([list(self.col(j)) for j in range(self.cols)])

    def scaled(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def mod2(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(x % 2 for x in self.entries))

    def det(self) -> int:
        if not self.is_square:
            raise ValueError("det of a non-square matrix")
        dm = DomainMatrix([[ZZ(x) for x in row] for row in self.to_rows()], (self.rows, self.cols), ZZ)
        return int(dm.det())

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)


def snf(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Return (U, D, V) with U @ A @ V == D, U and V unimodular, D diagonal,
    d_i >= 0 and d_i | d_{i+1}.

    Pivot on the nonzero entry of least absolute value, clear its row and
    column, and fold in a row whenever the pivot fails to divide the rest.
    """
    r, c = A.rows, A.cols
    D = A.to_rows()
    U = IntMatrix.identity(r).to_rows()
    V = IntMatrix.identity(c).to_rows()

    def swap_rows(i: int, j: int) -> None:
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for m in (D, V):
            for row in m:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, k: int) -> None:
        for m in (D, U):
            m[dst] = [a + k * b for a, b in zip(m[dst], m[src])]

    def add_col(dst: int, src: int, k: int) -> None:
        for m in (D, V):
            for row in m:
                row[dst] += k * row[src]

    for t in range(min(r, c)):
        while True:
            nonzero = [(abs(D[i][j]), i, j) for i in range(t, r) for j in range(t, c) if D[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = D[t][t]

            clean = True
            for i in range(t + 1, r):
                q = D[i][t] // p
                if q:
                    add_row(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, c):
                q = D[t][j] // p
                if q:
                    add_col(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue

            bad = next(
                ((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)

        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    Um, Dm, Vm = IntMatrix.from_rows(U), IntMatrix.from_rows(D), IntMatrix.from_rows(V)
    _check_snf(A, Um, Dm, Vm)
    return Um, Dm, Vm


def _check_snf(A: IntMatrix, U: IntMatrix, D: IntMatrix, V: IntMatrix) -> None:
    if U @ A @ V != D:
        raise InternalMismatch("U @ A @ V != D")
    if abs(U.det()) != 1 or abs(V.det()) != 1:
        raise InternalMismatch("Smith witnesses are not unimodular")
    if not D.is_diagonal():
        raise InternalMismatch("Smith form is not diagonal")
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    if any(d < 0 for d in diag):
        raise InternalMismatch(f"negative invariant factor in {diag}")
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a != 0 and b % a):
            raise InternalMismatch(f"divisibility chain broken in {diag}")


def invariant_factors(A: IntMatrix) -> List[int]:
    _, D, _ = snf(A)
    return [D[i, i] for i in range(min(D.rows, D.cols))]


@dataclass(frozen=True)
class CokerPresentation:
    """
    coker(A) = Z^n / A Z^n as ``group`` plus the image of every basis vector.

    ``gen_images[j][k]`` is the coefficient of the k-th generator of ``group``
    (cyclic generators first, in the order of ``group.exponents``, then free
    generators) in the class of e_j. Cyclic coefficients lie in [0, 2^e).
    """

    group: FinAbGroup2
    gen_images: Tuple[Tuple[int, ...], ...]

    @property
    def is_cyclic(self) -> bool:
        return self.group.is_finite and len(self.group.exponents) == 1

    def generator_index(self) -> int:
        """First basis vector whose class generates a cyclic cokernel (odd image)."""
        if not self.is_cyclic:
            raise ValueError(f"cokernel {self.group} is not cyclic")
        return next(j for j, img in enumerate(self.gen_images) if img[0] % 2)


def _odd_part(n: int) -> int:
    n = abs(n)
    return n >> int(val2(n))


def coker_presentation(A: IntMatrix, *, allow_free: bool = False) -> CokerPresentation:
    """
    Cokernel of ``A`` as a 2-group with generator images from the U witness.

    Raises ``InfiniteCokernel`` for det 0 unless ``allow_free`` (then the free
    part is reported through ``free_rank``) and ``NotTwoLocal`` when an
    invariant factor has an odd prime divisor.
    """
    if not A.is_square and not allow_free:
        raise ValueError(f"coker_presentation needs a square matrix, got {A.rows}x{A.cols}")
    U, D, _ = snf(A)
    diag = [D[i, i] if i < min(D.rows, D.cols) else 0 for i in range(A.rows)]

    if 0 in diag and not allow_free:
        raise InfiniteCokernel(f"det = 0; cokernel has free rank {diag.count(0)}")
    for d in diag:
        if d and _odd_part(d) != 1:
            primes = sorted(factorint(_odd_part(d)))
            raise NotTwoLocal(f"invariant factor {d} has odd prime factors {primes}")

    cyclic: List[Tuple[int, Tuple[int, ...]]] = []
    free: List[Tuple[int, ...]] = []
    for i, d in enumerate(diag):
        row = U.row(i)
        if d == 1:
            continue
        if d == 0:
            free.append(row)
            continue
        e = int(val2(d))
        reduced = [x % d for x in row]
        unit = next(x for x in reduced if x % 2)
        scale = inv_odd(unit, e).value
        cyclic.append((e, tuple((x * scale) % d for x in reduced)))
    cyclic.sort(key=lambda item: -item[0])

    group = FinAbGroup2(tuple(e for e, _ in cyclic), len(free))
    components = [coeffs for _, coeffs in cyclic] + free
    gen_images = tuple(tuple(comp[j] for comp in components) for j in range(A.rows))
    logger.debug("coker of %dx%d matrix: %s", A.rows, A.cols, group)
    return CokerPresentation(group, gen_images)


def coker_order(A: IntMatrix) -> int:
    """|coker A| = |det A| for a square matrix with 2-power determinant."""
    return coker_presentation(A).group.order


def brute_force_quotient(A: IntMatrix, *, bound: int = 2**10) -> FinAbGroup2:
    """
    Z^n / A Z^n by enumeration, independent of ``snf``.

    The quotient is the subgroup of (Q/Z)^n generated by the columns of
    A^{-1}; it is enumerated breadth-first and its type read off from the
    number of elements killed by each 2^k.
    """
    if not A.is_square:
        raise ValueError("brute_force_quotient needs a square matrix")
    det = A.det()
    if det == 0 or abs(det) > bound:
        raise ValueError(f"|det| = {abs(det)} outside (0, {bound}]")
    inv = Matrix(A.to_rows()).inv()
    steps = [
        tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) % 1 for i in range(A.rows))
        for j in range(A.cols)
    ]

    zero = tuple(Fraction(0) for _ in range(A.rows))
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for s in steps:
            y = tuple((a + b) % 1 for a, b in zip(x, s))
            if y not in seen:
                seen.add(y)
                queue.append(y)

    orders: Dict[int, int] = {}
    for x in seen:
        den = max((q.denominator for q in x), default=1)
        k = int(val2(den)) if den > 1 else 0
        if _odd_part(den) != 1:
            raise NotTwoLocal(f"quotient has an element of order {den}")
        orders[k] = orders.get(k, 0) + 1

    # log2 |Q[2^k]| = sum_j min(e_j, k); its increments count parts >= k
    top = max(orders)
    killed = [sum(n for kk, n in orders.items() if kk <= k) for k in range(top + 1)]
    logs = [int(val2(n)) for n in killed]
    parts_at_least = [logs[k] - logs[k - 1] for k in range(1, top + 1)]
    exponents: List[int] = []
    for k in range(1, top + 1):
        above = parts_at_least[k] if k < top else 0
        exponents += [k] * (parts_at_least[k - 1] - above)
    return FinAbGroup2(tuple(exponents))


Vector2 = Tuple[int, ...]


def _rref_mod2(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[List[List[int]], List[int]]:
    m = [[x % 2 for x in row] for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                m[i] = [(a + b) % 2 for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def kernel_mod2(A: IntMatrix) -> List[Vector2]:
    """Basis of {v : A v = 0 mod 2}, one vector per free column of rref(A mod 2)."""
    reduced, pivots = _rref_mod2(A.to_rows(), A.cols)
    basis: List[Vector2] = []
    for f in (c for c in range(A.cols) if c not in pivots):
        v = [0] * A.cols
        v[f] = 1
        for row, p in zip(reduced, pivots):
            v[p] = row[f]
        basis.append(tuple(v))
    return basis


def image_mod2(A: IntMatrix) -> List[Vector2]:
    reduced, _ = _rref_mod2(A.transpose().to_rows(), A.rows)
    return [tuple(row) for row in reduced]


def cokernel_mod2(A: IntMatrix) -> List[Vector2]:
    """Standard basis vectors spanning a complement of im(A mod 2)."""
    _, pivots = _rref_mod2(A.transpose().to_rows(), A.rows)
    return [tuple(1 if k == i else 0 for k in range(A.rows)) for i in range(A.rows) if i not in pivots]
