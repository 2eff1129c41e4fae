"""
Exact 2-adic residue arithmetic.

Valuations, inverses of odd integers, modular powers, rationals with odd
denominators, discrete logarithms to base 3, and the congruence
``3^{4L+2} = 3^4 - 6^3 + (36/527) 2^8 (mod 2^21)`` whose least solution is
L = 90627.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from sympy import binomial

from v1di4.errors import (
    EvenArgument,
    EvenDenominator,
    InternalMismatch,
    NoSolution,
    NotInSubgroup,
)

logger = logging.getLogger(__name__)

INFINITY = math.inf
Val2 = Union[int, float]

DI4_L = 90627
TRACE_VALUE_AT_L = 192725


def val2(n: int) -> Val2:
    """Exponent of 2 in ``n``; ``INFINITY`` for 0."""
    if n == 0:
        return INFINITY
    return (n & -n).bit_length() - 1


def clamped_exponent(n: int, *, offset: int = 4, cap: int = 21) -> int:
    """``min(cap, offset + val2(n))``; the only place the e_i clamp is evaluated."""
    v = val2(n)
    if v == INFINITY:
        return cap
    return min(cap, offset + int(v))


@dataclass(frozen=True)
class PadicResidue:
    """An integer reduced into [0, 2^prec)."""

    value: int
    prec: int

    def __post_init__(self) -> None:
        if self.prec < 1:
            raise ValueError(f"prec must be positive, got {self.prec}")
        if not (0 <= self.value < (1 << self.prec)):
            raise ValueError(f"{self.value} is not reduced mod 2^{self.prec}")

    @classmethod
    def of(cls, n: int, prec: int) -> "PadicResidue":
        return cls(n % (1 << prec), prec)

    @property
    def modulus(self) -> int:
        return 1 << self.prec

    @property
    def is_unit(self) -> bool:
        return self.value % 2 == 1

    def reduce(self, prec: int) -> "PadicResidue":
        if prec > self.prec:
            raise ValueError(f"cannot raise precision from {self.prec} to {prec}")
        return PadicResidue.of(self.value, prec)

    def inverse(self) -> "PadicResidue":
        return inv_odd(self.value, self.prec)

    def _coerce(self, other: Union["PadicResidue", int]) -> int:
        if isinstance(other, PadicResidue):
            if other.prec != self.prec:
                raise ValueError(f"precision mismatch: 2^{self.prec} vs 2^{other.prec}")
            return other.value
        if isinstance(other, int):
            return other
        raise TypeError(f"cannot combine a 2-adic residue with {other!r}")

    def __add__(self, other: Union["PadicResidue", int]) -> "PadicResidue":
        return PadicResidue.of(self.value + self._coerce(other), self.prec)

    __radd__ = __add__

    def __sub__(self, other: Union["PadicResidue", int]) -> "PadicResidue":
        return PadicResidue.of(self.value - self._coerce(other), self.prec)

    def __rsub__(self, other: int) -> "PadicResidue":
        return PadicResidue.of(other - self.value, self.prec)

    def __mul__(self, other: Union["PadicResidue", int]) -> "PadicResidue":
        return PadicResidue.of(self.value * self._coerce(other), self.prec)

    __rmul__ = __mul__

    def __neg__(self) -> "PadicResidue":
        return PadicResidue.of(-self.value, self.prec)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return f"{self.value} mod 2^{self.prec}"


def inv_odd(a: int, prec: int) -> PadicResidue:
    """Inverse of the odd integer ``a`` modulo 2^prec."""
    if a % 2 == 0:
        raise EvenArgument(f"{a} is not a 2-adic unit")
    return PadicResidue(pow(a, -1, 1 << prec), prec)


def modpow2(base: int, exp: int, prec: int) -> PadicResidue:
    """base^exp mod 2^prec by square-and-multiply, reducing after every step."""
    if exp < 0:
        raise ValueError(f"exponent must be nonnegative, got {exp}")
    mod = 1 << prec
    result = 1 % mod
    base %= mod
    while exp > 0:
        if exp & 1:
            result = (result * base) % mod
        exp >>= 1
        base = (base * base) % mod
    return PadicResidue(result, prec)


Number = Union["OddRational", int, Fraction]


@dataclass(frozen=True)
class OddRational:
    """Reduced fraction num/den with den odd and positive (den = 1 when num = 0)."""

    num: int
    den: int = 1

    def __post_init__(self) -> None:
        if self.den == 0:
            raise ZeroDivisionError("denominator is zero")
        num, den = self.num, self.den
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        num, den = num // g, den // g
        if den % 2 == 0:
            raise EvenDenominator(f"{num}/{den} is not 2-integral")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "OddRational":
        return cls(q.numerator, q.denominator)

    @classmethod
    def coerce(cls, x: Number) -> "OddRational":
        if isinstance(x, OddRational):
            return x
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, Fraction):
            return cls.from_fraction(x)
        raise TypeError(f"cannot interpret {x!r} as an odd-denominator rational")

    @classmethod
    def parse(cls, text: str) -> "OddRational":
        """Parse ``"a"`` or ``"a/b"``."""
        num, _, den = text.strip().partition("/")
        return cls(int(num), int(den) if den else 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def is_integer(self) -> bool:
        return self.den == 1

    @property
    def is_unit(self) -> bool:
        return self.num % 2 == 1

    def residue(self, prec: int) -> PadicResidue:
        return rat_to_residue(self, prec)

    def __add__(self, other: Number) -> "OddRational":
        return OddRational.from_fraction(self.as_fraction() + OddRational.coerce(other).as_fraction())

    __radd__ = __add__

    def __sub__(self, other: Number) -> "OddRational":
        return OddRational.from_fraction(self.as_fraction() - OddRational.coerce(other).as_fraction())

    def __rsub__(self, other: Number) -> "OddRational":
        return OddRational.coerce(other) - self

    def __mul__(self, other: Number) -> "OddRational":
        return OddRational.from_fraction(self.as_fraction() * OddRational.coerce(other).as_fraction())

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "OddRational":
        return OddRational.from_fraction(self.as_fraction() / OddRational.coerce(other).as_fraction())

    def __rtruediv__(self, other: Number) -> "OddRational":
        return OddRational.coerce(other) / self

    def __neg__(self) -> "OddRational":
        return OddRational(-self.num, self.den)

    def __pow__(self, k: int) -> "OddRational":
        return OddRational.from_fraction(self.as_fraction() ** k)

    def to_dict(self) -> dict:
        return {"num": str(self.num), "den": str(self.den)}

    @classmethod
    def from_dict(cls, data: dict) -> "OddRational":
        return cls(int(data["num"]), int(data["den"]))

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


ONE = OddRational(1)


def rat_to_residue(q: OddRational, prec: int) -> PadicResidue:
    return PadicResidue.of(q.num * inv_odd(q.den, prec).value, prec)


# Right-hand side of the defining congruence for L.
LEQ_RIGHT_SIDE = OddRational(3**4 - 6**3) + OddRational(36, 527) * 2**8


def dlog3(u: PadicResidue) -> PadicResidue:
    """
    x mod 2^{prec-2} with 3^x = u (mod 2^prec).

    Bit k of x is fixed by comparing mod 2^{k+3}; this works because
    3^{2^k} = 1 + 2^{k+2} (mod 2^{k+3}) for k >= 1.
    """
    n = u.prec
    if n < 3:
        raise ValueError(f"dlog3 needs prec >= 3, got {n}")
    v = u.value
    if v % 2 == 0:
        raise EvenArgument(f"{v} is not a unit mod 2^{n}")
    if v % 8 not in (1, 3):
        raise NotInSubgroup(f"{v} = {v % 8} mod 8 is not a power of 3")

    x = 1 if v % 8 == 3 else 0
    for k in range(1, n - 2):
        mod = 1 << (k + 3)
        if modpow2(3, x, k + 3).value != v % mod:
            x += 1 << k
    return PadicResidue(x, n - 2)


def solve_L(rhs: PadicResidue) -> int:
    """
    Least L >= 0 with 3^{4L+2} = rhs (mod 2^prec).

    The solution set is L + 2^{prec-4} Z; at prec 21 that is L + 2^17 Z.
    """
    if rhs.prec < 4:
        raise ValueError(f"solve_L needs prec >= 4, got {rhs.prec}")
    try:
        x = dlog3(rhs)
    except (EvenArgument, NotInSubgroup) as e:
        raise NoSolution(f"3^(4L+2) = {rhs} has no solution: {e}") from e
    if x.value % 4 != 2:
        raise NoSolution(f"log_3({rhs}) = {x.value} is not 2 mod 4")

    L = (x.value - 2) // 4
    if modpow2(3, 4 * L + 2, rhs.prec) != rhs:
        raise InternalMismatch(f"L = {L} does not satisfy 3^(4L+2) = {rhs}")
    logger.debug("solve_L: %s -> L = %d (mod 2^%d)", rhs, L, rhs.prec - 4)
    return L


def lifting_stages(rhs: OddRational, stages: Tuple[int, ...] = (3, 10, 17)) -> List[Tuple[int, int]]:
    """
    L mod 2^s for each s in ``stages``, each from the congruence mod 2^{s+4}.

    Every stage must reduce to the previous one.
    """
    out: List[Tuple[int, int]] = []
    for s in stages:
        L_s = solve_L(rat_to_residue(rhs, s + 4))
        if out:
            prev_bits, prev_L = out[-1]
            if L_s % (1 << prev_bits) != prev_L:
                raise InternalMismatch(
                    f"stage 2^{s} gives L = {L_s}, not a lift of {prev_L} mod 2^{prev_bits}"
                )
        out.append((s, L_s))
    return out


def _binomial(n: int, k: int) -> int:
    if n < 0:
        # upper negation: C(n, k) = (-1)^k C(k - n - 1, k)
        return (-1) ** k * int(binomial(k - n - 1, k))
    return int(binomial(n, k))


@dataclass(frozen=True)
class TraceCheck:
    name: str
    value: int
    expected: int

    @property
    def passed(self) -> bool:
        return self.value == self.expected


@dataclass(frozen=True)
class LiftingTrace:
    """The three mod-2^prec quantities that must agree when L solves the congruence."""

    L: int
    prec: int
    power_quotient: PadicResidue
    binomial_sum: PadicResidue
    target: PadicResidue

    @property
    def consistent(self) -> bool:
        return self.power_quotient == self.binomial_sum == self.target

    def checks(self, expected: Optional[int] = None) -> List[TraceCheck]:
        if expected is None:
            expected = TRACE_VALUE_AT_L if self.L == DI4_L and self.prec == 18 else self.target.value
        return [
            TraceCheck("(3^(4L-2)-1)/8", self.power_quotient.value, expected),
            TraceCheck("sum C(2L-1,i) 8^(i-1)", self.binomial_sum.value, expected),
            TraceCheck("(1/9)(2^7/527 - 3)", self.target.value, expected),
        ]


def lifting_trace(L: int, *, prec: int = 18, terms: int = 6) -> LiftingTrace:
    """
    Evaluate the three sides of the staged congruence for ``L`` mod 2^prec.

    (3^{4L-2} - 1)/8 = sum_i C(2L-1, i) 8^{i-1} since 3^{4L-2} = (1+8)^{2L-1};
    terms with 3(i-1) >= prec vanish, so six terms suffice at prec 18.
    """
    if L < 0:
        raise ValueError(f"L must be nonnegative, got {L}")
    exp = 4 * L - 2
    if exp >= 0:
        power = modpow2(3, exp, prec + 3)
    else:
        power = modpow2(3, -exp, prec + 3).inverse()
    power_quotient = PadicResidue.of((power.value - 1) >> 3, prec)

    n = 2 * L - 1
    total = sum(_binomial(n, i) * 8 ** (i - 1) for i in range(1, terms + 1))
    binomial_sum = PadicResidue.of(total, prec)

    target = rat_to_residue((OddRational(2**7, 527) - 3) / 9, prec)
    return LiftingTrace(L, prec, power_quotient, binomial_sum, target)
