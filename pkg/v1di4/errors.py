"""
Exception hierarchy for v1di4.

Every error a library operation can raise derives from ``V1Error`` and from
the builtin a caller would already be catching (``ValueError`` for bad
inputs, ``ArithmeticError`` for singular solves, ``RuntimeError`` for
internal consistency failures).
"""

from __future__ import annotations


class V1Error(Exception):
    """Root of all v1di4 errors."""


# input / domain errors


class EvenArgument(V1Error, ValueError):
    """An even integer was used where a 2-adic unit is required."""


class NotInSubgroup(V1Error, ValueError):
    """A unit outside the cyclic subgroup generated by 3 (u = 5, 7 mod 8)."""


class NoSolution(V1Error, ValueError):
    """A congruence has no solution at the requested precision."""


class NotTwoLocal(V1Error, ValueError):
    """A determinant or invariant factor has an odd prime factor."""


class InfiniteCokernel(V1Error, ValueError):
    """The cokernel has a free part and the caller did not opt in."""


class OddEntry(V1Error, ValueError):
    """Halving a matrix that has an odd entry."""


class NotInjective(V1Error, ValueError):
    """theta has zero determinant."""


class ZeroGroup(V1Error, ValueError):
    """An Adams operation was requested on a zero group."""


class EvenDenominator(V1Error, ValueError):
    """A solved matrix entry is not 2-integral."""


class Unclassifiable(V1Error, ValueError):
    """psi^3 reduces to neither 1 nor 9 mod 16 next to the Z/2 block."""


class NonScalarAction(V1Error, ValueError):
    """psi^3 on a cokernel is not multiplication by a single 2-adic unit."""


# arithmetic


class SingularSolve(V1Error, ArithmeticError):
    """Two diagonal entries of psi^2 coincide, so a commutator solve is singular."""


# internal consistency (must never fire on correct inputs)


class ContradictionNotFound(V1Error, RuntimeError):
    """An order-counting argument failed to single out one extension."""


class InternalMismatch(V1Error, RuntimeError):
    """Two independent computations of the same quantity disagree."""


class NoConsistentTable(V1Error, RuntimeError):
    """No table under the finitely generated ansatz satisfies the sequences."""


class AmbiguousTable(V1Error, RuntimeError):
    """More than one table under the ansatz satisfies the sequences."""


__all__ = [
    "V1Error",
    "EvenArgument",
    "NotInSubgroup",
    "NoSolution",
    "NotTwoLocal",
    "InfiniteCokernel",
    "OddEntry",
    "NotInjective",
    "ZeroGroup",
    "EvenDenominator",
    "Unclassifiable",
    "NonScalarAction",
    "SingularSolve",
    "ContradictionNotFound",
    "InternalMismatch",
    "NoConsistentTable",
    "AmbiguousTable",
]
