"""Shared types: finite abelian 2-groups and extension certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Tuple


@dataclass(frozen=True)
class FinAbGroup2:
    """
    ``Zhat_2^free_rank (+) Z/2^e_1 (+) Z/2^e_2 (+) ...`` with e_1 >= e_2 >= ... > 0.

    The empty exponent list with ``free_rank == 0`` is the zero group.
    """

    exponents: Tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self) -> None:
        exps = tuple(sorted((int(e) for e in self.exponents), reverse=True))
        if any(e <= 0 for e in exps):
            raise ValueError(f"cyclic exponents must be positive, got {exps}")
        if self.free_rank < 0:
            raise ValueError(f"free_rank must be >= 0, got {self.free_rank}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def of(cls, *exponents: int, free_rank: int = 0) -> "FinAbGroup2":
        return cls(tuple(exponents), free_rank)

    @classmethod
    def cyclic(cls, e: int) -> "FinAbGroup2":
        """Z/2^e; ``e == 0`` gives the zero group."""
        return cls(() if e == 0 else (e,))

    @classmethod
    def free(cls, rank: int = 1) -> "FinAbGroup2":
        return cls((), rank)

    @property
    def is_trivial(self) -> bool:
        return not self.exponents and self.free_rank == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def log2_order(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return sum(self.exponents)

    @property
    def order(self) -> int:
        return 1 << self.log2_order

    @property
    def exponent(self) -> int:
        """Largest cyclic exponent (0 for a torsion-free group)."""
        return self.exponents[0] if self.exponents else 0

    @property
    def num_summands(self) -> int:
        """Dimension of G/2 over F_2, i.e. the number of cyclic summands."""
        return len(self.exponents) + self.free_rank

    def direct_sum(self, other: "FinAbGroup2") -> "FinAbGroup2":
        return FinAbGroup2(self.exponents + other.exponents, self.free_rank + other.free_rank)

    def mod_power(self, e: int) -> "FinAbGroup2":
        """G / 2^e G."""
        exps = [min(a, e) for a in self.exponents] + [e] * self.free_rank
        return FinAbGroup2(tuple(exps))

    def torsion_power(self, e: int) -> "FinAbGroup2":
        """G[2^e], the 2^e-torsion subgroup."""
        return FinAbGroup2(tuple(min(a, e) for a in self.exponents))

    def contains_type(self, other: "FinAbGroup2") -> bool:
        """True iff ``other`` is isomorphic to a subgroup (equivalently a quotient) of ``self``."""
        if not (self.is_finite and other.is_finite):
            raise ValueError("type containment is only defined for finite groups")
        if len(other.exponents) > len(self.exponents):
            return False
        return all(b <= a for a, b in zip(self.exponents, other.exponents))

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"cyclic_2_exponents": list(self.exponents)}
        if self.free_rank:
            out["free_rank"] = self.free_rank
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FinAbGroup2":
        return cls(tuple(data.get("cyclic_2_exponents", ())), int(data.get("free_rank", 0)))

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = ["Zhat_2"] * self.free_rank
        parts += ["Z/2" if e == 1 else f"Z/2^{e}" for e in self.exponents]
        return " + ".join(parts)


ZERO = FinAbGroup2()


def direct_sum(groups: Iterable[FinAbGroup2]) -> FinAbGroup2:
    out = ZERO
    for g in groups:
        out = out.direct_sum(g)
    return out


class Justification(str, Enum):
    ORDER_COUNTING = "order-counting"
    BOTTOM_CELL = "bottom-cell"
    EXTERNAL = "external"


@dataclass
class SplitCertificate:
    """
    Recorded resolution of one short exact sequence 0 -> sub -> ? -> quotient -> 0.

    ``split`` is False only for extensions known to be nontrivial (the Z/4 in
    KO^{-2}(M(2))); ``evidence`` holds the orders the argument compared.
    """

    name: str
    location: str
    justification: Justification
    sub: FinAbGroup2
    quotient: FinAbGroup2
    resolved: FinAbGroup2
    split: bool = True
    evidence: Dict[str, int] = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "location": self.location,
            "justification": self.justification.value,
            "sub": self.sub.to_dict(),
            "quotient": self.quotient.to_dict(),
            "resolved": self.resolved.to_dict(),
            "split": self.split,
            "evidence": dict(self.evidence),
            "note": self.note,
        }
