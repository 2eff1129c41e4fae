"""
Configuration for the v1di4 computations and checks.
"""

from dataclasses import dataclass
from typing import Tuple


@dataclass
class V1Config:
    """Precisions, ranges and seeds shared by the CLI and the self-test."""

    prec: int = 21
    moore_exponent: int = 21
    shift_index: int = 90627

    # Staged determination of L
    trace_prec: int = 18
    trace_terms: int = 6
    lifting_stages: Tuple[int, ...] = (3, 10, 17)

    dual_route_range: int = 1024
    reconstruct_window: int = 256

    # Randomized property suites
    random_trials: int = 1000
    random_seed: int = 20070
    brute_det_bound: int = 2**10

    def validate(self) -> None:
        if not (4 <= self.prec <= 40):
            raise ValueError(f"prec must be in [4, 40], got {self.prec}")
        if self.moore_exponent < 1:
            raise ValueError(f"moore_exponent must be >= 1, got {self.moore_exponent}")
        if self.shift_index < 0:
            raise ValueError(f"shift_index must be >= 0, got {self.shift_index}")
        if not (4 <= self.trace_prec <= self.prec):
            raise ValueError("trace_prec must be in [4, prec]")
        if self.trace_terms < 1:
            raise ValueError("trace_terms must be >= 1")
        if list(self.lifting_stages) != sorted(set(self.lifting_stages)):
            raise ValueError("lifting_stages must be strictly increasing")
        if self.lifting_stages and not (1 <= self.lifting_stages[0] and self.lifting_stages[-1] <= self.prec - 4):
            raise ValueError(f"lifting_stages must lie in [1, prec - 4], got {self.lifting_stages}")
        for name in ("dual_route_range", "reconstruct_window", "random_trials"):
            v = getattr(self, name)
            if v < 1:
                raise ValueError(f"{name} must be >= 1, got {v}")
        if self.brute_det_bound < 2:
            raise ValueError("brute_det_bound must be >= 2")


DEFAULT_CONFIG = V1Config()
