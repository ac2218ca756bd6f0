"""Tail-bound calculators for the two concentration inequalities the
pipelines lean on: the multiplicative Chernoff bound for binomials and the
bounded-differences bound for functions of a uniformly random permutation.

Both return the bound value clamped to its natural range [0, 2]; values at
or above 1 are flagged vacuous (they exclude nothing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import check_epsilon


@dataclass(frozen=True)
class TailBound:
    value: float
    vacuous: bool

    def to_dict(self) -> dict:
        return {"value": self.value, "vacuous": self.vacuous}


def _bound(value: float) -> TailBound:
    return TailBound(value=value, vacuous=value >= 1.0)


def chernoff_tail(mu: float, epsilon: float) -> TailBound:
    """P[|X - mu| > eps*mu] <= 2*exp(-eps^2 * mu / 3) for binomial X with
    mean mu and 0 < eps < 1."""
    if mu < 0:
        raise ValueError(f"mu must be non-negative, got {mu}")
    check_epsilon(epsilon)
    return _bound(2.0 * math.exp(-epsilon * epsilon * mu / 3.0))


def permutation_tail(n: int, c: float, t: float, denominator: str = "n") -> TailBound:
    """P[|X - E X| >= t] <= 2*exp(-2*t^2 / (c^2 * n)) for X determined by a
    uniformly random permutation of n elements that changes by at most c
    under any single transposition.

    ``denominator`` selects n (the inequality as stated) or "n-1" (the form
    used when one position has already been exposed).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    if denominator == "n":
        denom = n
    elif denominator == "n-1":
        if n < 2:
            raise ValueError("denominator 'n-1' needs n >= 2")
        denom = n - 1
    else:
        raise ValueError(f"denominator must be 'n' or 'n-1', got {denominator!r}")
    return _bound(2.0 * math.exp(-2.0 * t * t / (c * c * denom)))
