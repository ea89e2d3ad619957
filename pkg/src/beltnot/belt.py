"""Latitude belts on the Bloch sphere and the constants derived from them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BeltRegion:
    """Input states with polar angle in ``[theta1, theta2]`` and uniform azimuth.

    Angles are in radians. ``theta1 == theta2`` is a single latitude circle.
    """

    theta1: float
    theta2: float

    def __post_init__(self):
        t1, t2 = float(self.theta1), float(self.theta2)
        if not (math.isfinite(t1) and math.isfinite(t2)):
            raise ValueError("belt angles must be finite")
        if not 0.0 <= t1 <= t2 <= math.pi:
            raise ValueError(
                f"belt requires 0 <= theta1 <= theta2 <= pi, got theta1={t1!r}, theta2={t2!r}"
            )
        object.__setattr__(self, "theta1", t1)
        object.__setattr__(self, "theta2", t2)

    @property
    def degenerate(self) -> bool:
        return self.theta1 == self.theta2


@dataclass(frozen=True)
class BeltConstants:
    k_const: float
    p_const: float
    q_const: float
    r_const: float

    def as_dict(self) -> dict:
        return {"K": self.k_const, "P": self.p_const, "Q": self.q_const, "R": self.r_const}


class CaseId(enum.IntEnum):
    """Which of the four optimal-gate families applies.

    The number fixes both predicates: cases 1 and 2 need odd M, cases 3 and 4
    even M; cases 1 and 3 apply when the upper latitude is at least as far
    from the equator as the lower one.
    """

    CASE1 = 1
    CASE2 = 2
    CASE3 = 3
    CASE4 = 4

    @property
    def odd_m(self) -> bool:
        return self in (CaseId.CASE1, CaseId.CASE2)

    @property
    def upper_dominant(self) -> bool:
        return self in (CaseId.CASE1, CaseId.CASE3)

    @classmethod
    def from_predicates(cls, odd_m: bool, upper_dominant: bool) -> "CaseId":
        if odd_m:
            return cls.CASE1 if upper_dominant else cls.CASE2
        return cls.CASE3 if upper_dominant else cls.CASE4

    def partner(self) -> "CaseId":
        """The case with the same parity and the other latitude ordering."""
        return CaseId.from_predicates(self.odd_m, not self.upper_dominant)


def belt_constants(region: BeltRegion) -> BeltConstants:
    c1 = math.cos(region.theta1)
    c2 = math.cos(region.theta2)
    k = c1 * c1 + c1 * c2 + c2 * c2
    s = (c1 + c2) / 4.0
    return BeltConstants(k_const=k, p_const=(3.0 - k) / 6.0, q_const=k / 6.0 + s, r_const=k / 6.0 - s)


def latitude_tie(region: BeltRegion) -> bool:
    return abs(region.theta1 - math.pi / 2) == abs(region.theta2 - math.pi / 2)


def classify_case(region: BeltRegion, m: int) -> CaseId:
    """Case label for ``m`` output copies.

    Exact ties ``|theta1 - pi/2| == |theta2 - pi/2|`` go to case 1 or 3.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    upper = abs(region.theta1 - math.pi / 2) >= abs(region.theta2 - math.pi / 2)
    return CaseId.from_predicates(m % 2 == 1, upper)
