"""Trapezoidal fuzzy numbers, alpha-cut grids, and fuzzy ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .intervals import Interval, prob_geq

__all__ = ["TrapezoidalFuzzyNumber", "AlphaGrid", "prob_geq_fuzzy"]


@dataclass(frozen=True)
class TrapezoidalFuzzyNumber:
    """Fuzzy quantity with support [a, d] and core plateau [b, c].

    Membership rises linearly on [a, b], holds 1 on [b, c], falls
    linearly on [c, d]. Triangular (b == c) and crisp (a == b == c == d)
    shapes are the degenerate cases and are fully supported.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"trapezoid parameters must be finite, got {vals}")
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoid parameters must be ordered a <= b <= c <= d, got {vals}")

    @classmethod
    def crisp(cls, v: float) -> "TrapezoidalFuzzyNumber":
        return cls(v, v, v, v)

    @classmethod
    def triangular(cls, a: float, m: float, d: float) -> "TrapezoidalFuzzyNumber":
        return cls(a, m, m, d)

    @property
    def support(self) -> Interval:
        return Interval(self.a, self.d)

    @property
    def core(self) -> Interval:
        return Interval(self.b, self.c)

    def membership(self, x: float) -> float:
        if x < self.a or x > self.d:
            return 0.0
        if self.b <= x <= self.c:
            return 1.0
        if x < self.b:
            # a < b guaranteed here since x in [a, b) is nonempty
            return (x - self.a) / (self.b - self.a)
        return (self.d - x) / (self.d - self.c)

    def alpha_cut(self, alpha: float) -> Interval:
        """Closed interval of points with membership >= alpha, alpha in (0, 1].

        alpha = 0 returns the support (the closure convention).
        """
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        return Interval(
            self.a + alpha * (self.b - self.a),
            self.d - alpha * (self.d - self.c),
        )

    def __add__(self, other: "TrapezoidalFuzzyNumber") -> "TrapezoidalFuzzyNumber":
        return TrapezoidalFuzzyNumber(
            self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
        )

    def __sub__(self, other: "TrapezoidalFuzzyNumber") -> "TrapezoidalFuzzyNumber":
        return TrapezoidalFuzzyNumber(
            self.a - other.d, self.b - other.c, self.c - other.b, self.d - other.a
        )

    def scale(self, k: float) -> "TrapezoidalFuzzyNumber":
        if not math.isfinite(k):
            raise ValueError(f"scale factor must be finite, got {k}")
        if k >= 0:
            return TrapezoidalFuzzyNumber(k * self.a, k * self.b, k * self.c, k * self.d)
        return TrapezoidalFuzzyNumber(k * self.d, k * self.c, k * self.b, k * self.a)

    def is_crisp(self, tol: float = 0.0) -> bool:
        return self.d - self.a <= tol


@dataclass(frozen=True)
class AlphaGrid:
    """Ordered set of membership levels at which fuzzy numbers get cut."""

    levels: tuple

    def __post_init__(self):
        if len(self.levels) == 0:
            raise ValueError("alpha grid must contain at least one level")
        prev = None
        for lv in self.levels:
            if not (math.isfinite(lv) and 0.0 <= lv <= 1.0):
                raise ValueError(f"alpha level {lv} outside [0, 1]")
            if prev is not None and lv <= prev:
                raise ValueError("alpha levels must be strictly increasing")
            prev = lv

    @classmethod
    def uniform(cls, n: int = 11) -> "AlphaGrid":
        """n evenly spaced levels from 0 to 1 inclusive."""
        if n < 2:
            raise ValueError(f"uniform grid needs at least 2 levels, got {n}")
        return cls(tuple(i / (n - 1) for i in range(n)))

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)


def prob_geq_fuzzy(
    x: TrapezoidalFuzzyNumber,
    y: TrapezoidalFuzzyNumber,
    grid: AlphaGrid | None = None,
) -> float:
    """Rank two fuzzy numbers: mean of interval P(x >= y) over alpha cuts.

    Each level contributes equally; the default grid is 11 uniform levels.
    """
    if grid is None:
        grid = AlphaGrid.uniform(11)
    total = 0.0
    for alpha in grid:
        total += prob_geq(x.alpha_cut(alpha), y.alpha_cut(alpha))
    return total / len(grid)
