"""Pareto utilities and quality indicators for two-objective optimization.

All public functions take plain sequences of floats. Dominance and the
nondominated filter work on the maximization convention; the additive
epsilon indicator is computed on minimization-space vectors (callers
negate maximization values first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


class LengthMismatch(ValueError):
    """Objective vectors of unequal length were combined."""


class DimensionUnsupported(ValueError):
    """Operation only defined for a specific objective count."""


class ReferenceViolation(ValueError):
    """A front point falls below the hypervolume reference point."""


Vec = Sequence[float]


def _check_lengths(a: Vec, b: Vec) -> None:
    if len(a) != len(b):
        raise LengthMismatch(f"objective vectors differ in length: {len(a)} vs {len(b)}")


def dominates(a: Vec, b: Vec) -> bool:
    """True iff a Pareto-dominates b under maximization.

    a must be >= b in every component and > in at least one.
    """
    _check_lengths(a, b)
    strictly_better = False
    for x, y in zip(a, b):
        if x < y:
            return False
        if x > y:
            strictly_better = True
    return strictly_better


def nondominated_filter(points: Sequence[Vec]) -> list[Vec]:
    """Keep exactly the points not dominated by any other, preserving order.

    Duplicates of a retained vector are all retained (strict dominance
    never holds between equal vectors).
    """
    for p in points[1:]:
        _check_lengths(points[0], p)
    return [p for p in points if not any(dominates(q, p) for q in points)]


def epsilon_indicator(a: Vec, b: Vec) -> float:
    """Additive epsilon indicator I(a, b) on minimization-space vectors.

    The smallest shift eps such that a - eps weakly dominates b, i.e.
    max_i (a_i - b_i).
    """
    _check_lengths(a, b)
    return max(x - y for x, y in zip(a, b))


def lp_distance(a: Vec, b: Vec, p: float) -> float:
    """Fractional Lp distance (sum_i |a_i - b_i|^p)^(1/p), p > 0.

    For p < 1 this is not a metric (no triangle inequality) but is still
    symmetric, nonnegative, and zero exactly on equal vectors.
    """
    _check_lengths(a, b)
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    total = sum(abs(x - y) ** p for x, y in zip(a, b))
    return total ** (1.0 / p)


def hypervolume_2d(points: Sequence[Vec], reference: Vec = (0.0, 0.0)) -> float:
    """Area dominated by a two-objective maximization front w.r.t. reference.

    Computed on the nondominated subset by sorting on the first objective
    and summing disjoint rectangles. Every point must weakly dominate the
    reference component-wise.
    """
    if len(reference) != 2:
        raise DimensionUnsupported(f"reference must have 2 objectives, got {len(reference)}")
    for pt in points:
        if len(pt) != 2:
            raise DimensionUnsupported(f"expected 2 objectives, got {len(pt)}")
        if pt[0] < reference[0] or pt[1] < reference[1]:
            raise ReferenceViolation(f"point {tuple(pt)} falls below reference {tuple(reference)}")
    front = nondominated_filter(list(points))
    # Descending in f1; the running maximum of f2 carves disjoint rectangles.
    front = sorted(set((p[0], p[1]) for p in front), reverse=True)
    area = 0.0
    prev_f2 = reference[1]
    for f1, f2 in front:
        if f2 > prev_f2:
            area += (f1 - reference[0]) * (f2 - prev_f2)
            prev_f2 = f2
    return area


@dataclass(frozen=True)
class FrontSnapshot:
    """A set of maximization-form objective vectors with a reference point."""

    points: tuple[tuple[float, ...], ...]
    reference_point: tuple[float, ...] = (0.0, 0.0)

    def hypervolume(self) -> float:
        return hypervolume_2d(self.points, self.reference_point)
