"""Piecewise-constant fuzzy sets and their metrics.

A :class:`PCFuzzy` has thresholds ``0 < a_1 < ... < a_k = 1`` and nested finite
levels ``C_1 ⊇ ... ⊇ C_k``; its alpha-cut is ``C_{i+1}`` for ``alpha`` in
``(a_i, a_{i+1}]``.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .hyperspace import FiniteCompact, hausdorff, induced_image
from .spaces import INTERVAL, Number, PLMap, dist, frac


@dataclass(frozen=True, eq=False)
class PCFuzzy:
    thresholds: tuple
    levels: tuple

    def __post_init__(self):
        th = tuple(frac(a) for a in self.thresholds)
        lv = tuple(self.levels)
        if not th or len(th) != len(lv):
            raise ValueError("need one level per threshold")
        if th[-1] != 1:
            raise ValueError("the last threshold must be exactly 1")
        if th[0] <= 0 or any(b <= a for a, b in zip(th, th[1:])):
            raise ValueError("thresholds must be strictly increasing in (0, 1]")
        if len({C.space for C in lv}) != 1:
            raise ValueError("levels live on different spaces")
        for hi, lo in zip(lv, lv[1:]):
            if not lo.issubset(hi):
                raise ValueError("levels must be nested C_1 ⊇ C_2 ⊇ ...")
        object.__setattr__(self, "thresholds", th)
        object.__setattr__(self, "levels", lv)

    @property
    def space(self) -> str:
        return self.levels[0].space

    @property
    def support(self) -> FiniteCompact:
        return self.levels[0]

    def membership(self, x: Number) -> Fraction:
        """``u(x)``: the largest threshold whose level contains ``x``."""
        x = frac(x)
        best = Fraction(0)
        for a, C in zip(self.thresholds, self.levels):
            if x in C.points:
                best = a
            else:
                break
        return best

    def canonical(self) -> "PCFuzzy":
        """Drop thresholds whose level repeats the next one."""
        th, lv = [], []
        for i, (a, C) in enumerate(zip(self.thresholds, self.levels)):
            if i + 1 < len(self.levels) and self.levels[i + 1] == C:
                continue
            th.append(a)
            lv.append(C)
        return PCFuzzy(tuple(th), tuple(lv))

    def __eq__(self, other):
        if not isinstance(other, PCFuzzy):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.thresholds == b.thresholds and a.levels == b.levels

    def __hash__(self):
        c = self.canonical()
        return hash((c.thresholds, c.levels))

    def __repr__(self):
        parts = ", ".join(f"{a}:{C!r}" for a, C in zip(self.thresholds, self.levels))
        return f"PCFuzzy({parts})"


def chi(K: FiniteCompact) -> PCFuzzy:
    """Characteristic function of ``K``."""
    return PCFuzzy((Fraction(1),), (K,))


def level_set(u: PCFuzzy, alpha: Number) -> FiniteCompact:
    alpha = frac(alpha)
    if alpha <= 0 or alpha > 1:
        raise ValueError(f"alpha={alpha} outside (0, 1]")
    return u.levels[bisect_left(u.thresholds, alpha)]


def zadeh_extend(f: PLMap, u: PCFuzzy) -> PCFuzzy:
    """Zadeh extension computed levelwise; images of nested sets stay nested."""
    levels = tuple(induced_image(f, C) for C in u.levels)
    for hi, lo in zip(levels, levels[1:]):
        assert lo.issubset(hi), "image levels lost nesting"
    return PCFuzzy(u.thresholds, levels)


def refine(u: PCFuzzy, thresholds: Sequence[Fraction]) -> PCFuzzy:
    """Same fuzzy set on a finer threshold grid containing ``u.thresholds``."""
    th = tuple(sorted(set(frac(a) for a in thresholds)))
    if not set(u.thresholds) <= set(th):
        raise ValueError("refinement must contain the original thresholds")
    return PCFuzzy(th, tuple(level_set(u, a) for a in th))


def refine_common(u: PCFuzzy, v: PCFuzzy) -> tuple:
    th = sorted(set(u.thresholds) | set(v.thresholds))
    return refine(u, th), refine(v, th)


def d_infty(u: PCFuzzy, v: PCFuzzy) -> Fraction:
    """Levelwise metric: max over the common level blocks of the Hausdorff distance."""
    ru, rv = refine_common(u, v)
    return max(hausdorff(A, B) for A, B in zip(ru.levels, rv.levels))


@dataclass(frozen=True)
class EndographGrid:
    resolution: int

    def __post_init__(self):
        if int(self.resolution) < 2:
            raise ValueError("endograph grid resolution must be >= 2")

    def points(self, space: str = INTERVAL) -> list:
        n = self.resolution
        top = n if space == INTERVAL else n - 1
        return [Fraction(i, n) for i in range(top + 1)]


def _directed_endograph(u: PCFuzzy, v: PCFuzzy, ys: list) -> Fraction:
    space = u.space
    # a partner y with v(y) = 0 costs at least u(x), which (x, 0) already achieves
    mv = [(y, v.membership(y)) for y in ys]
    mv = [(y, vy) for y, vy in mv if vy > 0]
    worst = Fraction(0)
    # points outside supp(u) sit at height 0 and are matched by (x, 0) itself
    for x in u.support.points:
        ux = u.membership(x)
        best = ux  # (x, 0) always lies in end(v)
        for y, vy in mv:
            c = max(dist(x, y, space), ux - vy if ux > vy else Fraction(0))
            if c < best:
                best = c
        if best > worst:
            worst = best
    return worst


def d_endograph(u: PCFuzzy, v: PCFuzzy, grid: EndographGrid | int = 1000) -> Fraction:
    """Hausdorff distance of endographs in X×[0,1] under the max metric.

    For a fixed base point the worst height is ``u(x)`` and the best partner
    height is ``min(u(x), v(y))``, so the directed part reduces to
    ``max_x min_y max(d(x, y), (u(x) - v(y))^+)`` over ``y`` in the grid merged
    with both supports. Grid points off ``supp(v)`` never beat the partner
    ``(x, 0)``, so for piecewise-constant sets the value is exact at every
    resolution.
    """
    if not isinstance(grid, EndographGrid):
        grid = EndographGrid(int(grid))
    if u.space != v.space:
        raise ValueError("fuzzy sets on different spaces")
    ys = sorted(set(u.support.points) | set(v.support.points))
    return max(_directed_endograph(u, v, ys), _directed_endograph(v, u, ys))
