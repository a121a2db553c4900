"""Finite compact sets under the Hausdorff metric, plus circle arcs."""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Sequence

from .spaces import CIRCLE, INTERVAL, Number, PLMap, dist, frac, point


@dataclass(frozen=True)
class FiniteCompact:
    """Nonempty finite set of points, stored sorted and deduplicated."""

    points: tuple
    space: str = INTERVAL

    def __post_init__(self):
        pts = tuple(sorted({point(p, self.space) for p in self.points}))
        if not pts:
            raise ValueError("a compact set here must be nonempty")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, *pts: Number, space: str = INTERVAL) -> "FiniteCompact":
        return cls(tuple(pts), space)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, x):
        return point(x, self.space) in self.points

    def union(self, other: "FiniteCompact") -> "FiniteCompact":
        _same_space(self.space, other.space)
        return FiniteCompact(self.points + other.points, self.space)

    def issubset(self, other: "FiniteCompact") -> bool:
        return set(self.points) <= set(other.points)

    def __repr__(self):
        return "{" + ", ".join(str(p) for p in self.points) + "}"


def _same_space(a: str, b: str):
    if a != b:
        raise ValueError(f"mismatched spaces: {a} vs {b}")


def _nearest(sorted_pts: tuple, x: Fraction, space: str) -> Fraction:
    i = bisect_left(sorted_pts, x)
    cands = [sorted_pts[j] for j in (i - 1, i) if 0 <= j < len(sorted_pts)]
    if space == CIRCLE:
        cands += [sorted_pts[0], sorted_pts[-1]]
    return min(dist(x, c, space) for c in cands)


def directed_hausdorff(A: FiniteCompact, B: FiniteCompact) -> Fraction:
    """``max_{a in A} min_{b in B} d(a, b)``."""
    _same_space(A.space, B.space)
    return max(_nearest(B.points, a, A.space) for a in A.points)


def hausdorff(A: FiniteCompact, B: FiniteCompact) -> Fraction:
    """Exact Hausdorff distance between two finite sets."""
    _same_space(A.space, B.space)
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


def induced_image(f: PLMap, A: FiniteCompact) -> FiniteCompact:
    _same_space(f.space, A.space)
    return FiniteCompact(tuple(f(a) for a in A.points), A.space)


def phi(p: Sequence[Number], space: str = INTERVAL) -> FiniteCompact:
    """Underlying set of a product point ``(x_1, ..., x_m)``."""
    return FiniteCompact(tuple(p), space)


def phi_fiber(K: FiniteCompact, m: int) -> list:
    """All ``m``-tuples over the points of ``K`` whose underlying set is ``K``."""
    pts = K.points
    return [t for t in iproduct(pts, repeat=m) if set(t) == set(pts)]


# ---------------------------------------------------------------------------
# circle arcs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """Closed arc running counterclockwise from ``a`` to ``b``.

    ``a == b`` is the singleton ``{a}`` unless ``full`` is set, in which case
    the arc is the whole circle anchored at ``a``.
    """

    a: Fraction
    b: Fraction
    full: bool = False

    def __post_init__(self):
        a = point(self.a, CIRCLE)
        b = point(self.b, CIRCLE)
        if self.full:
            b = a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> Fraction:
        if self.full:
            return Fraction(1)
        d = self.b - self.a
        return d - math.floor(d)

    def __contains__(self, x) -> bool:
        if self.full:
            return True
        off = point(x, CIRCLE) - self.a
        return off - math.floor(off) <= self.length

    def __repr__(self):
        return f"Arc(S1 @ {self.a})" if self.full else f"Arc[{self.a}, {self.b}]"


def arc_image(f: PLMap, arc: Arc) -> Arc:
    """Image of an arc under an orientation-preserving circle map.

    The image runs from ``f(a)`` to ``f(b)``; it becomes the full circle once
    the lift stretches the arc to length 1 or more.
    """
    if f.space != CIRCLE:
        raise ValueError("arc_image needs a circle map")
    if not f.is_orientation_preserving():
        raise ValueError("arc_image needs an orientation-preserving map")
    fa = f(arc.a)
    if arc.full:
        return Arc(fa, fa, True)
    lifted = _lift_any(f, arc.a + arc.length) - _lift_any(f, arc.a)
    if lifted >= 1:
        return Arc(fa, fa, True)
    return Arc(fa, f(arc.b))


def _lift_any(f: PLMap, x: Fraction) -> Fraction:
    """Lift evaluated at any real ``x`` using ``F(x + 1) = F(x) + degree``."""
    k = math.floor(x)
    return f.lift(x - k) + k * f.degree


def _gap_sup(p: Fraction, q: Fraction, g: Fraction) -> Fraction:
    """sup of ``min(t, g - t)`` (zero past ``g``) over offsets ``t`` in ``[p, q]``."""

    def tent(t):
        return min(t, g - t) if t <= g else Fraction(0)

    if p <= g / 2 <= q:
        return g / 2
    return max(tent(p), tent(q))


def directed_arc_hausdorff(A: Arc, B: Arc) -> Fraction:
    """``sup_{p in A} d(p, B)``; a point in the gap of B at offset ``t`` from
    ``b_B`` is ``min(t, gap - t)`` away from B."""
    if B.full:
        return Fraction(0)
    g = 1 - B.length
    s = A.a - B.b
    s = s - math.floor(s)
    L = A.length
    if s + L <= 1:
        return _gap_sup(s, s + L, g)
    return max(_gap_sup(s, Fraction(1), g), _gap_sup(Fraction(0), s + L - 1, g))


def arc_hausdorff(A: Arc, B: Arc) -> Fraction:
    return max(directed_arc_hausdorff(A, B), directed_arc_hausdorff(B, A))


def theta_step(f: PLMap, state: tuple) -> tuple:
    """``(a, [a, b]) -> (f(a), [f(a), f(b)])`` and ``(a, S^1) -> (f(a), S^1)``."""
    a, arc = state
    _check_theta(a, arc)
    img = arc_image(f, arc)
    return img.a, img


def _check_theta(a, arc: Arc):
    if point(a, CIRCLE) != arc.a:
        raise ValueError(f"theta point {a} is not the anchor of {arc!r}")


def psi(state: tuple) -> tuple:
    """``(a, [a, b]) -> (a, b)`` and ``(a, S^1) -> (a, a)``."""
    a, arc = state
    _check_theta(a, arc)
    return (arc.a, arc.a) if arc.full else (arc.a, arc.b)


def arc_as_compact(arc: Arc, resolution: int) -> FiniteCompact:
    """Grid points of the arc plus its endpoints; handy for cross-checks."""
    pts = [arc.a, arc.b]
    n = int(arc.length * resolution)
    pts += [arc.a + Fraction(i, resolution) for i in range(n + 1)]
    return FiniteCompact(tuple(pts), CIRCLE)


def compacts_from_grid(grid: Iterable[Fraction], m: int, space: str = INTERVAL) -> list:
    """All sets of 1..m grid points, ordered by their padded sorted tuples."""
    from itertools import combinations

    g = sorted(set(grid))
    out = []
    for size in range(1, m + 1):
        out += [FiniteCompact(c, space) for c in combinations(g, size)]
    out.sort(key=lambda K: K.points + (K.points[-1],) * (m - len(K.points)))
    return out
