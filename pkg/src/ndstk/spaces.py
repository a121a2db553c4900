"""Exact piecewise-linear maps on the unit interval and the circle.

Points are plain :class:`fractions.Fraction` values. On the circle a point is
a value in ``[0, 1)`` read modulo 1; circle maps are stored through a lift.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

INTERVAL = "interval"
CIRCLE = "circle"
SPACES = (INTERVAL, CIRCLE)

Number = Union[Fraction, int, float, str]

# guards the s_k search in build_transitive_zero_entropy
MAX_COMPOSITIONS = 10**6


def frac(x: Number) -> Fraction:
    """Exact rational from an int, Fraction, ``"p/q"`` string or float.

    Floats go through their shortest repr, so ``0.37`` becomes ``37/100``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not points")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite coordinate {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    # numpy scalars and friends
    try:
        return Fraction(x)
    except TypeError:
        return Fraction(repr(float(x)))


def point(x: Number, space: str = INTERVAL) -> Fraction:
    """Validate ``x`` as a point of ``space``; circle values are reduced mod 1."""
    v = frac(x)
    if space == CIRCLE:
        return v - math.floor(v)
    if space != INTERVAL:
        raise ValueError(f"unknown space {space!r}")
    if v < 0 or v > 1:
        raise ValueError(f"point {v} outside [0, 1]")
    return v


def dist(x: Fraction, y: Fraction, space: str = INTERVAL) -> Fraction:
    d = abs(x - y)
    if space == CIRCLE:
        d = d - math.floor(d)
        return min(d, 1 - d)
    return d


def product_dist(p: Sequence[Fraction], q: Sequence[Fraction], space: str = INTERVAL) -> Fraction:
    """Max-metric on X^k."""
    if len(p) != len(q):
        raise ValueError("product points of different length")
    return max(dist(a, b, space) for a, b in zip(p, q))


# ---------------------------------------------------------------------------
# interval unions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of disjoint closed rational intervals, sorted and merged.

    Touching intervals are merged, so ``u_i < l_{i+1}`` always holds.
    """

    intervals: tuple = ()

    def __post_init__(self):
        spans = []
        for lo, hi in self.intervals:
            lo, hi = frac(lo), frac(hi)
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            if lo < 0 or hi > 1:
                raise ValueError(f"interval [{lo}, {hi}] leaves [0, 1]")
            spans.append((lo, hi))
        spans.sort()
        merged = []
        for lo, hi in spans:
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def of(cls, *spans) -> "IntervalUnion":
        return cls(tuple(spans))

    @classmethod
    def points(cls, pts: Iterable[Number]) -> "IntervalUnion":
        return cls(tuple((p, p) for p in pts))

    @classmethod
    def ball(cls, center: Number, radius: Number) -> "IntervalUnion":
        """Closed ball clipped to [0, 1]; empty if it misses the interval."""
        c, r = frac(center), frac(radius)
        lo, hi = max(c - r, Fraction(0)), min(c + r, Fraction(1))
        return cls(((lo, hi),)) if lo <= hi else cls()

    def __bool__(self):
        return bool(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __contains__(self, x) -> bool:
        x = frac(x)
        i = bisect_right(self.intervals, (x, Fraction(2))) - 1
        return i >= 0 and self.intervals[i][0] <= x <= self.intervals[i][1]

    def is_empty(self) -> bool:
        return not self.intervals

    def leftmost(self) -> Fraction:
        if not self.intervals:
            raise ValueError("empty union has no leftmost point")
        return self.intervals[0][0]

    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.intervals + other.intervals)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out, i, j = [], 0, 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalUnion(tuple(out))

    def issubset(self, other: "IntervalUnion") -> bool:
        return self.intersect(other) == self

    def __le__(self, other):
        return self.issubset(other)

    def __repr__(self):
        if not self.intervals:
            return "IntervalUnion(∅)"
        return "IntervalUnion(" + " ∪ ".join(f"[{lo}, {hi}]" for lo, hi in self.intervals) + ")"


UNIT = IntervalUnion(((Fraction(0), Fraction(1)),))


# ---------------------------------------------------------------------------
# piecewise-linear maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PLMap:
    """Connect-the-dots map through rational nodes ``(x_i, y_i)``.

    ``x_0 = 0 < x_1 < ... < x_r = 1``. For interval maps every ``y_i`` lies in
    [0, 1]. For circle maps the ``y_i`` are values of a lift: any rationals
    with ``y_r - y_0`` an integer (the degree).
    """

    nodes: tuple
    space: str = INTERVAL
    _xs: tuple = field(init=False, repr=False, compare=False)
    _ys: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        nodes = tuple((frac(x), frac(y)) for x, y in self.nodes)
        if len(nodes) < 2:
            raise ValueError("a PL map needs at least two nodes")
        xs = tuple(x for x, _ in nodes)
        ys = tuple(y for _, y in nodes)
        if xs[0] != 0 or xs[-1] != 1:
            raise ValueError("nodes must start at x=0 and end at x=1")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("node x-coordinates must be strictly increasing")
        if self.space == INTERVAL:
            if any(y < 0 or y > 1 for y in ys):
                raise ValueError("interval map values must lie in [0, 1]")
        elif (ys[-1] - ys[0]).denominator != 1:
            raise ValueError("circle lift must satisfy lift(1) - lift(0) in Z")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_ys", ys)

    # -- evaluation --------------------------------------------------------

    def lift(self, x: Number) -> Fraction:
        """Linear interpolation of the node values at ``x`` in [0, 1]."""
        x = frac(x)
        if x < 0 or x > 1:
            raise ValueError(f"point {x} outside the map's domain [0, 1]")
        xs, ys = self._xs, self._ys
        j = bisect_right(xs, x) - 1
        if j >= len(xs) - 1:
            return ys[-1]
        return ys[j] + (ys[j + 1] - ys[j]) * (x - xs[j]) / (xs[j + 1] - xs[j])

    def __call__(self, x: Number) -> Fraction:
        if self.space == CIRCLE:
            v = frac(x)
            v = v - math.floor(v)
            y = self.lift(v)
            return y - math.floor(y)
        return self.lift(x)

    # -- structure ---------------------------------------------------------

    @property
    def xs(self) -> tuple:
        return self._xs

    @property
    def ys(self) -> tuple:
        return self._ys

    def slopes(self) -> list:
        xs, ys = self._xs, self._ys
        return [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)]

    @property
    def degree(self) -> int:
        if self.space != CIRCLE:
            raise ValueError("degree is defined for circle maps only")
        return int(self._ys[-1] - self._ys[0])

    def is_orientation_preserving(self) -> bool:
        """Non-decreasing lift (circle) or non-decreasing map (interval)."""
        return all(b >= a for a, b in zip(self._ys, self._ys[1:]))

    def has_integer_slopes(self) -> bool:
        return all(s.denominator == 1 for s in self.slopes())

    def laps(self) -> int:
        """Number of maximal monotone pieces; flat pieces join a neighbour."""
        signs = [s > 0 for s in self.slopes() if s != 0]
        if not signs:
            return 1
        return 1 + sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def simplified(self) -> "PLMap":
        """Drop nodes where the map is locally linear."""
        keep = [self.nodes[0]]
        for i in range(1, len(self.nodes) - 1):
            (x0, y0), (x1, y1), (x2, y2) = keep[-1], self.nodes[i], self.nodes[i + 1]
            if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
                keep.append(self.nodes[i])
        keep.append(self.nodes[-1])
        return PLMap(tuple(keep), self.space)

    def __repr__(self):
        body = ", ".join(f"({x},{y})" for x, y in self.nodes)
        return f"PLMap[{self.space}]({body})"


def evaluate(f: PLMap, x: Number) -> Fraction:
    """Exact value ``f(x)``."""
    return f(x)


def identity(space: str = INTERVAL) -> PLMap:
    return PLMap(((0, 0), (1, 1)), space)


def constant(c: Number = 0) -> PLMap:
    return PLMap(((0, c), (1, c)), INTERVAL)


def tent() -> PLMap:
    return PLMap(((0, 0), (Fraction(1, 2), 1), (1, 0)))


def rotation(angle: Number) -> PLMap:
    a = frac(angle)
    return PLMap(((0, a), (1, a + 1)), CIRCLE)


def build_fm(m: int) -> PLMap:
    """Connect-the-dots map ``F_m`` with ``m`` fixed points ``a_i = i/m``.

    On each ``J_i = [a_i, a_{i+1}]`` the dots are ``c_i = a_i + 1/(3m)`` and
    ``d_i = a_i + 2/(3m)`` with ``F_m(c_i) = c_{i+1}``, ``F_m(d_i) = d_{i-1}``,
    ``d_{-1} = 0`` and ``c_m = 1``. The right endpoint is pinned at ``F_m(1) = 1``.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"F_m needs a positive integer m, got {m!r}")
    third = Fraction(1, 3 * m)

    def c(i):
        return Fraction(1) if i == m else Fraction(i, m) + third

    def d(i):
        return Fraction(0) if i == -1 else Fraction(i, m) + 2 * third

    nodes = []
    for i in range(m):
        a = Fraction(i, m)
        nodes += [(a, a), (c(i), c(i + 1)), (d(i), d(i - 1))]
    nodes.append((Fraction(1), Fraction(1)))
    return PLMap(tuple(nodes))


# ---------------------------------------------------------------------------
# images, preimages, composition
# ---------------------------------------------------------------------------


def _require_interval(f: PLMap, what: str):
    if f.space != INTERVAL:
        raise ValueError(f"{what} works on interval maps only")


def image(f: PLMap, u: IntervalUnion) -> IntervalUnion:
    """Exact image of a union, one piece per linear segment, merged."""
    _require_interval(f, "image")
    xs, ys = f.xs, f.ys
    out = []
    for lo, hi in u:
        j = min(max(bisect_right(xs, lo) - 1, 0), len(xs) - 2)
        while j < len(xs) - 1 and xs[j] <= hi:
            a, b = max(lo, xs[j]), min(hi, xs[j + 1])
            if a <= b:
                fa, fb = f.lift(a), f.lift(b)
                out.append((min(fa, fb), max(fa, fb)))
            j += 1
    return IntervalUnion(tuple(out))


def preimage(f: PLMap, u: IntervalUnion) -> IntervalUnion:
    """Exact preimage of a union: per linear segment, solve for the x-range."""
    _require_interval(f, "preimage")
    xs, ys = f.xs, f.ys
    out = []
    for j in range(len(xs) - 1):
        x0, x1, y0, y1 = xs[j], xs[j + 1], ys[j], ys[j + 1]
        ylo, yhi = min(y0, y1), max(y0, y1)
        for lo, hi in u:
            a, b = max(lo, ylo), min(hi, yhi)
            if a > b:
                continue
            if y0 == y1:
                out.append((x0, x1))
                continue
            # inverse of the affine piece
            pa = x0 + (a - y0) * (x1 - x0) / (y1 - y0)
            pb = x0 + (b - y0) * (x1 - x0) / (y1 - y0)
            out.append((min(pa, pb), max(pa, pb)))
    return IntervalUnion(tuple(out))


def compose(g: PLMap, f: PLMap) -> PLMap:
    """``g ∘ f`` for interval maps, exact, collinear nodes removed."""
    _require_interval(f, "compose")
    _require_interval(g, "compose")
    cuts = set(f.xs)
    gx = g.xs[1:-1]
    for j in range(len(f.xs) - 1):
        x0, x1, y0, y1 = f.xs[j], f.xs[j + 1], f.ys[j], f.ys[j + 1]
        if y0 == y1:
            continue
        lo, hi = min(y0, y1), max(y0, y1)
        for c in gx:
            if lo < c < hi:
                cuts.add(x0 + (c - y0) * (x1 - x0) / (y1 - y0))
    xs = sorted(cuts)
    return PLMap(tuple((x, g.lift(f.lift(x))) for x in xs)).simplified()


def uniform_distance(f: PLMap, g: PLMap) -> Fraction:
    """Exact ``sup_x d(f(x), g(x))``.

    ``f - g`` is affine between merged breakpoints, so the interval sup sits on
    a breakpoint. On the circle the folded distance also peaks where the lift
    difference crosses a half-integer, which gives exactly 1/2.
    """
    if f.space != g.space:
        raise ValueError("uniform_distance between maps on different spaces")
    xs = sorted(set(f.xs) | set(g.xs))
    diffs = [f.lift(x) - g.lift(x) for x in xs]
    if f.space == INTERVAL:
        return max(abs(d) for d in diffs)
    best = max(dist(d, Fraction(0), CIRCLE) for d in diffs)
    for a, b in zip(diffs, diffs[1:]):
        lo, hi = min(a, b), max(a, b)
        if math.floor(hi - Fraction(1, 2)) >= math.ceil(lo - Fraction(1, 2)):
            return Fraction(1, 2)
    return best


# ---------------------------------------------------------------------------
# non-autonomous sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    map: PLMap


@dataclass(frozen=True)
class Cycle:
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            raise ValueError("cycle tail needs at least one map")


@dataclass(frozen=True)
class Levels:
    """Consecutive blocks ``(map, length)`` followed forever by ``final``."""

    blocks: tuple
    final: PLMap

    def __post_init__(self):
        blocks = tuple((f, int(n)) for f, n in self.blocks)
        if any(n < 1 for _, n in blocks):
            raise ValueError("block lengths must be positive")
        object.__setattr__(self, "blocks", blocks)


@dataclass(frozen=True)
class NdsSpec:
    """Map sequence ``f_0, f_1, ...``: an explicit prefix plus a tail rule."""

    prefix: tuple = ()
    tail: Constant | Cycle | Levels = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if self.tail is None:
            raise ValueError("an NDS needs a tail rule")
        spaces = {f.space for f in self.all_maps()}
        if len(spaces) != 1:
            raise ValueError("all maps of an NDS must share one space")

    def all_maps(self) -> list:
        maps = list(self.prefix)
        t = self.tail
        if isinstance(t, Constant):
            maps.append(t.map)
        elif isinstance(t, Cycle):
            maps.extend(t.maps)
        else:
            maps.extend(f for f, _ in t.blocks)
            maps.append(t.final)
        return maps

    @property
    def space(self) -> str:
        return self.all_maps()[0].space

    def map_at(self, n: int) -> PLMap:
        if n < 0:
            raise ValueError("time must be non-negative")
        if n < len(self.prefix):
            return self.prefix[n]
        k = n - len(self.prefix)
        t = self.tail
        if isinstance(t, Constant):
            return t.map
        if isinstance(t, Cycle):
            return t.maps[k % len(t.maps)]
        for f, length in t.blocks:
            if k < length:
                return f
            k -= length
        return t.final

    def maps(self, n: int, start: int = 0) -> list:
        return [self.map_at(start + i) for i in range(n)]

    def is_autonomous(self) -> bool:
        return not self.prefix and isinstance(self.tail, Constant)


def autonomous(f: PLMap) -> NdsSpec:
    return NdsSpec((), Constant(f))


def orbit(nds: NdsSpec, x0: Number, n: int, start: int = 0) -> list:
    """``[x0, f_0(x0), f_1 f_0(x0), ...]``, ``n + 1`` exact points."""
    if n < 0:
        raise ValueError("orbit length must be non-negative")
    x = point(x0, nds.space)
    out = [x]
    for i in range(n):
        x = nds.map_at(start + i)(x)
        out.append(x)
    return out


def composite(nds: NdsSpec, n: int, start: int = 0) -> PLMap:
    """``f_{start+n-1} ∘ ... ∘ f_start`` as one interval PL map."""
    g = identity(nds.space)
    for i in range(n):
        g = compose(nds.map_at(start + i), g)
    return g


def image_under(nds: NdsSpec, u: IntervalUnion, n: int, start: int = 0) -> IntervalUnion:
    for i in range(n):
        u = image(nds.map_at(start + i), u)
    return u


def build_rotation_sequence(angles: Sequence[Number]) -> NdsSpec:
    """Rigid rotations ``x -> x + θ_i mod 1`` cycled forever."""
    if not angles:
        raise ValueError("rotation sequence needs at least one angle")
    maps = []
    for a in angles:
        a = frac(a)
        if a < 0 or a >= 1:
            raise ValueError(f"rotation angle {a} outside [0, 1)")
        maps.append(rotation(a))
    return NdsSpec((), Cycle(tuple(maps)))


def dyadic_intervals(k: int) -> list:
    return [IntervalUnion.of((Fraction(i, 2**k), Fraction(i + 1, 2**k))) for i in range(2**k)]


@dataclass(frozen=True)
class ZeroEntropyConstruction:
    """Transitive NDS assembled from blocks of ``F_1, F_2, ...``.

    ``boundaries[k-1]`` is ``s_k``; ``block_lengths[k-1]`` is the number of
    ``F_k`` applications in block ``k``.
    """

    nds: NdsSpec
    boundaries: tuple
    block_lengths: tuple

    def verify(self) -> list:
        """Re-check ``f_0^{s_k}(J) = [0, 1]`` for every dyadic ``J`` of order k."""
        rows = []
        for k, s in enumerate(self.boundaries, start=1):
            ok = all(image_under(self.nds, J, s) == UNIT for J in dyadic_intervals(k))
            rows.append((k, s, ok))
        return rows


def build_transitive_zero_entropy(levels: int, max_compositions: int = MAX_COMPOSITIONS) -> ZeroEntropyConstruction:
    """Assemble the blocks so that every dyadic interval of order k covers
    [0, 1] after ``s_k`` steps; each block length ``l`` is the least ``l >= 1``
    that completes all intervals of that order at once.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    blocks, bounds, lengths = [], [], []
    s = 0
    for k in range(1, levels + 1):
        fk = build_fm(k)
        prefix = NdsSpec((), Levels(tuple(blocks), fk))
        current = [image_under(prefix, J, s) for J in dyadic_intervals(k)]
        l = 0
        while l == 0 or any(c != UNIT for c in current):
            current = [image(fk, c) for c in current]
            l += 1
            if l > max_compositions:
                raise RuntimeError(
                    f"level {k}: dyadic intervals still not onto [0,1] after {max_compositions} compositions"
                )
        blocks.append((fk, l))
        s += l
        bounds.append(s)
        lengths.append(l)
    nds = NdsSpec((), Levels(tuple(blocks), build_fm(levels + 1)))
    return ZeroEntropyConstruction(nds, tuple(bounds), tuple(lengths))


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def fstr(x: Fraction) -> str:
    return str(frac(x))


def map_to_dict(f: PLMap) -> dict:
    return {"space": f.space, "nodes": [[fstr(x), fstr(y)] for x, y in f.nodes]}


def map_from_dict(d: dict) -> PLMap:
    return PLMap(tuple((frac(x), frac(y)) for x, y in d["nodes"]), d.get("space", INTERVAL))


def nds_to_dict(nds: NdsSpec) -> dict:
    t = nds.tail
    if isinstance(t, Constant):
        tail = {"kind": "constant", "map": map_to_dict(t.map)}
    elif isinstance(t, Cycle):
        tail = {"kind": "cycle", "maps": [map_to_dict(f) for f in t.maps]}
    else:
        tail = {
            "kind": "levels",
            "blocks": [{"map": map_to_dict(f), "length": n} for f, n in t.blocks],
            "final": map_to_dict(t.final),
        }
    return {"space": nds.space, "prefix": [map_to_dict(f) for f in nds.prefix], "tail": tail}


def nds_from_dict(d: dict) -> NdsSpec:
    if "nodes" in d:  # a bare map means the autonomous system
        return autonomous(map_from_dict(d))
    prefix = tuple(map_from_dict(m) for m in d.get("prefix", ()))
    t = d["tail"]
    kind = t["kind"]
    if kind == "constant":
        tail = Constant(map_from_dict(t["map"]))
    elif kind == "cycle":
        tail = Cycle(tuple(map_from_dict(m) for m in t["maps"]))
    elif kind == "levels":
        tail = Levels(tuple((map_from_dict(b["map"]), b["length"]) for b in t["blocks"]), map_from_dict(t["final"]))
    else:
        raise ValueError(f"unknown tail kind {kind!r}")
    return NdsSpec(prefix, tail)
