"""System handles: an NDS together with the space its induced map acts on.

Kinds are ``base`` (X), ``product`` (X^k, max metric), ``hyper`` (sets of at
most m points, Hausdorff metric), ``fuzzy`` (piecewise-constant fuzzy sets,
levelwise metric) and ``arcs`` (circle arcs, Hausdorff metric).

Besides exact stepping, a handle knows how to put its states on an integer
lattice ``Z/D`` so the kernels can compare them with integer arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import kernels
from .fuzzy import PCFuzzy, chi, d_infty, refine, zadeh_extend
from .hyperspace import Arc, FiniteCompact, arc_hausdorff, arc_image, hausdorff, induced_image
from .spaces import CIRCLE, INTERVAL, NdsSpec, PLMap, dist, frac, point

KINDS = ("base", "product", "hyper", "fuzzy", "arcs")

# doubled distances must stay inside int64
MAX_DENOMINATOR = 1 << 60


class LatticeError(ValueError):
    """The states or maps do not fit on an int64 lattice."""


@dataclass(frozen=True)
class SystemHandle:
    kind: str
    nds: tuple
    m: int = 1
    candidate_budget: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown system kind {self.kind!r}")
        nds = tuple(self.nds) if isinstance(self.nds, (tuple, list)) else (self.nds,)
        if not nds or not all(isinstance(s, NdsSpec) for s in nds):
            raise ValueError("a system needs at least one NdsSpec")
        if len({s.space for s in nds}) != 1:
            raise ValueError("all coordinates must share one space")
        if self.kind != "product" and len(nds) != 1:
            raise ValueError(f"{self.kind} systems take a single NDS")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        object.__setattr__(self, "nds", nds)

    # -- basic facts -------------------------------------------------------

    @property
    def base(self) -> NdsSpec:
        return self.nds[0]

    @property
    def space(self) -> str:
        return self.base.space

    @property
    def k(self) -> int:
        return len(self.nds)

    @property
    def label(self) -> str:
        if self.kind == "product":
            return f"product({self.k})"
        if self.kind in ("hyper", "fuzzy"):
            return f"{self.kind}({self.m})"
        return self.kind

    @property
    def metric_code(self) -> int:
        if self.kind == "arcs":
            return kernels.ARC_CODE
        return kernels.CIRCLE_CODE if self.space == CIRCLE else kernels.INTERVAL_CODE

    # -- exact dynamics ----------------------------------------------------

    def coerce(self, state):
        """Normalise a loosely typed state (numbers, tuples, lists)."""
        kind, space = self.kind, self.space
        if kind == "base":
            return point(state, space)
        if kind == "product":
            coords = tuple(point(c, space) for c in state)
            if len(coords) != self.k:
                raise ValueError(f"expected {self.k} coordinates, got {len(coords)}")
            return coords
        if kind == "hyper":
            K = state if isinstance(state, FiniteCompact) else FiniteCompact(tuple(state), space)
            if K.space != space:
                raise ValueError("set lives on the wrong space")
            return K
        if kind == "fuzzy":
            if isinstance(state, FiniteCompact):
                return chi(state)
            if not isinstance(state, PCFuzzy):
                raise TypeError("fuzzy systems need PCFuzzy states")
            return state
        if isinstance(state, Arc):
            return state
        a, b = state[:2]
        return Arc(a, b, bool(state[2]) if len(state) > 2 else False)

    def step(self, state, t: int):
        """Apply the time-``t`` map of the induced system."""
        if self.kind == "product":
            return tuple(s.map_at(t)(x) for s, x in zip(self.nds, state))
        f = self.base.map_at(t)
        if self.kind == "base":
            return f(state)
        if self.kind == "hyper":
            return induced_image(f, state)
        if self.kind == "fuzzy":
            return zadeh_extend(f, state)
        return arc_image(f, state)

    def orbit(self, state, n: int, start: int = 0) -> list:
        """``n + 1`` states starting from ``state`` at time ``start``."""
        x = self.coerce(state)
        out = [x]
        for i in range(n):
            x = self.step(x, start + i)
            out.append(x)
        return out

    def distance(self, a, b) -> Fraction:
        kind, space = self.kind, self.space
        if kind == "base":
            return dist(a, b, space)
        if kind == "product":
            return max(dist(x, y, space) for x, y in zip(a, b))
        if kind == "hyper":
            return hausdorff(a, b)
        if kind == "fuzzy":
            return d_infty(a, b)
        return arc_hausdorff(a, b)

    def check_maps(self, n: int, start: int = 0):
        """Fail early if an arc system is fed an orientation-reversing map."""
        if self.kind != "arcs":
            return
        if self.space != CIRCLE:
            raise ValueError("arc systems live on the circle")
        for i in range(n):
            if not self.base.map_at(start + i).is_orientation_preserving():
                raise ValueError(f"map at time {start + i} is not orientation-preserving")

    # -- lattice encoding --------------------------------------------------

    def layout(self, states: Sequence) -> tuple:
        """``(nb, m, thresholds)`` of the row layout for these states."""
        if self.kind == "base":
            return 1, 1, None
        if self.kind == "product":
            return self.k, 1, None
        if self.kind == "hyper":
            return 1, self.m, None
        if self.kind == "arcs":
            return 1, 2, None
        th = sorted({a for u in states for a in u.thresholds})
        return len(th), self.m, tuple(th)

    def values(self, state) -> list:
        """Every rational appearing in the state's row encoding."""
        kind = self.kind
        if kind == "base":
            return [state]
        if kind == "product":
            return list(state)
        if kind == "hyper":
            return list(state.points)
        if kind == "fuzzy":
            return [p for C in state.levels for p in C.points]
        return [state.a, state.length]

    def encode(self, states: Sequence, D: int, layout: tuple | None = None) -> np.ndarray:
        """Rows of int64 numerators over ``D`` (every value must be a multiple of 1/D)."""
        nb, m, th = layout or self.layout(states)
        out = np.empty((len(states), nb * m), np.int64)

        def num(x):
            v = x * D
            if v.denominator != 1:
                raise LatticeError(f"{x} is not on the 1/{D} lattice")
            return int(v)

        for r, s in enumerate(states):
            if self.kind == "base":
                out[r, 0] = num(s)
            elif self.kind == "product":
                out[r] = [num(x) for x in s]
            elif self.kind == "hyper":
                out[r] = _padded([num(p) for p in s.points], m, "set")
            elif self.kind == "fuzzy":
                u = refine(s, th)
                row = []
                for C in u.levels:
                    row += _padded([num(p) for p in C.points], m, "fuzzy level")
                out[r] = row
            else:
                out[r] = [num(s.a), D if s.full else num(s.length)]
        return out

    def trajectories(self, states: Sequence, n: int, start: int = 0, extra: Sequence = ()) -> tuple:
        """Exact orbits of ``states`` over times ``0..n-1`` on a common lattice.

        Returns ``(traj, D, layout)`` with ``traj`` of shape ``(N, n, width)``.
        ``extra`` are rationals (such as eps) whose denominators must divide D.
        """
        self.check_maps(n - 1, start)
        orbits = [self.orbit(s, n - 1, start) for s in states]
        flat = [x for o in orbits for x in o]
        den = 1
        for x in flat:
            for v in self.values(x):
                den = _lcm(den, frac(v).denominator)
        for e in extra:
            den = _lcm(den, frac(e).denominator)
        if den > MAX_DENOMINATOR:
            raise LatticeError(f"common denominator {den} is too large for int64 kernels")
        lay = self.layout(flat)
        rows = self.encode(flat, den, lay)
        return rows.reshape(len(states), n, -1), den, lay

    def lattice_maps(self, n: int, start: int, D: int) -> list | None:
        """Vectorised row maps for times ``start .. start+n-1``, or None when some
        map leaves the 1/D lattice."""
        out = []
        cache = {}
        for i in range(n):
            ms = []
            for s in self.nds:
                f = s.map_at(start + i)
                if f not in cache:
                    cache[f] = LatticeMap.build(f, D)
                if cache[f] is None:
                    return None
                ms.append(cache[f])
            out.append(ms)
        return out

    def apply_lattice(self, lmaps: list, rows: np.ndarray, D: int) -> np.ndarray:
        """One step of the induced dynamics on encoded rows."""
        if self.kind == "product":
            return np.stack([lm(rows[:, j]) for j, lm in enumerate(lmaps)], axis=1)
        lm = lmaps[0]
        if self.kind == "arcs":
            a, L = rows[:, 0], rows[:, 1]
            fa = lm.lift(a)
            full = L >= D
            Lp = np.where(full, D, lm.lift_any(a + np.minimum(L, D)) - fa)
            Lp = np.minimum(Lp, D)
            return np.stack([fa % D, Lp], axis=1)
        return lm(rows)

    def lattice_denominator(self, n: int, start: int, extra: Sequence = ()) -> int:
        """lcm of node denominators of the maps used over ``n`` steps and ``extra``."""
        den = 1
        for i in range(n):
            for s in self.nds:
                f = s.map_at(start + i)
                for x, y in f.nodes:
                    den = _lcm(den, _lcm(x.denominator, y.denominator))
        for e in extra:
            den = _lcm(den, frac(e).denominator)
        return den

    def grid(self, G: int, D: int) -> "CandidateGrid":
        return CandidateGrid(self, G, D)

    def keys(self, traj: np.ndarray, E: int, D: int) -> tuple:
        """Cell keys of 1-Lipschitz coordinates and their axis sizes.

        Two eps-close trajectories land in equal or neighbouring cells on every
        axis, so probing the 3^K neighbourhood never misses a close partner.
        """
        ncell = max(D // E, 1)
        code = self.metric_code
        cols, wraps = [], []
        if code == kernels.ARC_CODE or (self.space == CIRCLE and self.kind in ("hyper", "fuzzy")):
            return np.zeros((traj.shape[0], 0), np.int64), np.zeros(0, np.int64), np.zeros(0, np.bool_)
        nb, m, _ = self._row_shape(traj)
        last = traj.shape[1] - 1
        times = (0,) if last == 0 else (0, last)
        for t in times:
            for blk in range(nb if self.kind == "product" else 1):
                seg = traj[:, t, blk * m:(blk + 1) * m]
                if m == 1:
                    cols.append(seg[:, 0])
                    wraps.append(self.space == CIRCLE)
                else:
                    cols += [seg.min(axis=1), seg.max(axis=1)]
                    wraps += [False, False]
        keys = np.minimum(np.stack(cols, axis=1) // E, ncell - 1).astype(np.int64)
        return np.ascontiguousarray(keys), np.full(len(cols), ncell, np.int64), np.array(wraps, np.bool_)

    def _row_shape(self, traj):
        if self.kind == "product":
            return self.k, 1, None
        if self.kind == "fuzzy":
            return traj.shape[2] // self.m, self.m, None
        if self.kind == "hyper":
            return 1, self.m, None
        return 1, 1, None


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _padded(vals: list, m: int, what: str) -> list:
    if len(vals) > m:
        raise LatticeError(f"{what} has {len(vals)} points, more than the cap {m}")
    return vals + [vals[-1]] * (m - len(vals))


# ---------------------------------------------------------------------------
# lattice maps and candidate grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatticeMap:
    """A PL map with integer slopes acting on numerators over ``D``."""

    xs: np.ndarray
    ys: np.ndarray
    slopes: np.ndarray
    D: int
    circle: bool
    degree: int

    @classmethod
    def build(cls, f: PLMap, D: int) -> "LatticeMap | None":
        if not f.has_integer_slopes():
            return None
        xs, ys = [], []
        for x, y in f.nodes:
            X, Y = x * D, y * D
            if X.denominator != 1 or Y.denominator != 1:
                return None
            xs.append(int(X))
            ys.append(int(Y))
        sl = [int(s) for s in f.slopes()]
        circ = f.space == CIRCLE
        return cls(np.array(xs, np.int64), np.array(ys, np.int64), np.array(sl, np.int64), D, circ,
                   f.degree if circ else 0)

    def lift(self, v: np.ndarray) -> np.ndarray:
        idx = np.clip(np.searchsorted(self.xs, v, "right") - 1, 0, len(self.slopes) - 1)
        return self.ys[idx] + (v - self.xs[idx]) * self.slopes[idx]

    def lift_any(self, v: np.ndarray) -> np.ndarray:
        """Lift on ``[0, 2D]`` via ``F(x + 1) = F(x) + degree``."""
        hi = v > self.D
        w = np.where(hi, v - self.D, v)
        return self.lift(w) + np.where(hi, self.degree * self.D, 0)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        y = self.lift(v)
        return y % self.D if self.circle else y


class CandidateGrid:
    """Deterministic, lexicographically ordered candidate rows at grid step 1/G.

    base/product: all grid points of X^k; hyper: sets of at most m grid points;
    fuzzy: chi of those sets plus two-level sets (thresholds 1/2, 1) with a
    nonempty proper top level; arcs: every grid anchor and grid length plus
    one full circle.
    """

    def __init__(self, sys: SystemHandle, G: int, D: int):
        if D % G:
            raise ValueError("grid step must lie on the lattice")
        self.sys, self.G, self.D = sys, G, D
        self.step = D // G
        self.npts = G if sys.space == CIRCLE else G + 1
        kind = sys.kind
        self._rows = None
        if kind == "base":
            self.count = self.npts
        elif kind == "product":
            self.count = self.npts ** sys.k
        elif kind == "arcs":
            self.count = G * G + 1
        else:
            self.count = self._set_count()

    @property
    def dim(self) -> int:
        kind = self.sys.kind
        if kind == "product":
            return self.sys.k
        if kind in ("hyper", "fuzzy"):
            return self.sys.m
        return 2 if kind == "arcs" else 1

    @property
    def thresholds(self):
        return (Fraction(1, 2), Fraction(1)) if self.sys.kind == "fuzzy" else None

    @property
    def layout(self) -> tuple:
        kind = self.sys.kind
        if kind == "fuzzy":
            return 2, self.sys.m, self.thresholds
        return self.sys.layout([])

    def _set_count(self) -> int:
        m, P = self.sys.m, self.npts
        if self.sys.kind == "hyper":
            return sum(math.comb(P, s) for s in range(1, m + 1))
        # each set C of size s contributes chi(C) plus 2^s - 2 proper tops
        return sum(math.comb(P, s) * (2 ** s - 1) for s in range(1, m + 1))

    def _materialise(self) -> np.ndarray:
        m, P = self.sys.m, self.npts
        rows = []
        for s in range(1, m + 1):
            for c in combinations(range(P), s):
                pad = list(c) + [c[-1]] * (m - s)
                if self.sys.kind == "hyper":
                    rows.append(pad)
                    continue
                rows.append(pad + pad)
                for r in range(1, s):
                    for top in combinations(c, r):
                        rows.append(pad + list(top) + [top[-1]] * (m - r))
        arr = np.array(rows, np.int64)
        arr = arr[np.lexsort(arr.T[::-1])]
        return arr * self.step

    def rows(self, lo: int, hi: int) -> np.ndarray:
        """Candidate rows ``lo .. hi-1`` in scan order."""
        hi = min(hi, self.count)
        kind = self.sys.kind
        idx = np.arange(lo, hi, dtype=np.int64)
        if kind == "base":
            return (idx * self.step)[:, None]
        if kind == "product":
            k, P = self.sys.k, self.npts
            out = np.empty((len(idx), k), np.int64)
            rem = idx.copy()
            for j in range(k - 1, -1, -1):
                out[:, j] = rem % P
                rem //= P
            return out * self.step
        if kind == "arcs":
            return _arc_rows(idx, self.G, self.D)
        if self._rows is None:
            self._rows = self._materialise()
        return self._rows[lo:hi]


def _arc_rows(idx: np.ndarray, G: int, D: int) -> np.ndarray:
    # flat index -> (anchor, length) with the single full circle slotted right
    # after the arcs anchored at 0, keeping rows lexicographic
    out = np.empty((len(idx), 2), np.int64)
    step = D // G
    before = idx < G
    full = idx == G
    after = idx > G
    out[before, 0] = 0
    out[before, 1] = idx[before] * step
    out[full, 0] = 0
    out[full, 1] = D
    j = idx[after] - 1
    out[after, 0] = (j // G) * step
    out[after, 1] = (j % G) * step
    return out


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def base_system(nds: NdsSpec) -> SystemHandle:
    return SystemHandle("base", (nds,))


def power_system(nds: NdsSpec, k: int) -> SystemHandle:
    """``k``-fold product ``f_n × ... × f_n`` under the max metric."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"power needs k >= 1, got {k!r}")
    if k == 1:
        return base_system(nds)
    return SystemHandle("product", (nds,) * k)


def product_system(*systems: NdsSpec) -> SystemHandle:
    if len(systems) == 1:
        return base_system(systems[0])
    return SystemHandle("product", tuple(systems))


def hyper_system(nds: NdsSpec, m: int, candidate_budget: int | None = None) -> SystemHandle:
    return SystemHandle("hyper", (nds,), m, candidate_budget)


def fuzzy_system(nds: NdsSpec, m: int = 1, candidate_budget: int | None = None) -> SystemHandle:
    """Fuzzy sets whose support has at most ``m`` points."""
    return SystemHandle("fuzzy", (nds,), m, candidate_budget)


def arcs_system(nds: NdsSpec) -> SystemHandle:
    if nds.space != CIRCLE:
        raise ValueError("arc systems need a circle NDS")
    for f in nds.all_maps():
        if not f.is_orientation_preserving():
            raise ValueError("arc systems need orientation-preserving maps")
    return SystemHandle("arcs", (nds,))


def decode_rows(sys: SystemHandle, rows: np.ndarray, D: int, layout: tuple) -> list:
    """Exact states from encoded rows (inverse of :meth:`SystemHandle.encode`)."""
    nb, m, th = layout
    space = sys.space
    out = []
    for row in rows.tolist():
        vals = [Fraction(v, D) for v in row]
        if sys.kind == "base":
            out.append(point(vals[0], space))
        elif sys.kind == "product":
            out.append(tuple(point(v, space) for v in vals))
        elif sys.kind == "hyper":
            out.append(FiniteCompact(tuple(vals), space))
        elif sys.kind == "fuzzy":
            levels = tuple(FiniteCompact(tuple(vals[b * m:(b + 1) * m]), space) for b in range(nb))
            out.append(PCFuzzy(th, levels))
        else:
            out.append(Arc(vals[0], vals[0], True) if row[1] >= D else Arc(vals[0], vals[0] + vals[1]))
    return out
