"""Topological entropy estimates from separated and spanning sets.

Counts come from deterministic greedy scans over candidate orbits; every
comparison against eps is an exact integer comparison on a common lattice.
A lap-counting oracle gives exact growth rates for interval maps.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .spaces import CIRCLE, NdsSpec, compose, frac, identity
from .systems import LatticeError, SystemHandle

DEFAULT_BUDGET = 1 << 27
RHO = 4
CHUNK = 1 << 18


class CoverError(RuntimeError):
    """A target has no candidate within eps along the whole orbit segment."""


class UnsupportedSystem(ValueError):
    pass


def _check_eps(eps) -> Fraction:
    eps = frac(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return eps


def _check_n(n: int):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


# ---------------------------------------------------------------------------
# greedy scans on encoded trajectories
# ---------------------------------------------------------------------------


class _Store:
    """Growable store of accepted trajectories with a chained hash index."""

    def __init__(self, sys: SystemHandle, n: int, width: int, D: int, E: int, cap: int = 1 << 12):
        self.sys, self.E, self.D = sys, E, D
        self.dtype = np.int32 if D < (1 << 31) else np.int64
        self.traj = np.empty((cap, n, width), self.dtype)
        self.heads = np.full(_pow2(2 * cap), -1, np.int64)
        self.nxt = np.empty(cap, np.int64)
        self.count = 0

    def grow(self):
        cap = 2 * self.traj.shape[0]
        traj = np.empty((cap,) + self.traj.shape[1:], self.dtype)
        traj[: self.count] = self.traj[: self.count]
        self.traj = traj
        self.nxt = np.empty(cap, np.int64)
        self.heads = np.full(_pow2(2 * cap), -1, np.int64)
        keys, ncells, _ = self.sys.keys(self.traj[: self.count], self.E, self.D)
        kernels.rebuild_hash(keys, ncells, self.heads, self.nxt, self.count)


def _pow2(x: int) -> int:
    return 1 << max(int(x - 1).bit_length(), 1)


def _scan(sys, chunks, n, E, D, layout, mode: str, la: int = 0) -> int:
    """Run a greedy scan over trajectory chunks.

    ``chunks`` yields ``(traj, nrows)``: the first ``nrows`` rows are scanned,
    later rows are look-ahead for the cover.
    """
    nb, m = layout[0], layout[1]
    code = sys.metric_code
    store = None
    for traj, nrows in chunks:
        if store is None:
            store = _Store(sys, n, traj.shape[2], D, E)
        keys, ncells, wrap = sys.keys(traj, E, D)
        start = 0
        while True:
            args = (ncells, wrap, 2 * E, code, nb, m, D, store.traj, store.heads, store.nxt, store.count, start)
            if mode == "sep":
                count, stop = kernels.greedy_separated(traj[:nrows], keys[:nrows], *args)
            else:
                count, stop = kernels.greedy_cover(traj, keys, nrows, la, *args)
            store.count = count
            if stop >= nrows:
                break
            store.grow()
            start = stop
    return 0 if store is None else store.count


def _lattice_E(eps: Fraction, D: int) -> int:
    E = eps * D
    if E.denominator != 1:
        raise LatticeError(f"eps={eps} is not on the 1/{D} lattice")
    return int(E)


def separated_count(sys: SystemHandle, n: int, eps, candidates: Sequence, start: int = 0) -> int:
    """Size of the greedy (n, eps)-separated subset of ``candidates``.

    Candidates are scanned in the given order; one is kept when its orbit
    over times ``0..n-1`` leaves the eps-ball of every kept orbit at some time.
    """
    eps = _check_eps(eps)
    _check_n(n)
    if not candidates:
        raise ValueError("need at least one candidate")
    traj, D, layout = sys.trajectories([sys.coerce(c) for c in candidates], n, start, extra=[eps])
    E = _lattice_E(eps, D)
    return _scan(sys, [(traj, traj.shape[0])], n, E, D, layout, "sep")


def spanning_count(sys: SystemHandle, n: int, eps, candidates: Sequence, targets: Sequence, start: int = 0) -> int:
    """Size of a greedy cover of ``targets`` by closed (n, eps) Bowen balls
    around ``candidates``; the candidate covering most uncovered targets wins,
    ties go to the earliest candidate."""
    eps = _check_eps(eps)
    _check_n(n)
    if not candidates or not targets:
        raise ValueError("need at least one candidate and one target")
    cands = [sys.coerce(c) for c in candidates]
    tgts = [sys.coerce(t) for t in targets]
    traj, D, layout = sys.trajectories(cands + tgts, n, start, extra=[eps])
    E2 = 2 * _lattice_E(eps, D)
    C, T = traj[: len(cands)], traj[len(cands):]
    close = kernels.bowen_cross2(T, C, sys.metric_code, layout[0], layout[1], D) <= E2
    lonely = np.flatnonzero(~close.any(axis=1))
    if len(lonely):
        raise CoverError(f"target {tgts[lonely[0]]!r} is not within eps={eps} of any candidate orbit")
    uncovered = np.ones(len(tgts), bool)
    count = 0
    while uncovered.any():
        gain = close[uncovered].sum(axis=0)
        j = int(np.argmax(gain))
        uncovered &= ~close[:, j]
        count += 1
    return count


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


@dataclass
class EntropyRow:
    n: int
    eps: Fraction
    sep: int
    span: int | None
    grid: int
    resolved: bool

    @property
    def slope(self) -> float:
        return math.log(self.sep) / self.n


@dataclass
class EntropySeries:
    kind: str
    rows: list = field(default_factory=list)
    complete: bool = True
    meta: dict = field(default_factory=dict)

    def counts(self, eps) -> dict:
        eps = frac(eps)
        return {r.n: r.sep for r in self.rows if r.eps == eps}

    @property
    def summary_slope(self) -> float:
        """Least-squares slope of log(sep) against n at the smallest eps, over
        the upper half of the n range."""
        if not self.rows:
            return float("nan")
        e = min(r.eps for r in self.rows)
        pts = sorted((r.n, r.sep) for r in self.rows if r.eps == e)
        n_max = pts[-1][0]
        pts = [(n, c) for n, c in pts if 2 * n >= n_max]
        if len(pts) < 2:
            return math.log(pts[0][1]) / pts[0][0]
        x = np.array([p[0] for p in pts], float)
        y = np.log(np.array([p[1] for p in pts], float))
        return float(np.polyfit(x, y, 1)[0])

    def sandwich_violations(self) -> list:
        """Rows breaking sep(eps) >= span(eps) >= sep(2 eps) at equal n."""
        by = {(r.n, r.eps): r for r in self.rows}
        bad = []
        for r in self.rows:
            if r.span is None:
                continue
            if r.span > r.sep:
                bad.append((r.n, r.eps, "span > sep"))
            wide = by.get((r.n, 2 * r.eps))
            if wide is not None and wide.grid == r.grid and r.span < wide.sep:
                bad.append((r.n, r.eps, "span < sep(2 eps)"))
        return bad

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["kind", "n", "eps", "sep", "span", "slope"])
        for r in self.rows:
            w.writerow([self.kind, r.n, str(r.eps), r.sep, "" if r.span is None else r.span, f"{r.slope:.12g}"])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "summary_slope": round(self.summary_slope, 12),
            "complete": self.complete,
            "unresolved_rows": [[r.n, str(r.eps)] for r in self.rows if not r.resolved],
            **self.meta,
        }


def _grid_min(eps: Fraction) -> int:
    return _pow2(math.ceil(2 / eps))


def entropy_estimate(
    sys: SystemHandle,
    eps_schedule: Sequence,
    n_max: int,
    candidate_budget: int | None = None,
    start: int = 0,
    spanning: bool = True,
    rho: int = RHO,
    chunk: int = CHUNK,
) -> EntropySeries:
    """Separated/spanning counts for ``n = 1..n_max`` and every eps.

    For each n the candidate grid is refined (doubling its resolution) until it
    holds at least ``rho ** dim`` candidates per separated point at the
    smallest eps, which keeps grid quantisation out of the growth rate. A grid
    that would exceed the budget leaves the row unresolved and the series
    incomplete.
    """
    eps_list = [_check_eps(e) for e in eps_schedule]
    if not eps_list:
        raise ValueError("empty eps schedule")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps schedule must be strictly decreasing")
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    budget = candidate_budget or sys.candidate_budget or DEFAULT_BUDGET
    sys.check_maps(n_max, start)
    eps_min = eps_list[-1]
    base_den = sys.lattice_denominator(max(n_max - 1, 1), start, eps_list)
    series = EntropySeries(sys.label, meta={"n_max": n_max, "eps": [str(e) for e in eps_list], "rho": rho,
                                            "candidate_budget": budget, "start": start})
    G = _grid_min(eps_min)
    grids = {}
    prev = None
    for n in range(1, n_max + 1):
        resolved = True
        while True:
            runner = _GridRunner(sys, n, start, G, base_den, chunk)
            if runner.count > budget:
                resolved = False
                G //= 2
                runner = _GridRunner(sys, n, start, G, base_den, chunk) if G >= 2 else None
                break
            c = runner.separated(eps_min)
            if runner.count >= rho ** runner.dim * c:
                break
            G *= 2
        if runner is None or runner.count > budget:
            series.complete = False
            break
        if not resolved:
            series.complete = False
        grids[n] = G
        for e in eps_list:
            sep = runner.separated(e)
            span = min(runner.cover(e), sep) if spanning else None
            series.rows.append(EntropyRow(n, e, sep, span, G, resolved))
        # start the next row at the grid its predicted count will need
        c = runner.separated(eps_min)
        want = rho ** runner.dim * c * (max(c / prev, 1.0) if prev else 1.0)
        prev = c
        while _grid_count(sys, 2 * G, base_den) <= budget and _grid_count(sys, G, base_den) < want:
            G *= 2
    series.meta["grids"] = {str(k): v for k, v in grids.items()}
    return series


def _grid_count(sys: SystemHandle, G: int, base_den: int) -> int:
    return sys.grid(G, base_den * G // math.gcd(base_den, G)).count


class _GridRunner:
    """Trajectories of one candidate grid, streamed in chunks."""

    def __init__(self, sys: SystemHandle, n: int, start: int, G: int, base_den: int, chunk: int):
        self.sys, self.n, self.start, self.G, self.chunk = sys, n, start, G, chunk
        self.D = base_den * G // math.gcd(base_den, G)
        self.grid = sys.grid(G, self.D)
        self.count = self.grid.count
        self.dim = self.grid.dim
        self.layout = self.grid.layout
        self.lmaps = sys.lattice_maps(n - 1, start, self.D)
        self._cache = {}
        self._exact = None
        if self.lmaps is None and self.count <= (1 << 16):
            self._exact_trajectories()

    def _exact_trajectories(self):
        from .systems import decode_rows

        states = decode_rows(self.sys, self.grid.rows(0, self.count), self.D, self.layout)
        traj, D, layout = self.sys.trajectories(states, self.n, self.start)
        self._exact = (traj, D, layout)

    def _traj(self, lo: int, hi: int) -> np.ndarray:
        rows = self.grid.rows(lo, hi)
        out = np.empty((rows.shape[0], self.n, rows.shape[1]), np.int64)
        out[:, 0] = rows
        for t in range(1, self.n):
            rows = self.sys.apply_lattice(self.lmaps[t - 1], rows, self.D)
            out[:, t] = rows
        return out

    def _chunks(self, la: int):
        if self._exact is not None:
            traj = self._exact[0]
            yield traj, traj.shape[0]
            return
        if self.lmaps is None:
            raise LatticeError("maps leave the lattice and the grid is too large for exact orbits")
        for lo in range(0, self.count, self.chunk):
            hi = min(lo + self.chunk, self.count)
            yield self._traj(lo, min(hi + la, self.count)), hi - lo

    def _D_E(self, eps):
        D = self._exact[1] if self._exact is not None else self.D
        return D, _lattice_E(eps, D)

    def separated(self, eps) -> int:
        key = ("sep", eps)
        if key not in self._cache:
            D, E = self._D_E(eps)
            layout = self._exact[2] if self._exact is not None else self.layout
            self._cache[key] = _scan(self.sys, self._chunks(0), self.n, E, D, layout, "sep")
        return self._cache[key]

    def cover(self, eps) -> int:
        key = ("cover", eps)
        if key not in self._cache:
            D, E = self._D_E(eps)
            layout = self._exact[2] if self._exact is not None else self.layout
            la = max(self.chunk // 4, 1)
            self._cache[key] = _scan(self.sys, self._chunks(la), self.n, E, D, layout, "cover", la)
        return self._cache[key]


# ---------------------------------------------------------------------------
# lap-number oracle
# ---------------------------------------------------------------------------


def lap_counts(nds: NdsSpec, n_max: int, start: int = 0) -> list:
    """Exact lap numbers of ``f_0^n`` for ``n = 1..n_max``."""
    if nds.space == CIRCLE:
        raise UnsupportedSystem("lap counting needs interval maps")
    g = identity(nds.space)
    out = []
    for i in range(n_max):
        g = compose(nds.map_at(start + i), g)
        out.append(g.laps())
    return out


def lap_count_entropy(nds: NdsSpec, n_max: int, start: int = 0) -> float:
    """``log(lap(f_0^{n_max})) / n_max`` from exact composition."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return math.log(lap_counts(nds, n_max, start)[-1]) / n_max
