"""delta-chains and chain transitivity, mixing and weak mixing on grids.

Edges of the time-``t`` layer are ``u -> v`` with ``d(f_t(u), v) < delta``; the
layers change with ``t`` because the maps do. Distances are compared exactly
on a common integer lattice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .fuzzy import PCFuzzy, d_infty
from .hyperspace import FiniteCompact
from .spaces import NdsSpec, frac
from .systems import SystemHandle, base_system, fuzzy_system, hyper_system

PROPERTIES = ("transitive", "mixing", "weak_mixing")


def _check_delta(delta) -> Fraction:
    delta = frac(delta)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return delta


def _as_system(sys) -> SystemHandle:
    return base_system(sys) if isinstance(sys, NdsSpec) else sys


def step_errors(sys, seq: Sequence, start_time: int = 0) -> list:
    """``d(f_{start+i}(x_i), x_{i+1})`` for every step, exactly."""
    sys = _as_system(sys)
    seq = [sys.coerce(s) for s in seq]
    return [sys.distance(sys.step(a, start_time + i), b) for i, (a, b) in enumerate(zip(seq, seq[1:]))]


def is_pseudo_orbit(sys, seq: Sequence, delta, start_time: int = 0) -> bool:
    """True when every step misses the true image by strictly less than delta."""
    delta = _check_delta(delta)
    if len(seq) < 2:
        raise ValueError("a pseudo-orbit needs at least two states")
    return all(e < delta for e in step_errors(sys, seq, start_time))


@dataclass(frozen=True)
class Chain:
    system: SystemHandle
    states: tuple
    delta: Fraction
    start_time: int = 0

    def __post_init__(self):
        sys = _as_system(self.system)
        states = tuple(sys.coerce(s) for s in self.states)
        delta = _check_delta(self.delta)
        if len(states) < 2:
            raise ValueError("a chain needs at least two states")
        if not is_pseudo_orbit(sys, states, delta, self.start_time):
            raise ValueError("states do not form a delta-chain")
        object.__setattr__(self, "system", sys)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "delta", delta)

    @property
    def length(self) -> int:
        return len(self.states) - 1

    def errors(self) -> list:
        return step_errors(self.system, self.states, self.start_time)


# ---------------------------------------------------------------------------
# layered graphs
# ---------------------------------------------------------------------------


class LayeredGraph:
    """Edge matrices ``M_t[u, v] = d(f_{start+t}(u), v) < delta`` over ``nodes``."""

    def __init__(self, sys: SystemHandle, nodes: Sequence, delta, start: int = 0):
        self.sys = sys
        self.nodes = [sys.coerce(s) for s in nodes]
        self.delta = _check_delta(delta)
        self.start = start
        self._by_map = {}
        self._layers = {}

    def _maps_key(self, t: int):
        return tuple(s.map_at(self.start + t) for s in self.sys.nds)

    def layer(self, t: int) -> np.ndarray:
        if t in self._layers:
            return self._layers[t]
        key = self._maps_key(t)
        if key not in self._by_map:
            traj, D, (nb, m, _) = self.sys.trajectories(self.nodes, 2, self.start + t, extra=[self.delta])
            d2 = kernels.cross_dist2(traj[:, 1], traj[:, 0], self.sys.metric_code, nb, m, D)
            self._by_map[key] = d2 < 2 * self.delta * D
        self._layers[t] = self._by_map[key]
        return self._layers[t]


def _bool_step(R: np.ndarray, M: np.ndarray) -> np.ndarray:
    return (R.astype(np.int32) @ M.astype(np.int32)) > 0 if R.ndim == 2 else M[R].any(axis=0)


def find_chain(sys, x, y, delta, length: int, grid: Sequence, start: int = 0, graph: LayeredGraph | None = None):
    """A delta-chain ``x = x_0, ..., x_length = y`` through grid points, or None.

    Among all such chains the one with the lexicographically smallest sequence
    of grid indices is returned (``y`` ranks after the grid when it is not a
    grid point).
    """
    sys = _as_system(sys)
    delta = _check_delta(delta)
    if length < 1:
        raise ValueError("chain length must be >= 1")
    x, y = sys.coerce(x), sys.coerce(y)
    nodes = [sys.coerce(g) for g in grid]
    if y not in nodes:
        nodes.append(y)
    if x not in nodes:
        nodes.append(x)
    if graph is None or graph.nodes != nodes:
        graph = LayeredGraph(sys, nodes, delta, start)
    ix, iy = nodes.index(x), nodes.index(y)
    N = len(nodes)
    # backward reachability: B[t] = nodes that reach y in length - t steps
    back = [None] * (length + 1)
    b = np.zeros(N, bool)
    b[iy] = True
    back[length] = b
    for t in range(length - 1, -1, -1):
        back[t] = graph.layer(t)[:, back[t + 1]].any(axis=1)
    if not back[0][ix]:
        return None
    path = [ix]
    for t in range(length):
        ok = graph.layer(t)[path[-1]] & back[t + 1]
        path.append(int(np.flatnonzero(ok)[0]))
    return Chain(sys, tuple(nodes[i] for i in path), delta, start)


# ---------------------------------------------------------------------------
# chain properties
# ---------------------------------------------------------------------------


@dataclass
class ChainReport:
    property: str
    epsilon: Fraction
    resolution: int
    horizon: int
    verdict: str
    order: int | None = None
    mixing_N: int | None = None
    min_lengths: list = field(default_factory=list)
    counterexample: tuple | None = None
    sample_chains: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "property": self.property if self.order is None else f"{self.property}({self.order})",
            "epsilon": str(self.epsilon),
            "resolution": self.resolution,
            "horizon": self.horizon,
            "verdict": self.verdict,
            "mixing_N": self.mixing_N,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "witness": {
                "pairs": len(self.min_lengths),
                "max_min_length": max((l for l in self.min_lengths if l is not None), default=None),
                "unreached_pairs": sum(1 for l in self.min_lengths if l is None),
                "sample_chains": [[_state_str(s) for s in c.states] for c in self.sample_chains],
            },
            "notes": list(self.notes),
        }


def _state_str(s) -> str:
    if isinstance(s, tuple):
        return "(" + ", ".join(str(v) for v in s) + ")"
    return str(s) if isinstance(s, Fraction) else repr(s)


def reachability_signatures(graph: LayeredGraph, horizon: int) -> np.ndarray:
    """``sig[u, v]`` has bit ``t - 1`` set when a chain of length t joins u to v."""
    if not 1 <= horizon <= 64:
        raise ValueError("horizon must lie in 1..64")
    N = len(graph.nodes)
    sig = np.zeros((N, N), np.uint64)
    P = np.eye(N, dtype=bool)
    for t in range(horizon):
        P = _bool_step(P, graph.layer(t))
        sig |= P.astype(np.uint64) << np.uint64(t)
    return sig


def _min_length(sig: np.ndarray) -> np.ndarray:
    out = np.full(sig.shape, -1, np.int64)
    for t in range(63, -1, -1):
        hit = ((sig >> np.uint64(t)) & np.uint64(1)).astype(bool)
        out[hit] = t + 1
    return out


def check_chain_property(sys, prop: str, eps, grid: Sequence, horizon: int, order: int = 2,
                         start: int = 0, resolution: int | None = None, exhaustive: bool = False,
                         samples: int = 3) -> ChainReport:
    """Grid check of chain transitivity, chain mixing or chain weak mixing.

    Transitive: every ordered grid pair is joined by a chain of some length up
    to ``horizon``. Mixing: some N has chains of every length in [N, horizon]
    for every pair; the reported N is the least one valid up to the horizon.
    Weak mixing of order n: transitivity of the n-fold product, read off the
    per-pair length sets since the product uses the max metric. A failure is
    only a counterexample when ``exhaustive`` says the grid is the whole state
    space; otherwise it is inconclusive.
    """
    sys = _as_system(sys)
    eps = _check_delta(eps)
    if prop not in PROPERTIES:
        raise ValueError(f"unknown chain property {prop!r}")
    if not grid:
        raise ValueError("grid must be nonempty")
    if prop == "weak_mixing" and order < 2:
        raise ValueError("weak mixing needs order >= 2")
    graph = LayeredGraph(sys, grid, eps, start)
    N = len(graph.nodes)
    sig = reachability_signatures(graph, horizon)
    mins = _min_length(sig)
    rep = ChainReport(prop, eps, resolution or N, horizon, "inconclusive",
                      order if prop == "weak_mixing" else None,
                      min_lengths=[None if v < 0 else int(v) for v in mins.ravel()])
    fail_verdict = "counterexample" if exhaustive else "inconclusive"
    if prop == "transitive":
        bad = np.argwhere(sig == 0)
        ok = len(bad) == 0
    elif prop == "mixing":
        full = np.uint64((1 << 64) - 1) if horizon == 64 else np.uint64((1 << horizon) - 1)
        mixN = None
        for n0 in range(1, horizon + 1):
            need = full & ~np.uint64((1 << (n0 - 1)) - 1)
            if np.all((sig & need) == need):
                mixN = n0
                break
        ok = mixN is not None
        bad = np.argwhere(((sig >> np.uint64(horizon - 1)) & np.uint64(1)) == 0) if not ok else []
        rep.mixing_N = mixN
        rep.notes.append("N is the least value valid up to the horizon; stability beyond it is not checked")
    else:
        ok, bad = _weak_mixing(sig, order)
    if ok:
        rep.verdict = "verified-at-resolution"
        pairs = [(0, N - 1), (N - 1, 0), (N // 2, 0)][:samples]
        for u, v in pairs:
            L = int(mins[u, v]) if prop != "mixing" else horizon
            c = find_chain(sys, graph.nodes[u], graph.nodes[v], eps, L, graph.nodes, start, graph)
            if c is not None:
                rep.sample_chains.append(c)
    else:
        rep.verdict = fail_verdict
        if len(bad):
            u, v = (int(i) for i in np.ravel(bad[0])[:2])
            rep.counterexample = (_state_str(graph.nodes[u]), _state_str(graph.nodes[v]))
    return rep


def _weak_mixing(sig: np.ndarray, order: int):
    """Every ``order``-tuple of pairs shares a common chain length."""
    vals = np.unique(sig)
    if np.any(vals == 0):
        return False, np.argwhere(sig == 0)
    reach = set(int(v) for v in vals)
    for _ in range(order - 1):
        nxt = set()
        for a in reach:
            for b in vals:
                c = a & int(b)
                if c == 0:
                    return False, []
                nxt.add(c)
        reach = nxt
    return True, []


# ---------------------------------------------------------------------------
# level-set lifting
# ---------------------------------------------------------------------------


def lift_chain_to_fuzzy(chains: Sequence[Chain], thresholds: Sequence) -> Chain:
    """Fuzzy chain whose level ``i`` at step ``j`` is the union of the level
    chains ``i..k`` at step ``j``; nesting holds by construction and each step
    error is at most the largest level error."""
    if not chains:
        raise ValueError("need at least one level chain")
    th = tuple(frac(a) for a in thresholds)
    if len(th) != len(chains):
        raise ValueError("one threshold per level chain")
    L, delta, start = chains[0].length, chains[0].delta, chains[0].start_time
    if any(c.length != L or c.delta != delta or c.start_time != start for c in chains):
        raise ValueError("level chains must share length, delta and start time")
    nds = chains[0].system.base
    space = nds.space

    def as_set(s):
        return s if isinstance(s, FiniteCompact) else FiniteCompact((s,), space)

    states = []
    for j in range(L + 1):
        sets = [as_set(c.states[j]) for c in chains]
        levels, acc = [], None
        for S in reversed(sets):
            acc = S if acc is None else acc.union(S)
            levels.append(acc)
        states.append(PCFuzzy(th, tuple(reversed(levels))))
    cap = max(len(u.support) for u in states)
    return Chain(fuzzy_system(nds, cap), tuple(states), delta, start)


def singleton_chain(chain: Chain, kind: str) -> Chain:
    """Lift a base chain to ``{x_i}`` (hyper) or ``chi_{x_i}`` (fuzzy)."""
    nds = chain.system.base
    sets = [FiniteCompact((x,), nds.space) for x in chain.states]
    if kind == "hyper":
        return Chain(hyper_system(nds, 1), tuple(sets), chain.delta, chain.start_time)
    return Chain(fuzzy_system(nds, 1), tuple(sets), chain.delta, chain.start_time)
