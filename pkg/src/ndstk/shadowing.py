"""Exact shadowing decisions for interval NDS.

A finite pseudo-orbit ``x_0..x_n`` is eps-shadowed when some ``z`` has
``|f_0^k(z) - x_k| <= eps`` for every k. The admissible ``z`` form the tube
``W_0`` computed backwards: ``W_n = S_n``, ``W_k = S_k ∩ f_k^{-1}(W_{k+1})``
with ``S_k`` the closed eps-ball around ``x_k``. Everything is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .chains import find_chain
from .fuzzy import PCFuzzy
from .hyperspace import FiniteCompact
from .spaces import CIRCLE, UNIT, IntervalUnion, NdsSpec, frac, orbit, point, preimage
from .systems import SystemHandle

RANDOM_DENOMINATOR = 1 << 20


class UnsupportedSpace(ValueError):
    pass


def _nds(sys) -> NdsSpec:
    nds = sys.base if isinstance(sys, SystemHandle) else sys
    if nds.space == CIRCLE:
        raise UnsupportedSpace("shadowing is decided for interval systems only")
    return nds


def _check_eps(eps) -> Fraction:
    eps = frac(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return eps


@dataclass(frozen=True)
class Tube:
    constraints: tuple  # S_k
    pulled: tuple  # W_k
    start: int = 0

    @property
    def feasible(self) -> IntervalUnion:
        return self.pulled[0]

    def verify(self, nds: NdsSpec) -> bool:
        """Pushing the feasible set forward stays inside every S_k."""
        from .spaces import image

        cur = self.feasible
        for k, S in enumerate(self.constraints):
            if not cur.issubset(S):
                return False
            if k + 1 < len(self.constraints):
                cur = image(nds.map_at(self.start + k), cur)
        return True


def _tube(nds: NdsSpec, xs: list, eps: Fraction, start: int, last: IntervalUnion | None) -> Tube:
    S = [IntervalUnion.ball(x, eps).intersect(UNIT) for x in xs]
    W = [None] * len(S)
    W[-1] = S[-1] if last is None else S[-1].intersect(last)
    for k in range(len(S) - 2, -1, -1):
        W[k] = S[k].intersect(preimage(nds.map_at(start + k), W[k + 1]))
    return Tube(tuple(S), tuple(W), start)


def tube_set(sys, pseudo_orbit: Sequence, eps, start: int = 0) -> Tube:
    nds = _nds(sys)
    eps = _check_eps(eps)
    if not pseudo_orbit:
        raise ValueError("pseudo-orbit must be nonempty")
    xs = [point(x) for x in pseudo_orbit]
    return _tube(nds, xs, eps, start, None)


@dataclass
class ShadowDecision:
    orbit: list
    eps: Fraction
    shadowed: bool
    witness: Fraction | None
    boundary: bool
    feasible: IntervalUnion
    kind: str = "finite"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "orbit": [str(x) for x in self.orbit],
            "eps": str(self.eps),
            "verdict": self.shadowed,
            "witness": None if self.witness is None else str(self.witness),
            "boundary_flag": self.boundary,
            "feasible": [[str(a), str(b)] for a, b in self.feasible],
        }


def _boundary(nds, xs, eps, start, last, eta) -> bool:
    lo = _tube(nds, xs, eps - eta, start, last).feasible if eps > eta else IntervalUnion(())
    hi = _tube(nds, xs, eps + eta, start, last).feasible
    return bool(lo) != bool(hi)


def decide_finite_shadowing(sys, pseudo_orbit: Sequence, eps, start: int = 0, eta=None) -> ShadowDecision:
    """Closed-tube decision; the witness is the leftmost feasible point.

    ``boundary`` is set when the answer flips between ``eps - eta`` and
    ``eps + eta`` (default ``eta = eps / 1000``), i.e. when strict and closed
    tubes could disagree.
    """
    nds = _nds(sys)
    eps = _check_eps(eps)
    eta = eps / 1000 if eta is None else frac(eta)
    xs = [point(x) for x in pseudo_orbit]
    tube = _tube(nds, xs, eps, start, None)
    W = tube.feasible
    return ShadowDecision(xs, eps, bool(W), W.leftmost() if W else None,
                          _boundary(nds, xs, eps, start, None, eta), W)


def decide_h_shadowing(sys, pseudo_orbit: Sequence, eps, start: int = 0, eta=None) -> ShadowDecision:
    """As :func:`decide_finite_shadowing` but the orbit must hit ``x_n`` exactly."""
    nds = _nds(sys)
    eps = _check_eps(eps)
    eta = eps / 1000 if eta is None else frac(eta)
    xs = [point(x) for x in pseudo_orbit]
    end = IntervalUnion.points([xs[-1]])
    tube = _tube(nds, xs, eps, start, end)
    W = tube.feasible
    return ShadowDecision(xs, eps, bool(W), W.leftmost() if W else None,
                          _boundary(nds, xs, eps, start, end, eta), W, "h")


def decide_lifted_shadowing(sys, pseudo_orbit: Sequence, eps, start: int = 0) -> ShadowDecision:
    """Shadowing of a pseudo-orbit of singletons ``{x_k}`` or ``chi_{x_k}``.

    The Hausdorff and levelwise metrics agree with ``d`` on singletons and the
    induced maps send singletons to singletons, so a singleton shadow of the
    lifted orbit is the lift of a base shadow. A larger shadowing set can only
    be farther from a singleton than its nearest point, so restricting to
    singleton shadows loses nothing.
    """
    xs = []
    for s in pseudo_orbit:
        if isinstance(s, PCFuzzy):
            if len(s.support) != 1:
                raise ValueError("lifted shadowing needs singleton supports")
            s = s.support
        if isinstance(s, FiniteCompact):
            if len(s) != 1:
                raise ValueError("lifted shadowing needs singleton sets")
            s = s.points[0]
        xs.append(s)
    return decide_finite_shadowing(sys, xs, eps, start)


# ---------------------------------------------------------------------------
# randomised modulus and the shadowing-to-mixing trace
# ---------------------------------------------------------------------------


def random_pseudo_orbit(nds: NdsSpec, length: int, delta: Fraction, rng: np.random.Generator, start: int = 0) -> list:
    """True orbit steps plus uniform perturbations in (-delta, delta), clamped."""
    R = RANDOM_DENOMINATOR
    x = Fraction(int(rng.integers(0, R + 1)), R)
    out = [x]
    for k in range(length - 1):
        u = Fraction(int(rng.integers(-R + 1, R)), R)
        y = nds.map_at(start + k)(x) + u * delta
        x = min(max(y, Fraction(0)), Fraction(1))
        out.append(x)
    return out


@dataclass
class ModulusEstimate:
    eps: Fraction
    delta: Fraction
    seed: int
    trials: int
    orbit_length: int
    rows: list = field(default_factory=list)  # (delta, failures)
    counterexample: list | None = None

    def to_dict(self) -> dict:
        return {
            "eps": str(self.eps),
            "delta": str(self.delta),
            "seed": self.seed,
            "trials": self.trials,
            "orbit_length": self.orbit_length,
            "counterexample": None if self.counterexample is None else [str(x) for x in self.counterexample],
        }


def estimate_shadowing_modulus(sys, eps, trials: int, orbit_length: int, delta_grid: Sequence,
                               seed: int = 0, start: int = 0) -> ModulusEstimate:
    """Largest delta in the grid whose sampled delta-pseudo-orbits are all
    eps-shadowed; 0 with the failing orbit when none passes."""
    nds = _nds(sys)
    eps = _check_eps(eps)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    deltas = sorted({frac(d) for d in delta_grid}, reverse=True)
    est = ModulusEstimate(eps, Fraction(0), seed, trials, orbit_length)
    for d in deltas:
        rng = np.random.default_rng([seed, d.numerator, d.denominator])
        fails = 0
        first = None
        for _ in range(trials):
            po = random_pseudo_orbit(nds, orbit_length, d, rng, start)
            if not decide_finite_shadowing(nds, po, eps, start).shadowed:
                fails += 1
                first = first or po
        est.rows.append((d, fails))
        if fails == 0 and est.delta == 0:
            est.delta = d
        if fails and est.counterexample is None:
            est.counterexample = first
    if est.delta:
        est.counterexample = None
    return est


@dataclass
class MixingTrace:
    verdict: str
    N: int | None
    rows: list  # (k, chain_found, shadowed, witness, in_U, in_V)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "N": self.N,
            "rows": [[k, c, s, None if z is None else str(z), u, v] for k, c, s, z, u, v in self.rows],
        }


def mixing_from_shadowing(sys, eps, delta, U_center, V_center, radius, horizon: int,
                          grid: Sequence | None = None, start: int = 0) -> MixingTrace:
    """For each k up to the horizon: a delta-chain from U's centre to V's centre
    of length k, shadowed within eps, gives z near U with f_0^k(z) near V.

    Verified when some N makes every k in [N, horizon] succeed; inconclusive
    when some chain is missing at this resolution; not-verified otherwise.
    """
    nds = _nds(sys)
    eps, delta, radius = _check_eps(eps), _check_eps(delta), _check_eps(radius)
    uc, vc = point(U_center), point(V_center)
    if grid is None:
        res = int(2 / delta) + 1
        grid = [Fraction(i, res) for i in range(res + 1)]
    rows = []
    for k in range(1, horizon + 1):
        ch = find_chain(nds, uc, vc, delta, k, grid, start)
        if ch is None:
            rows.append((k, False, False, None, False, False))
            continue
        dec = decide_finite_shadowing(nds, ch.states, eps, start)
        if not dec.shadowed:
            rows.append((k, True, False, None, False, False))
            continue
        z = dec.witness
        zk = orbit(nds, z, k, start)[-1]
        rows.append((k, True, True, z, abs(z - uc) < radius, abs(zk - vc) < radius))
    ok = [r[2] and r[4] and r[5] for r in rows]
    N = None
    for i in range(len(ok) - 1, -1, -1):
        if not ok[i]:
            break
        N = rows[i][0]
    if N is not None:
        return MixingTrace("verified", N, rows)
    last = rows[-1]
    return MixingTrace("inconclusive" if not last[1] else "not-verified", None, rows)
