"""Sensitivity-time sets, finite-horizon Furstenberg families and the
containments between base, hyperspace and fuzzy sensitivity times.

``N(x, eps, delta)`` is the set of times ``n`` in ``1..horizon`` at which some
sampled ``y`` in the open eps-ball around ``x`` has
``d(f_0^n x, f_0^n y) > delta``. Samples come from nested Halton sequences,
so more samples never remove members.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .fuzzy import PCFuzzy, chi, level_set
from .hyperspace import FiniteCompact
from .spaces import CIRCLE, NdsSpec, frac, point
from .systems import SystemHandle, base_system, fuzzy_system, hyper_system

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
FAMILIES = ("infinite", "cofinite", "syndetic", "full")


@dataclass(frozen=True)
class TimeSet:
    horizon: int
    members: tuple

    def __post_init__(self):
        m = tuple(sorted(set(int(n) for n in self.members)))
        if m and (m[0] < 1 or m[-1] > self.horizon):
            raise ValueError("members must lie in 1..horizon")
        object.__setattr__(self, "members", m)

    def __and__(self, other: "TimeSet") -> "TimeSet":
        if self.horizon != other.horizon:
            raise ValueError("time sets with different horizons")
        return TimeSet(self.horizon, tuple(set(self.members) & set(other.members)))

    def __le__(self, other: "TimeSet") -> bool:
        return set(self.members) <= set(other.members)

    def __len__(self):
        return len(self.members)

    def to_dict(self) -> dict:
        return {"horizon": self.horizon, "members": list(self.members)}


@dataclass(frozen=True)
class FamilyPredicate:
    """``infinite(c)``: at least c members; ``cofinite(m)``: at most m missing;
    ``syndetic(g)``: every gap, counting 0 -> first and last -> horizon+1, is
    at most g; ``full``: every time is a member."""

    kind: str
    param: int = 0

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise ValueError(f"unknown family {self.kind!r}")
        if self.kind == "cofinite" and self.param < 0:
            raise ValueError("cofinite budget must be >= 0")
        if self.kind in ("infinite", "syndetic") and self.param < 1:
            raise ValueError(f"{self.kind} parameter must be positive")

    def __str__(self):
        return self.kind if self.kind == "full" else f"{self.kind}({self.param})"


def family_member(family: FamilyPredicate, ts: TimeSet) -> bool:
    k, h, m = family.kind, ts.horizon, ts.members
    if k == "infinite":
        return len(m) >= family.param
    if k == "cofinite":
        return h - len(m) <= family.param
    if k == "full":
        return len(m) == h
    pts = (0,) + m + (h + 1,)
    return all(b - a <= family.param for a, b in zip(pts, pts[1:]))


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def halton(j: int, base: int) -> Fraction:
    """Radical inverse of ``j >= 1``; always strictly inside (0, 1)."""
    f, out, b = Fraction(1), Fraction(0), base
    while j:
        f /= b
        out += f * (j % b)
        j //= b
    return out


def _offsets(count: int, dim: int) -> list:
    if dim > len(PRIMES):
        raise ValueError(f"at most {len(PRIMES)} perturbed coordinates")
    return [[2 * halton(j, PRIMES[d]) - 1 for d in range(dim)] for j in range(1, count + 1)]


def _move(x: Fraction, off: Fraction, space: str) -> Fraction:
    y = x + off
    if space == CIRCLE:
        return point(y, CIRCLE)
    return min(max(y, Fraction(0)), Fraction(1))


def point_samples(x, r, count: int, space: str) -> list:
    return [_move(point(x, space), r * o[0], space) for o in _offsets(count, 1)]


def set_samples(K: FiniteCompact, r, count: int) -> list:
    """``P_s``: every point of K moved independently by less than r; then the
    unions ``P_s ∪ P_{s+1}``. Each lies within r of K in the Hausdorff metric."""
    r = frac(r)
    P = [FiniteCompact(tuple(_move(p, r * o[i], K.space) for i, p in enumerate(K.points)), K.space)
         for o in _offsets(count, len(K))]
    return P + [a.union(b) for a, b in zip(P, P[1:])]


def raise_top(u: PCFuzzy, Kp: FiniteCompact) -> PCFuzzy:
    """``v(K')``: top level ``K'`` and every lower level ``[u]_a ∪ K'``.

    If ``K'`` is within r of ``[u]_1`` then ``v(K')`` is within r of u levelwise.
    """
    levels = tuple(C.union(Kp) for C in u.levels[:-1]) + (Kp,)
    return PCFuzzy(u.thresholds, levels)


def fuzzy_samples(u: PCFuzzy, r, count: int) -> list:
    """For ``chi_K``: ``chi(P)`` and two-level sets ``(P_s ∪ P_{s+1} below, P_s
    on top)``; otherwise ``v(K')`` for ``K'`` sampled around ``[u]_1`` at r/4."""
    r = frac(r)
    if len(u.levels) == 1:
        S = set_samples(u.support, r, count)
        P = S[:count]
        two = [PCFuzzy((Fraction(1, 2), Fraction(1)), (a.union(b), a)) for a, b in zip(P, P[1:])]
        return [chi(A) for A in S] + two
    return [raise_top(u, Kp) for Kp in set_samples(level_set(u, 1), r / 4, count)]


def ball_samples(sys: SystemHandle, x, r, count: int) -> list:
    """Deterministic samples of the open r-ball around ``x``."""
    x = sys.coerce(x)
    if sys.kind == "base":
        return point_samples(x, r, count, sys.space)
    if sys.kind == "product":
        return [tuple(_move(c, frac(r) * o[i], sys.space) for i, c in enumerate(x)) for o in _offsets(count, len(x))]
    if sys.kind == "hyper":
        return set_samples(x, r, count)
    if sys.kind == "fuzzy":
        return fuzzy_samples(x, r, count)
    raise ValueError("sensitivity sampling is not defined for arc systems")


# ---------------------------------------------------------------------------
# sensitivity times
# ---------------------------------------------------------------------------


def _as_system(sys) -> SystemHandle:
    return base_system(sys) if isinstance(sys, NdsSpec) else sys


def separation_times(sys, x, ys: Sequence, delta, horizon: int, start: int = 0) -> TimeSet:
    """Times in 1..horizon where some ``y`` in ``ys`` separates from ``x`` by more than delta."""
    sys = _as_system(sys)
    delta = frac(delta)
    if not ys:
        return TimeSet(horizon, ())
    x = sys.coerce(x)
    ys = [sys.coerce(y) for y in ys]
    if sys.kind == "hyper":
        sys = hyper_system(sys.base, max(len(s) for s in [x] + ys))
    elif sys.kind == "fuzzy":
        sys = fuzzy_system(sys.base, max(len(s.support) for s in [x] + ys))
    traj, D, (nb, m, _) = sys.trajectories([x] + ys, horizon + 1, start, extra=[delta])
    lim = 2 * delta * D
    members = []
    for t in range(1, horizon + 1):
        d2 = kernels.cross_dist2(traj[:1, t], traj[1:, t], sys.metric_code, nb, m, D)
        if (d2 > lim).any():
            members.append(t)
    return TimeSet(horizon, tuple(members))


def sensitivity_times(sys, x, eps, delta, horizon: int, samples: int | Sequence = 64, start: int = 0,
                      random_extra: int = 0, seed: int = 0) -> TimeSet:
    """Certified subset of ``N(x, eps, delta)`` on ``1..horizon``.

    ``samples`` is a count for the built-in sampler or an explicit list of
    states (assumed to lie in the ball). ``random_extra`` adds seeded uniform
    points of the ball for base systems.
    """
    sys = _as_system(sys)
    eps, delta = frac(eps), frac(delta)
    if eps <= 0 or delta <= 0:
        raise ValueError("eps and delta must be positive")
    if isinstance(samples, int):
        if samples < 1:
            raise ValueError("need at least one sample")
        ys = ball_samples(sys, x, eps, samples)
    else:
        ys = list(samples)
    if random_extra:
        if sys.kind != "base":
            raise ValueError("random extras are only drawn for base systems")
        rng = np.random.default_rng(seed)
        R = 1 << 20
        xc = sys.coerce(x)
        ys += [_move(xc, eps * Fraction(int(k), R), sys.space) for k in rng.integers(-R + 1, R, random_extra)]
    return separation_times(sys, x, ys, delta, horizon, start)


def check_multi_F_sensitive(sys, points: Sequence, eps, delta, family: FamilyPredicate, horizon: int,
                            samples: int | Sequence = 64, start: int = 0) -> tuple:
    """``(member, intersection)`` of the per-point sensitivity time sets."""
    if not points:
        raise ValueError("need at least one point")
    sets = [sensitivity_times(sys, p, eps, delta, horizon, samples, start) for p in points]
    inter = sets[0]
    for s in sets[1:]:
        inter = inter & s
    return family_member(family, inter), inter


@dataclass
class ContainmentReport:
    horizon: int
    base: TimeSet
    hyper_K: TimeSet
    fuzzy_chi: TimeSet
    hyper_u1: TimeSet
    fuzzy_u: TimeSet
    violations_i: tuple
    violations_ii: tuple

    @property
    def holds(self) -> bool:
        return not self.violations_i and not self.violations_ii

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "base": list(self.base.members),
            "hyper_K": list(self.hyper_K.members),
            "fuzzy_chi_K": list(self.fuzzy_chi.members),
            "hyper_u1_quarter": list(self.hyper_u1.members),
            "fuzzy_u": list(self.fuzzy_u.members),
            "containment_i": not self.violations_i,
            "containment_ii": not self.violations_ii,
            "violations_i": list(self.violations_i),
            "violations_ii": list(self.violations_ii),
        }


def induced_containments(nds: NdsSpec, K: FiniteCompact, u: PCFuzzy, eps, delta, horizon: int,
                         samples: int = 16, start: int = 0) -> ContainmentReport:
    """Sampled check of ``N_fuzzy(chi_K, eps) ⊆ N_hyper(K, eps)`` (i) and
    ``N_hyper([u]_1, eps/4) ⊆ N_fuzzy(u, eps)`` (ii).

    The samples are coupled the way the inclusions are argued: the hyperspace
    samples at K contain every level of the fuzzy samples at chi_K, and each
    hyperspace sample K' at [u]_1 appears in the fuzzy samples at u as the
    top level of ``v(K')``. Any reported violation therefore points at the
    sampler or the metrics, not at the inclusions.
    """
    eps, delta = frac(eps), frac(delta)
    hyp, fz = hyper_system(nds, 1), fuzzy_system(nds, 1)
    chiK = chi(K)
    fz_chi = fuzzy_samples(chiK, eps, samples)
    hyp_K = sorted({C for v in fz_chi for C in v.levels} | set(set_samples(K, eps, samples)), key=_set_key)
    u1 = level_set(u, 1)
    hyp_u1 = set_samples(u1, eps / 4, samples)
    fz_u = [raise_top(u, Kp) for Kp in hyp_u1]

    base = TimeSet(horizon, ())
    for p in K.points:
        s = sensitivity_times(nds, p, eps, delta, horizon, samples, start)
        base = TimeSet(horizon, base.members + s.members)
    tK = separation_times(hyp, K, hyp_K, delta, horizon, start)
    tchi = separation_times(fz, chiK, fz_chi, delta, horizon, start)
    tu1 = separation_times(hyp, u1, hyp_u1, delta, horizon, start)
    tu = separation_times(fz, u, fz_u, delta, horizon, start)
    v1 = tuple(n for n in tchi.members if n not in tK.members)
    v2 = tuple(n for n in tu1.members if n not in tu.members)
    return ContainmentReport(horizon, base, tK, tchi, tu1, tu, v1, v2)


def _set_key(C: FiniteCompact):
    return (len(C), C.points)
