import math
import os
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ndstk import kernels
from ndstk.entropy import (CoverError, UnsupportedSystem, entropy_estimate, lap_count_entropy, lap_counts,
                           separated_count, spanning_count)
from ndstk.fuzzy import PCFuzzy, chi
from ndstk.hyperspace import Arc, FiniteCompact
from ndstk.spaces import autonomous, build_rotation_sequence, identity, rotation, tent
from ndstk.systems import arcs_system, base_system, fuzzy_system, hyper_system, power_system, product_system

T = autonomous(tent())
I = autonomous(identity())
R = build_rotation_sequence([F(1, 3), F(1, 5)])


def bowen(sys, a, b, n):
    oa, ob = sys.orbit(a, n - 1), sys.orbit(b, n - 1)
    return max(sys.distance(x, y) for x, y in zip(oa, ob))


def brute_separated(sys, n, eps, cands):
    kept = []
    for c in cands:
        if all(bowen(sys, c, k, n) > eps for k in kept):
            kept.append(c)
    return len(kept)


def brute_spanning(sys, n, eps, cands, targets):
    close = [[bowen(sys, t, c, n) <= eps for c in cands] for t in targets]
    uncovered = set(range(len(targets)))
    count = 0
    while uncovered:
        gains = [sum(1 for t in uncovered if close[t][j]) for j in range(len(cands))]
        j = gains.index(max(gains))
        uncovered -= {t for t in uncovered if close[t][j]}
        count += 1
    return count


def grid(k, circle=False):
    return [F(i, k) for i in range(k + (0 if circle else 1))]


CASES = [
    ("tent", lambda: base_system(T), lambda: grid(40)),
    ("rotations", lambda: base_system(R), lambda: grid(30, True)),
    ("power", lambda: power_system(T, 2), lambda: [(a, b) for a in grid(6) for b in grid(6)]),
    ("product", lambda: product_system(T, I), lambda: [(a, b) for a in grid(6) for b in grid(5)]),
    ("hyper", lambda: hyper_system(T, 2), lambda: [FiniteCompact((a, b)) for a in grid(8) for b in grid(8) if a <= b]),
    ("fuzzy", lambda: fuzzy_system(T, 2),
     lambda: [chi(FiniteCompact((a,))) for a in grid(8)]
     + [PCFuzzy((F(1, 2), F(1)), (FiniteCompact((a, b)), FiniteCompact((a,)))) for a in grid(6) for b in grid(6) if a != b]),
    ("arcs", lambda: arcs_system(R), lambda: [Arc(a, b) for a in grid(6, True) for b in grid(6, True)] + [Arc(0, 0, True)]),
]


@pytest.mark.parametrize("name,make,cands", CASES, ids=[c[0] for c in CASES])
@pytest.mark.parametrize("n,eps", [(1, F(1, 10)), (3, F(1, 8)), (4, F(1, 5))])
def test_counts_match_exact_greedy(name, make, cands, n, eps):
    sys_ = make()
    cs = cands()
    assert separated_count(sys_, n, eps, cs) == brute_separated(sys_, n, eps, cs)
    assert spanning_count(sys_, n, eps, cs, cs) == brute_spanning(sys_, n, eps, cs, cs)


def test_identity_counts_closed_balls():
    cs = grid(100)
    assert separated_count(base_system(I), 3, F(1, 2), cs) == 2
    assert spanning_count(base_system(I), 3, F(1, 2), cs, cs) == 1


def test_spanning_needs_reachable_targets():
    with pytest.raises(CoverError):
        spanning_count(base_system(I), 2, F(1, 10), [F(0)], [F(1)])


def test_lap_oracle():
    assert lap_counts(T, 10) == [2 ** n for n in range(1, 11)]
    assert lap_count_entropy(T, 12) == pytest.approx(math.log(2), abs=1e-12)
    assert lap_count_entropy(I, 5) == 0
    with pytest.raises(UnsupportedSystem):
        lap_counts(R, 3)


def test_tent_estimate_and_sandwich():
    s = entropy_estimate(base_system(T), [F(1, 16), F(1, 32)], 8)
    assert s.complete
    assert abs(s.summary_slope - math.log(2)) < 0.1
    assert s.sandwich_violations() == []
    for r in s.rows:
        assert r.span <= r.sep


def test_zero_entropy_systems():
    for nds in (I, R):
        s = entropy_estimate(base_system(nds), [F(1, 32)], 8)
        assert abs(s.summary_slope) < 0.05


def test_chunking_does_not_change_counts():
    a = entropy_estimate(base_system(T), [F(1, 16)], 6)
    b = entropy_estimate(base_system(T), [F(1, 16)], 6, chunk=97)
    assert [(r.sep, r.span) for r in a.rows] == [(r.sep, r.span) for r in b.rows]


def test_budget_marks_series_incomplete():
    s = entropy_estimate(base_system(T), [F(1, 16)], 10, candidate_budget=3000)
    assert not s.complete
    assert any(not r.resolved for r in s.rows) or len(s.rows) < 10


def test_csv_is_rfc4180():
    s = entropy_estimate(base_system(T), [F(1, 8)], 4, spanning=False)
    text = s.to_csv()
    assert text.startswith("kind,n,eps,sep,span,slope\r\n")
    assert text.count("\r\n") == len(s.rows) + 1


def test_schedule_validation():
    with pytest.raises(ValueError):
        entropy_estimate(base_system(T), [F(1, 8), F(1, 4)], 6)
    with pytest.raises(ValueError):
        entropy_estimate(base_system(T), [F(1, 8)], 3)


# -- backend agreement -------------------------------------------------------


def _rows(rng, code, nb, m, D, N):
    if code == kernels.ARC_CODE:
        a = rng.integers(0, D, (N, 1))
        ln = rng.integers(0, D + 1, (N, 1))
        return np.concatenate([a, ln], axis=1)
    return rng.integers(0, D + 1 if code == 0 else D, (N, nb * m))


@settings(max_examples=60)
@given(st.sampled_from([0, 1, 2]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_distance_backends_agree(code, nb, m, seed):
    rng = np.random.default_rng(seed)
    D = 48
    if code == kernels.ARC_CODE:
        nb, m = 1, 2
    A, B = _rows(rng, code, nb, m, D, 7), _rows(rng, code, nb, m, D, 5)
    jit = kernels.cross_dist2_jit(A, B, code, nb, m, D)
    loop = kernels.cross_dist2_jit.py_func(A, B, code, nb, m, D) if hasattr(kernels.cross_dist2_jit, "py_func") else jit
    num = kernels.cross_dist2_numpy(A, B, code, nb, m, D)
    assert np.array_equal(jit, loop) and np.array_equal(jit, num)


def test_pure_python_backend_gives_same_estimate():
    code = (
        "from fractions import Fraction as F\n"
        "from ndstk.entropy import entropy_estimate\n"
        "from ndstk.spaces import autonomous, tent\n"
        "from ndstk.systems import hyper_system, base_system\n"
        "from ndstk import kernels\n"
        "assert kernels.USE_NUMBA == {flag}\n"
        "a = entropy_estimate(base_system(autonomous(tent())), [F(1, 8)], 4)\n"
        "b = entropy_estimate(hyper_system(autonomous(tent()), 2), [F(1, 4)], 4)\n"
        "print([(r.sep, r.span) for r in a.rows + b.rows])\n"
    )
    outs = []
    for flag in ("1", "0"):
        env = dict(os.environ, NDSTK_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", code.format(flag=flag == "1")], env=env, capture_output=True,
                             text=True, check=True)
        outs.append(res.stdout)
    assert outs[0] == outs[1]


def test_singleton_and_large_eps_counts():
    assert separated_count(base_system(T), 5, F(1, 100), [F(1, 3)]) == 1
    cs = grid(20)
    assert spanning_count(base_system(T), 4, F(1), cs, cs) == 1


def test_tent_span_within_factor_four_of_finer_sep():
    cs = grid(2048)
    span = spanning_count(base_system(T), 8, F(1, 64), cs, cs)
    sep = separated_count(base_system(T), 8, F(1, 128), cs)
    assert sep / 4 <= span <= sep
