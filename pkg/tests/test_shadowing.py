from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ndstk.shadowing import (UnsupportedSpace, decide_finite_shadowing, decide_h_shadowing, decide_lifted_shadowing,
                             estimate_shadowing_modulus, mixing_from_shadowing, random_pseudo_orbit, tube_set)
from ndstk.fuzzy import chi
from ndstk.hyperspace import FiniteCompact
from ndstk.spaces import autonomous, build_rotation_sequence, identity, orbit, tent

T = autonomous(tent())
I = autonomous(identity())


def grid_shadowed(xs, eps, step=10 ** 4):
    """Float brute force over the grid i/step."""
    z = np.arange(step + 1) / step
    ok = np.abs(z - float(xs[0])) <= float(eps)
    for x in xs[1:]:
        z = 1 - np.abs(1 - 2 * z)
        ok &= np.abs(z - float(x)) <= float(eps)
    return bool(ok.any())


def test_against_grid_brute_force():
    rng = np.random.default_rng(7)
    checked = 0
    for trial in range(60):
        length = 2 + trial % 5
        po = random_pseudo_orbit(T, length, F(1, 20), rng)
        dec = decide_finite_shadowing(T, po, F(1, 20), eta=F(1, 10 ** 4))
        if dec.boundary:
            continue
        assert dec.shadowed == grid_shadowed(po, F(1, 20))
        checked += 1
    assert checked >= 40


@settings(max_examples=50)
@given(st.integers(0, 1000), st.integers(1, 8), st.integers(1, 50))
def test_true_orbits_shadow_themselves(x, n, e):
    x0 = F(x, 1000)
    xs = orbit(T, x0, n)
    dec = decide_finite_shadowing(T, xs, F(e, 1000))
    assert dec.shadowed
    assert x0 in dec.feasible
    assert tube_set(T, xs, F(e, 1000)).verify(T)


@settings(max_examples=50)
@given(st.integers(0, 10 ** 6), st.integers(2, 6))
def test_h_witness_hits_end_and_shadows(seed, n):
    rng = np.random.default_rng(seed)
    po = random_pseudo_orbit(T, n, F(1, 50), rng)
    eps = F(1, 10)
    h = decide_h_shadowing(T, po, eps)
    f = decide_finite_shadowing(T, po, eps)
    if h.shadowed:
        zs = orbit(T, h.witness, n - 1)
        assert zs[-1] == po[-1]
        assert all(abs(z - x) <= eps for z, x in zip(zs, po))
        assert f.shadowed


def test_witness_is_leftmost_and_valid():
    po = [F(1, 3), F(2, 3), F(2, 3)]
    dec = decide_finite_shadowing(T, po, F(1, 10))
    zs = orbit(T, dec.witness, 2)
    assert all(abs(z - x) <= F(1, 10) for z, x in zip(zs, po))
    assert dec.witness == dec.feasible.leftmost()


def test_unshadowable_orbit():
    dec = decide_finite_shadowing(I, [F(0), F(1, 2)], F(1, 10))
    assert not dec.shadowed and dec.witness is None


def test_lifted_shadowing_matches_base():
    po = [F(1, 5), F(2, 5), F(4, 5)]
    base = decide_finite_shadowing(T, po, F(1, 20))
    for lift in ([FiniteCompact((x,)) for x in po], [chi(FiniteCompact((x,))) for x in po]):
        assert decide_lifted_shadowing(T, lift, F(1, 20)).shadowed == base.shadowed
    with pytest.raises(ValueError):
        decide_lifted_shadowing(T, [FiniteCompact((F(0), F(1)))], F(1, 20))


def test_circle_is_rejected():
    with pytest.raises(UnsupportedSpace):
        decide_finite_shadowing(build_rotation_sequence([F(1, 3)]), [F(0)], F(1, 10))


def test_modulus_and_mixing_trace():
    est = estimate_shadowing_modulus(T, F(1, 10), 20, 6, [F(1, 100), F(1, 1000)], seed=3)
    assert est.delta > 0
    again = estimate_shadowing_modulus(T, F(1, 10), 20, 6, [F(1, 100), F(1, 1000)], seed=3)
    assert est.rows == again.rows
    tr = mixing_from_shadowing(T, F(1, 20), F(1, 200), F(1, 5), F(3, 5), F(1, 10), 12)
    assert tr.verdict == "verified"
    for k, c, s, z, u, v in tr.rows:
        if k >= tr.N:
            assert c and s and u and v
