from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ndstk.chains import (Chain, LayeredGraph, check_chain_property, find_chain, is_pseudo_orbit, lift_chain_to_fuzzy,
                          reachability_signatures, singleton_chain, step_errors)
from ndstk.spaces import autonomous, build_rotation_sequence, identity, tent
from ndstk.systems import base_system

T = autonomous(tent())
I = autonomous(identity())
GRID = [F(i, 50) for i in range(51)]


def test_pseudo_orbit_is_strict():
    assert is_pseudo_orbit(T, [F(1, 4), F(1, 2), F(1)], F(1, 100))
    assert not is_pseudo_orbit(T, [F(1, 4), F(6, 10)], F(1, 10))
    assert is_pseudo_orbit(T, [F(1, 4), F(6, 10)], F(11, 100))
    with pytest.raises(ValueError):
        Chain(base_system(T), (F(0), F(1, 2)), F(1, 10))


def test_find_chain_is_valid_and_minimal():
    c = find_chain(T, F(0), F(1), F(1, 10), 6, GRID)
    assert c is not None and c.length == 6
    assert max(c.errors()) < F(1, 10)
    assert find_chain(I, F(0), F(1), F(1, 10), 3, GRID) is None
    assert find_chain(I, F(0), F(1), F(1, 10), 30, GRID) is not None


def brute_signature(sys, nodes, delta, horizon):
    """Chain lengths between node pairs by exhaustive path expansion."""
    N = len(nodes)
    edge = [[sys.distance(sys.step(u, 0), v) < delta for v in nodes] for u in nodes]
    out = {}
    for a in range(N):
        cur = {a}
        for t in range(1, horizon + 1):
            cur = {v for u in cur for v in range(N) if edge[u][v]}
            for b in cur:
                out.setdefault((a, b), set()).add(t)
    return out


def test_reachability_against_brute_force():
    nodes = [F(i, 12) for i in range(13)]
    sys = base_system(T)
    sig = reachability_signatures(LayeredGraph(sys, nodes, F(1, 12)), 10)
    ref = brute_signature(sys, nodes, F(1, 12), 10)
    for a in range(13):
        for b in range(13):
            got = {t + 1 for t in range(10) if int(sig[a, b]) >> t & 1}
            assert got == ref.get((a, b), set())


def test_tent_chain_mixing():
    rep = check_chain_property(T, "mixing", F(1, 10), GRID, 64)
    assert rep.verdict == "verified-at-resolution"
    assert rep.mixing_N is not None and rep.mixing_N <= 10
    for c in rep.sample_chains:
        assert max(c.errors()) < F(1, 10)


def test_identity_is_chain_mixing_but_rotation_by_half_is_not():
    rep = check_chain_property(I, "mixing", F(1, 10), GRID, 64)
    assert rep.verdict == "verified-at-resolution"
    circle = [F(i, 4) for i in range(4)]
    R = build_rotation_sequence([F(1, 2)])
    rep = check_chain_property(R, "mixing", F(1, 10), circle, 16, exhaustive=True)
    assert rep.verdict == "counterexample"
    rep = check_chain_property(R, "transitive", F(1, 10), circle, 16, exhaustive=True)
    assert rep.verdict == "counterexample"


def test_weak_mixing_order_validation():
    rep = check_chain_property(T, "weak_mixing", F(1, 10), GRID[::2], 16, order=3)
    assert rep.verdict == "verified-at-resolution"
    with pytest.raises(ValueError):
        check_chain_property(T, "weak_mixing", F(1, 10), GRID, 16, order=1)
    with pytest.raises(ValueError):
        check_chain_property(T, "mixing", F(1, 10), GRID, 65)


@settings(max_examples=40)
@given(st.lists(st.integers(0, 40), min_size=2, max_size=6), st.integers(1, 5))
def test_singleton_lifts_preserve_errors(idx, k):
    xs = [F(i, 40) for i in idx]
    errs = step_errors(T, xs)
    delta = max(errs) + F(1, 1000)
    c = Chain(base_system(T), tuple(xs), delta)
    for kind in ("hyper", "fuzzy"):
        lc = singleton_chain(c, kind)
        assert lc.errors() == errs


@settings(max_examples=30)
@given(st.lists(st.lists(st.integers(0, 20), min_size=3, max_size=3), min_size=1, max_size=3))
def test_fuzzy_lift_error_bound(levels):
    chains = []
    for idx in levels:
        xs = [F(i, 20) for i in idx]
        chains.append(Chain(base_system(T), tuple(xs), F(2)))
    th = [F(j + 1, len(chains)) for j in range(len(chains))]
    u = lift_chain_to_fuzzy(chains, th)
    assert max(u.errors()) <= max(max(c.errors()) for c in chains)
    for s in u.states:
        assert all(b.issubset(a) for a, b in zip(s.levels, s.levels[1:]))


def test_identity_is_chain_transitive():
    rep = check_chain_property(I, "transitive", F(1, 10), GRID, 64)
    assert rep.verdict == "verified-at-resolution"


def test_construction_is_chain_transitive():
    from ndstk.spaces import build_transitive_zero_entropy

    c = build_transitive_zero_entropy(4)
    rep = check_chain_property(c.nds, "transitive", F(1, 10), GRID, 64)
    assert rep.verdict == "verified-at-resolution"


def test_chain_examples():
    c = find_chain(T, F(0), F(0), F(1, 100), 1, [F(0)])
    assert c.states == (F(0), F(0))
    c = find_chain(T, F(1, 2), F(0), F(1, 100), 2, [F(1, 2), F(1), F(0)])
    assert c.states == (F(1, 2), F(1), F(0))
