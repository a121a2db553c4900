from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import compacts, fuzzy_sets, pl_maps, rationals
from ndstk.fuzzy import PCFuzzy, chi, d_endograph, d_infty, level_set, refine, zadeh_extend
from ndstk.hyperspace import FiniteCompact, hausdorff, induced_image


def alphas():
    return st.integers(1, 16).map(lambda k: F(k, 16))


@given(fuzzy_sets(), alphas())
def test_membership_and_level_sets_agree(u, a):
    C = level_set(u, a)
    for x in u.support.points:
        assert (u.membership(x) >= a) == (x in C.points)


@given(pl_maps(), fuzzy_sets())
def test_zadeh_extension_matches_sup_definition(f, u):
    v = zadeh_extend(f, u)
    for y in {f(x) for x in u.support.points}:
        want = max(u.membership(x) for x in u.support.points if f(x) == y)
        assert v.membership(y) == want


@given(pl_maps(), fuzzy_sets(), alphas())
def test_zadeh_level_set_identity(f, u, a):
    assert level_set(zadeh_extend(f, u), a) == induced_image(f, level_set(u, a))


@given(fuzzy_sets(), fuzzy_sets(), fuzzy_sets())
def test_d_infty_metric_axioms(u, v, w):
    duv = d_infty(u, v)
    assert duv >= 0 and duv == d_infty(v, u)
    assert (duv == 0) == (u == v)
    assert d_infty(u, w) <= duv + d_infty(v, w)


@given(fuzzy_sets(), st.lists(st.integers(1, 15), max_size=3))
def test_refinement_is_invisible(u, extra):
    v = refine(u, list(u.thresholds) + [F(k, 16) for k in extra])
    assert v == u and d_infty(u, v) == 0


@given(compacts(), compacts())
def test_d_infty_on_characteristic_functions_is_hausdorff(A, B):
    assert d_infty(chi(A), chi(B)) == hausdorff(A, B)


@given(rationals(), rationals())
def test_endograph_singleton_law(z, w):
    d = d_endograph(chi(FiniteCompact((z,))), chi(FiniteCompact((w,))), 1000)
    assert abs(d - min(abs(z - w), 1)) <= F(2, 1000)


def test_endograph_bounded_by_d_infty():
    u = PCFuzzy((F(1, 2), F(1)), (FiniteCompact((F(0), F(1, 2))), FiniteCompact((F(1, 2),))))
    v = chi(FiniteCompact((F(1, 4),)))
    assert d_endograph(u, v, 200) <= d_infty(u, v)


def test_invalid_fuzzy_sets_rejected():
    with pytest.raises(ValueError):
        PCFuzzy((F(1, 2),), (FiniteCompact((F(0),)),))
    with pytest.raises(ValueError):
        PCFuzzy((F(1, 2), F(1)), (FiniteCompact((F(0),)), FiniteCompact((F(1),))))


def test_worked_examples():
    from ndstk.fuzzy import refine_common
    from ndstk.spaces import identity, tent

    half = F(1, 2)
    assert chi(FiniteCompact.of(half)).levels == (FiniteCompact.of(half),)
    assert chi(FiniteCompact.of(0, 1)).thresholds == (F(1),)
    assert level_set(chi(FiniteCompact.of(F(3, 10))), F(7, 10)) == FiniteCompact.of(F(3, 10))
    u = PCFuzzy((half, F(1)), (FiniteCompact.of(0, half), FiniteCompact.of(half)))
    assert level_set(u, half) == FiniteCompact.of(0, half)
    assert level_set(u, F(3, 4)) == FiniteCompact.of(half)
    assert zadeh_extend(tent(), chi(FiniteCompact.of(F(1, 4)))) == chi(FiniteCompact.of(half))
    assert zadeh_extend(identity(), u) == u
    assert zadeh_extend(tent(), u).levels == (FiniteCompact.of(0, 1), FiniteCompact.of(1))
    a, b = refine_common(chi(FiniteCompact.of(0)), u)
    assert a.thresholds == b.thresholds == (half, F(1))
    assert a.levels == (FiniteCompact.of(0), FiniteCompact.of(0))
    assert d_infty(chi(FiniteCompact.of(0)), chi(FiniteCompact.of(1))) == 1
    v = PCFuzzy((half, F(1)), (FiniteCompact.of(0, 1), FiniteCompact.of(0)))
    assert d_infty(chi(FiniteCompact.of(0)), v) == 1
    assert d_endograph(u, u, 1000) == 0
    d = d_endograph(chi(FiniteCompact.of(0)), chi(FiniteCompact.of(F(3, 10))), 1000)
    assert abs(d - F(3, 10)) <= F(1, 1000)


@given(compacts())
def test_zadeh_of_characteristic_function(K):
    from ndstk.spaces import tent

    assert zadeh_extend(tent(), chi(K)) == chi(induced_image(tent(), K))
