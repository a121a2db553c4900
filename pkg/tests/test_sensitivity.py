from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from ndstk.fuzzy import PCFuzzy, chi, d_infty
from ndstk.hyperspace import FiniteCompact, hausdorff
from ndstk.sensitivity import (FamilyPredicate, TimeSet, check_multi_F_sensitive, family_member, fuzzy_samples, halton,
                               induced_containments, point_samples, sensitivity_times, set_samples)
from ndstk.spaces import autonomous, build_rotation_sequence, identity, tent
from ndstk.systems import fuzzy_system, hyper_system

T = autonomous(tent())
I = autonomous(identity())
FAMS = [FamilyPredicate("infinite", 3), FamilyPredicate("cofinite", 2), FamilyPredicate("syndetic", 3),
        FamilyPredicate("full")]


@pytest.mark.parametrize("fam", FAMS, ids=str)
def test_families_are_hereditary_upwards(fam):
    h = 12
    for mask in range(1 << h):
        S = TimeSet(h, tuple(t + 1 for t in range(h) if mask >> t & 1))
        if not family_member(fam, S):
            continue
        for t in range(1, h + 1):
            assert family_member(fam, TimeSet(h, S.members + (t,)))


def test_family_edges():
    h = 6
    assert family_member(FamilyPredicate("syndetic", 2), TimeSet(h, (2, 4, 6)))
    assert not family_member(FamilyPredicate("syndetic", 2), TimeSet(h, (3, 5)))
    assert not family_member(FamilyPredicate("syndetic", 2), TimeSet(h, (2, 4)))
    assert family_member(FamilyPredicate("cofinite", 0), TimeSet(h, range(1, 7)))
    with pytest.raises(ValueError):
        FamilyPredicate("thick", 1)
    with pytest.raises(ValueError):
        TimeSet(3, (4,))


def test_samplers_stay_in_ball():
    r = F(1, 20)
    assert all(0 < halton(j, 3) < 1 for j in range(1, 50))
    for y in point_samples(F(1, 100), r, 30, "interval"):
        assert abs(y - F(1, 100)) < r and 0 <= y <= 1
    K = FiniteCompact((F(1, 10), F(1, 2)))
    for S in set_samples(K, r, 20):
        assert hausdorff(S, K) < r
    u = PCFuzzy((F(1, 2), F(1)), (FiniteCompact((F(1, 5), F(3, 5))), FiniteCompact((F(1, 5),))))
    assert all(d_infty(v, u) < r for v in fuzzy_samples(u, r, 20))
    assert all(d_infty(v, chi(K)) < r for v in fuzzy_samples(chi(K), r, 20))


def test_tent_is_sensitive_and_identity_is_not():
    s = sensitivity_times(T, F(1, 3), F(1, 100), F(1, 4), 20)
    assert set(range(8, 21)) <= set(s.members)
    assert len(sensitivity_times(I, F(1, 3), F(1, 100), F(1, 4), 20)) == 0
    R = build_rotation_sequence([F(1, 7)])
    assert len(sensitivity_times(R, F(1, 3), F(1, 10), F(1, 4), 20)) == 0


def test_more_samples_never_remove_times():
    a = sensitivity_times(T, F(2, 7), F(1, 200), F(1, 3), 20, samples=4)
    b = sensitivity_times(T, F(2, 7), F(1, 200), F(1, 3), 20, samples=32)
    assert a <= b


def test_random_extras_are_seeded():
    a = sensitivity_times(T, F(2, 7), F(1, 200), F(1, 3), 15, samples=2, random_extra=5, seed=4)
    b = sensitivity_times(T, F(2, 7), F(1, 200), F(1, 3), 15, samples=2, random_extra=5, seed=4)
    assert a == b


@settings(max_examples=25)
@given(st.integers(0, 60), st.integers(1, 20))
def test_singleton_agreement(x, r):
    x0, eps = F(x, 60), F(r, 200)
    ys = point_samples(x0, eps, 8, "interval")
    base = sensitivity_times(T, x0, eps, F(1, 4), 15, samples=ys)
    hyp = sensitivity_times(hyper_system(T, 1), FiniteCompact((x0,)), eps, F(1, 4), 15,
                            samples=[FiniteCompact((y,)) for y in ys])
    fz = sensitivity_times(fuzzy_system(T, 1), chi(FiniteCompact((x0,))), eps, F(1, 4), 15,
                           samples=[chi(FiniteCompact((y,))) for y in ys])
    assert base == hyp == fz


def test_multi_point_intersection():
    ok, inter = check_multi_F_sensitive(T, [F(1, 3), F(1, 7)], F(1, 100), F(1, 4), FamilyPredicate("cofinite", 8), 20)
    assert ok and len(inter) >= 12
    ok, _ = check_multi_F_sensitive(I, [F(1, 3)], F(1, 100), F(1, 4), FamilyPredicate("infinite", 1), 20)
    assert not ok


def test_induced_containments():
    K = FiniteCompact((F(1, 5), F(2, 3)))
    u = PCFuzzy((F(1, 3), F(1)), (FiniteCompact((F(1, 10), F(1, 2), F(4, 5))), FiniteCompact((F(1, 2),))))
    rep = induced_containments(T, K, u, F(1, 20), F(1, 4), 20, samples=8)
    assert rep.holds
    d = rep.to_dict()
    assert d["containment_i"] and d["containment_ii"]
    assert set(rep.fuzzy_chi.members) <= set(rep.hyper_K.members)


def test_tent_at_fixed_point_separates_eventually():
    s = sensitivity_times(T, F(0), F(1, 10), F(2, 5), 20)
    assert len(s) > 0
    assert set(range(6, 21)) <= set(s.members)


def test_constant_tail_collapses_separation():
    from ndstk.spaces import Constant, NdsSpec, constant

    nds = NdsSpec((tent(), tent(), tent()), Constant(constant(F(1, 2))))
    s = sensitivity_times(nds, F(1, 3), F(1, 10), F(1, 4), 20)
    assert s.members and max(s.members) <= 3


def test_three_tent_points_infinite_family():
    pts = [F(1, 3), F(1, 7), F(2, 9)]
    ok, inter = check_multi_F_sensitive(T, pts, F(1, 20), F(1, 4), FamilyPredicate("infinite", 20), 40)
    assert ok
    for p in pts:
        assert inter <= sensitivity_times(T, p, F(1, 20), F(1, 4), 40)


def test_family_predicate_examples():
    h = 20
    assert family_member(FamilyPredicate("cofinite", 1), TimeSet(h, [n for n in range(1, 21) if n != 3]))
    assert family_member(FamilyPredicate("syndetic", 2), TimeSet(h, range(2, 21, 2)))
    assert not family_member(FamilyPredicate("infinite", 10), TimeSet(h, range(1, 10)))


def test_cofinite_budgets_add_under_intersection():
    h = 10
    masks = range(0, 1 << h, 37)
    for a in masks:
        for b in masks:
            S = TimeSet(h, [t + 1 for t in range(h) if a >> t & 1])
            R = TimeSet(h, [t + 1 for t in range(h) if b >> t & 1])
            ma, mb = h - len(S), h - len(R)
            assert family_member(FamilyPredicate("cofinite", ma + mb), S & R)


def test_singleton_containments_coincide():
    K = FiniteCompact((F(1, 3),))
    rep = induced_containments(T, K, chi(K), F(1, 20), F(1, 4), 15, samples=8)
    assert rep.holds
    assert rep.base == rep.hyper_K


def test_identity_containments_are_vacuous():
    K = FiniteCompact((F(0), F(1, 2)))
    u = PCFuzzy((F(1, 2), F(1)), (FiniteCompact((F(0), F(1, 2))), FiniteCompact((F(1, 2),))))
    rep = induced_containments(I, K, u, F(1, 20), F(1, 4), 15, samples=8)
    assert rep.holds
    assert not (rep.base.members or rep.hyper_K.members or rep.fuzzy_chi.members or rep.fuzzy_u.members)
