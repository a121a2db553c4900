import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("NDSTK_HYPOTHESIS_PROFILE", "default"))


def rationals(den_max=64):
    """Points of [0, 1] with small denominators."""
    return st.integers(1, den_max).flatmap(lambda q: st.integers(0, q).map(lambda p: Fraction(p, q)))


@st.composite
def pl_maps(draw, max_nodes=5, den=16):
    """Continuous PL self-maps of [0, 1] with nodes on a 1/den grid."""
    from ndstk.spaces import PLMap

    k = draw(st.integers(2, max_nodes))
    xs = sorted(set(draw(st.lists(st.integers(1, den - 1), min_size=k - 2, max_size=k - 2))))
    xs = [0] + xs + [den]
    ys = draw(st.lists(st.integers(0, den), min_size=len(xs), max_size=len(xs)))
    return PLMap(tuple((Fraction(x, den), Fraction(y, den)) for x, y in zip(xs, ys)))


@st.composite
def compacts(draw, max_size=5, den=64):
    from ndstk.hyperspace import FiniteCompact

    pts = draw(st.lists(rationals(den), min_size=1, max_size=max_size))
    return FiniteCompact(tuple(pts))


@st.composite
def fuzzy_sets(draw, max_levels=3, den=64):
    from ndstk.fuzzy import PCFuzzy
    from ndstk.hyperspace import FiniteCompact

    k = draw(st.integers(1, max_levels))
    ths = sorted(set(draw(st.lists(st.integers(1, 7), min_size=k - 1, max_size=k - 1))))
    thresholds = tuple(Fraction(t, 8) for t in ths) + (Fraction(1),)
    top = draw(st.lists(rationals(den), min_size=1, max_size=3))
    levels = [FiniteCompact(tuple(top))]
    for _ in thresholds[:-1]:
        extra = draw(st.lists(rationals(den), max_size=2))
        levels.append(FiniteCompact(levels[-1].points + tuple(extra)))
    return PCFuzzy(thresholds, tuple(reversed(levels)))


@pytest.fixture
def tent_nds():
    from ndstk.spaces import autonomous, tent

    return autonomous(tent())


@pytest.fixture
def id_nds():
    from ndstk.spaces import autonomous, identity

    return autonomous(identity())


@st.composite
def degree_one_circle_maps(draw, max_nodes=5, den=16):
    """Orientation-preserving degree-one PL circle maps (non-decreasing lifts)."""
    from ndstk.spaces import CIRCLE, PLMap

    k = draw(st.integers(2, max_nodes))
    xs = sorted(set(draw(st.lists(st.integers(1, den - 1), min_size=k - 2, max_size=k - 2))))
    xs = [0] + xs + [den]
    cuts = sorted(draw(st.lists(st.integers(0, den), min_size=len(xs) - 2, max_size=len(xs) - 2)))
    y0 = draw(st.integers(0, den - 1))
    ys = [y0] + [y0 + c for c in cuts] + [y0 + den]
    return PLMap(tuple((F_(x, den), F_(y, den)) for x, y in zip(xs, ys)), CIRCLE)


def F_(p, q):
    return Fraction(p, q)


@st.composite
def arcs(draw, den=32):
    from ndstk.hyperspace import Arc

    a = draw(st.integers(0, den - 1))
    full = draw(st.booleans()) and draw(st.booleans())
    b = draw(st.integers(0, den - 1))
    return Arc(Fraction(a, den), Fraction(b, den), full)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
