import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radarpilot.intervals import (
    EMPTY,
    MERGE_TOL,
    Interval,
    IntervalSet,
    normalize,
)


def grid_membership(raw, xs):
    """Brute-force oracle: point-in-any-raw-interval scan."""
    return np.array([any(lo <= x <= hi for lo, hi in raw) for x in xs])


def test_normalize_merges_overlaps():
    assert normalize([(1, 2), (1.5, 3)]) == normalize([(1, 3)])
    assert normalize([(1, 2), (1.5, 3)]).intervals == (Interval(1, 3),)


def test_normalize_empty():
    s = normalize([])
    assert s.is_empty
    assert s.measure() == 0.0


def test_normalize_agrees_with_grid_scan():
    raw = [(0.0, 0.5), (0.2, 0.7)]
    s = normalize(raw)
    assert s.intervals == (Interval(0.0, 0.7),)
    xs = np.arange(-0.2, 1.0, 1e-4)
    assert np.array_equal(s.contains_points(xs), grid_membership(raw, xs))


def test_normalize_rejects_bad_input():
    with pytest.raises(ValueError):
        normalize([(2, 1)])
    with pytest.raises(ValueError):
        normalize([(0, math.nan)])
    with pytest.raises(ValueError):
        normalize([(0, math.inf)])


def test_normalize_idempotent():
    s = normalize([(0, 1), (0.5, 2), (3, 4)])
    assert normalize(s.intervals) == s


def test_measure():
    assert normalize([(0, 0.7)]).measure() == pytest.approx(0.7)
    assert normalize([(0, 0.5), (1, 1.5)]).measure() == pytest.approx(1.0)
    assert normalize([(0, 0.5), (0.2, 0.7)]).measure() == pytest.approx(0.7)


def test_intersect_examples():
    a = normalize([(0, 0.5)])
    b = normalize([(0.2, 0.7)])
    assert a.intersect(b).intervals == (Interval(0.2, 0.5),)
    assert normalize([(0, 1)]).intersect(EMPTY).is_empty
    full = normalize([(0, 1)])
    assert full.intersect(full) == full


def test_union_clip_shift():
    a = normalize([(0, 1)])
    b = normalize([(2, 3)])
    assert a.union(b).measure() == pytest.approx(2.0)
    assert a.clip(Interval(0.25, 0.5)).intervals == (Interval(0.25, 0.5),)
    shifted = a.shift(5.0)
    assert shifted.intervals == (Interval(5.0, 6.0),)
    assert shifted.measure() == a.measure()


def test_difference_and_complement():
    a = normalize([(0, 10)])
    b = normalize([(2, 3), (5, 7)])
    d = a.difference(b)
    assert d == normalize([(0, 2), (3, 5), (7, 10)])
    assert b.complement_within(Interval(0, 10)) == d


def test_unnormalized_construction_rejected():
    with pytest.raises(ValueError):
        IntervalSet((Interval(0, 1), Interval(0.5, 2)))


def test_contains_boundary_tolerance():
    s = normalize([(0.0, 1.0)])
    assert s.contains(0.0)
    assert s.contains(1.0)
    assert s.contains(1.0 + 0.5e-12)
    assert not s.contains(1.0 + 1e-6)


finite = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False)


@st.composite
def interval_sets(draw, max_intervals=8):
    n = draw(st.integers(min_value=0, max_value=max_intervals))
    raw = []
    for _ in range(n):
        a = draw(finite)
        b = draw(finite)
        raw.append((min(a, b), max(a, b)))
    return raw


@settings(max_examples=80, deadline=None)
@given(interval_sets(), interval_sets())
def test_inclusion_exclusion(raw_a, raw_b):
    a, b = normalize(raw_a), normalize(raw_b)
    lhs = a.union(b).measure() + a.intersect(b).measure()
    rhs = a.measure() + b.measure()
    assert lhs == pytest.approx(rhs, abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(interval_sets(), finite, finite)
def test_clip_shrinks_and_shift_preserves(raw, w_lo, w_hi):
    s = normalize(raw)
    lo, hi = min(w_lo, w_hi), max(w_lo, w_hi)
    assert s.clip(Interval(lo, hi)).measure() <= s.measure() + 1e-12
    assert s.shift(7.25).measure() == pytest.approx(s.measure(), abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(interval_sets())
def test_normalize_preserves_coverage(raw):
    """Away from endpoint neighborhoods, membership in the normalized set
    matches the raw per-interval scan exactly."""
    s = normalize(raw)
    xs = np.linspace(-101, 101, 499)
    clear = np.ones(xs.size, dtype=bool)
    for lo, hi in raw:
        clear &= (np.abs(xs - lo) > 1e-6) & (np.abs(xs - hi) > 1e-6)
    expect = grid_membership(raw, xs)
    got = s.contains_points(xs)
    assert np.array_equal(got[clear], expect[clear])


def test_membership_matches_raw_scan_bulk():
    """1000 random raw sets x 1000 random points: set representation agrees
    with a direct per-interval scan."""
    rng = np.random.default_rng(20240817)
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        endpoints = rng.uniform(-10, 10, size=(n, 2))
        raw = [(min(a, b), max(a, b)) for a, b in endpoints]
        s = normalize(raw)
        xs = rng.uniform(-11, 11, size=1000)
        expect = np.zeros(xs.size, dtype=bool)
        for lo, hi in raw:
            expect |= (xs >= lo) & (xs <= hi)
        assert np.array_equal(s.contains_points(xs), expect)
