"""Exact algebra on finite unions of real intervals (one dimension, seconds).

Every probability in this package reduces to the Lebesgue measure of such a
union, so the representation is kept canonical: sorted, pairwise disjoint,
with gaps strictly larger than MERGE_TOL. Endpoints are plain doubles; open
and closed endpoints are not distinguished because isolated points carry no
measure. Boundary membership queries are therefore tolerance-dependent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

# Pulse and symbol durations handled here are >= 1e-6 s, so a 1e-12 s endpoint
# tolerance leaves six orders of magnitude of headroom.
MERGE_TOL = 1e-12

IntervalLike = Union["Interval", Sequence[float]]


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval [lo, hi] with finite endpoints and lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(
                f"interval endpoints must be finite, got [{self.lo}, {self.hi}]"
            )
        if self.lo > self.hi:
            raise ValueError(f"interval requires lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = MERGE_TOL) -> bool:
        return self.lo - tol <= x <= self.hi + tol


def _merge_bounds(los: np.ndarray, his: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort raw (lo, hi) pairs and merge everything closer than MERGE_TOL.

    Returns parallel arrays of merged bounds; degenerate leftovers narrower
    than MERGE_TOL are dropped.
    """
    if los.size == 0:
        return los, his
    order = np.argsort(los, kind="stable")
    los = los[order]
    his = his[order]
    running_hi = np.maximum.accumulate(his)
    new_group = np.empty(los.size, dtype=bool)
    new_group[0] = True
    new_group[1:] = los[1:] > running_hi[:-1] + MERGE_TOL
    starts = np.flatnonzero(new_group)
    merged_lo = los[starts]
    merged_hi = np.maximum.reduceat(his, starts)
    keep = merged_hi - merged_lo >= MERGE_TOL
    return merged_lo[keep], merged_hi[keep]


@dataclass(frozen=True)
class IntervalSet:
    """Normalized disjoint union of intervals. Build with :func:`normalize`.

    Immutable and safe to share between workers; every operation returns a
    new normalized set.
    """

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "intervals", tuple(self.intervals))
        prev_hi = -math.inf
        for iv in self.intervals:
            if not isinstance(iv, Interval):
                raise TypeError(f"expected Interval, got {type(iv).__name__}")
            if iv.lo <= prev_hi + MERGE_TOL:
                raise ValueError(
                    "interval set is not normalized (overlapping or adjacent "
                    "members); build it with normalize()"
                )
            prev_hi = iv.hi

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def bounds(self) -> np.ndarray:
        """Flat [lo0, hi0, lo1, hi1, ...] endpoint array."""
        out = np.empty(2 * len(self.intervals))
        for i, iv in enumerate(self.intervals):
            out[2 * i] = iv.lo
            out[2 * i + 1] = iv.hi
        return out

    def measure(self) -> float:
        return sum(iv.width for iv in self.intervals)

    def contains(self, x: float, tol: float = MERGE_TOL) -> bool:
        if not self.intervals:
            return False
        flat = self.bounds()
        idx = int(np.searchsorted(flat, x, side="right"))
        if idx % 2 == 1:
            return True
        # Closed-endpoint semantics: accept points within tol of the set.
        return bool(np.min(np.abs(flat - x)) <= tol)

    def contains_points(self, xs: np.ndarray) -> np.ndarray:
        """Strict-interior membership for an array of points (no tolerance)."""
        if not self.intervals:
            return np.zeros(np.shape(xs), dtype=bool)
        idx = np.searchsorted(self.bounds(), xs, side="right")
        return idx % 2 == 1

    def nearest_endpoint_distance(self, x: float) -> float:
        if not self.intervals:
            return math.inf
        return float(np.min(np.abs(self.bounds() - x)))

    def shift(self, delta: float) -> "IntervalSet":
        """Translate every interval by delta; measure is preserved."""
        return IntervalSet(tuple(Interval(iv.lo + delta, iv.hi + delta) for iv in self))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out: list[Interval] = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i].lo, b[j].lo)
            hi = min(a[i].hi, b[j].hi)
            if hi - lo >= MERGE_TOL:
                out.append(Interval(lo, hi))
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return normalize(self.intervals + other.intervals)

    def clip(self, window: Interval) -> "IntervalSet":
        """Restrict to window; never increases measure."""
        return self.intersect(IntervalSet((window,)))

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        out: list[tuple[float, float]] = []
        for iv in self.intervals:
            cursor = iv.lo
            for ov in other.intervals:
                if ov.hi <= cursor:
                    continue
                if ov.lo >= iv.hi:
                    break
                if ov.lo > cursor:
                    out.append((cursor, ov.lo))
                cursor = max(cursor, ov.hi)
                if cursor >= iv.hi:
                    break
            if cursor < iv.hi:
                out.append((cursor, iv.hi))
        return normalize(out)

    def complement_within(self, window: Interval) -> "IntervalSet":
        """Gaps of this set inside window."""
        return IntervalSet((window,)).difference(self)


EMPTY = IntervalSet(())


def _as_bounds_arrays(raw: Iterable[IntervalLike]) -> tuple[np.ndarray, np.ndarray]:
    los: list[float] = []
    his: list[float] = []
    for item in raw:
        if isinstance(item, Interval):
            lo, hi = item.lo, item.hi
        else:
            lo, hi = float(item[0]), float(item[1])
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"interval requires lo <= hi, got [{lo}, {hi}]")
        los.append(lo)
        his.append(hi)
    return np.asarray(los, dtype=float), np.asarray(his, dtype=float)


def normalize(raw: Iterable[IntervalLike]) -> IntervalSet:
    """Build a normalized IntervalSet from raw intervals or (lo, hi) pairs.

    Overlapping and near-adjacent (gap <= MERGE_TOL) inputs are merged;
    isolated degenerate inputs are dropped. Idempotent. Raises ValueError on
    inverted or non-finite endpoints.
    """
    los, his = _as_bounds_arrays(raw)
    return from_merged_arrays(*_merge_bounds(los, his))


def from_merged_arrays(los: np.ndarray, his: np.ndarray) -> IntervalSet:
    """Wrap already merged/sorted bound arrays (see :func:`_merge_bounds`)."""
    return IntervalSet(tuple(Interval(float(lo), float(hi)) for lo, hi in zip(los, his)))


def merge_raw_bounds(los: np.ndarray, his: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Public array-level normalization for hot paths that avoid objects."""
    return _merge_bounds(np.asarray(los, dtype=float), np.asarray(his, dtype=float))
