"""Exact interference probability via interval geometry, plus an independent
Monte Carlo estimator.

The number of distinct pilots hit in the window is a piecewise-constant
function of the first-pulse arrival t_f, so the probability that at least m
pilots are hit is computed exactly: overlay the per-pilot hit sets, sweep
their endpoints, and sum the widths of the segments whose hit count reaches
m. No quadrature and no discretization error is involved.

The Monte Carlo path never touches the interval machinery: it draws t_f and
tests pulse arithmetic directly, which makes it a genuinely independent
cross-check of the geometric result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analytic import (
    NONZERO_TOL,
    bounds_for,
    exact_special_case,
    predict_nonzero_detail,
)
from .intervals import MERGE_TOL, Interval, IntervalSet, from_merged_arrays, merge_raw_bounds
from .scenario import ScenarioConfig, ScenarioError

MC_ALGORITHM = "PCG64"  # numpy default_rng bit generator, 64-bit seedable
_DEFAULT_CHUNK = 200_000


def _hit_bounds(config: ScenarioConfig, l: int) -> tuple[np.ndarray, np.ndarray]:
    """Merged (lo, hi) arrays of pilot l's hit set, clipped to the t_f domain.

    Enumerates every pulse index j >= 0 whose hit window can intersect
    [0, min(t_rep, t_csi)]; the enumeration is self-truncating.
    """
    domain_hi = min(config.t_rep, config.t_csi)
    width = config.hit_width
    all_lo: list[np.ndarray] = []
    all_hi: list[np.ndarray] = []
    for delay in (0.0, *config.echo_delays):
        anchor = l * config.t_pil - delay
        j_hi = math.floor((anchor + config.t_ofdm) / config.t_rep + 1e-9)
        j_lo = max(0, math.ceil((anchor - config.t_pulse - domain_hi) / config.t_rep - 1e-9))
        if j_hi < j_lo:
            continue
        js = np.arange(j_lo, j_hi + 1, dtype=float)
        lo = anchor - config.t_pulse - js * config.t_rep
        hi = lo + width
        np.clip(lo, 0.0, None, out=lo)
        np.clip(hi, None, domain_hi, out=hi)
        keep = hi - lo >= MERGE_TOL
        if np.any(keep):
            all_lo.append(lo[keep])
            all_hi.append(hi[keep])
    if not all_lo:
        return np.empty(0), np.empty(0)
    return merge_raw_bounds(np.concatenate(all_lo), np.concatenate(all_hi))


def pilot_hit_set(config: ScenarioConfig, l: int) -> IntervalSet:
    """First-pulse arrivals t_f for which pilot l is hit by any pulse of any
    propagation path, restricted to [0, min(t_rep, t_csi)]."""
    if not 0 <= l < config.n_p:
        raise ScenarioError(f"pilot index must be in [0, {config.n_p - 1}], got {l}")
    return from_merged_arrays(*_hit_bounds(config, l))


class CoverageProfile:
    """Partition of the t_f domain into segments of constant hit count.

    ``segments`` is a tuple of (interval, count) pairs that tile
    [0, min(t_rep, t_csi)]; ``count`` is the number of distinct pilots hit
    for any t_f inside the segment (a pilot reached by several pulses or
    echoes counts once).
    """

    __slots__ = ("domain", "segments", "_boundaries", "_counts")

    def __init__(self, domain: Interval, boundaries: np.ndarray, counts: np.ndarray):
        self.domain = domain
        self._boundaries = boundaries
        self._counts = counts
        self.segments: tuple[tuple[Interval, int], ...] = tuple(
            (Interval(float(boundaries[i]), float(boundaries[i + 1])), int(counts[i]))
            for i in range(counts.size)
        )

    @property
    def max_count(self) -> int:
        return int(self._counts.max()) if self._counts.size else 0

    def tail_measure(self, m: int) -> float:
        """Total width of segments whose hit count is at least m."""
        widths = np.diff(self._boundaries)
        return float(widths[self._counts >= m].sum())


def coverage_profile(config: ScenarioConfig) -> CoverageProfile:
    """Overlay all per-pilot hit sets into a hit-count partition of the
    t_f domain via an endpoint sweep."""
    domain_hi = min(config.t_rep, config.t_csi)
    per_pilot = [_hit_bounds(config, l) for l in range(config.n_p)]

    endpoints = [np.array([0.0, domain_hi])]
    for los, his in per_pilot:
        endpoints.append(los)
        endpoints.append(his)
    points = np.sort(np.concatenate(endpoints))
    # Cluster endpoints closer than the merge tolerance into one boundary.
    keep = np.empty(points.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(points) > MERGE_TOL
    boundaries = points[keep]
    if boundaries.size < 2:
        boundaries = np.array([0.0, domain_hi])

    mids = 0.5 * (boundaries[:-1] + boundaries[1:])
    counts = np.zeros(mids.size, dtype=np.int64)
    for los, his in per_pilot:
        if los.size == 0:
            continue
        flat = np.empty(2 * los.size)
        flat[0::2] = los
        flat[1::2] = his
        counts += np.searchsorted(flat, mids, side="right") % 2

    # Canonical form: merge adjacent segments with equal counts.
    if counts.size:
        change = np.empty(counts.size, dtype=bool)
        change[0] = True
        change[1:] = counts[1:] != counts[:-1]
        starts = np.flatnonzero(change)
        merged_bounds = np.append(boundaries[starts], boundaries[-1])
        merged_counts = counts[starts]
    else:
        merged_bounds = boundaries
        merged_counts = counts
    return CoverageProfile(Interval(0.0, domain_hi), merged_bounds, merged_counts)


@dataclass(frozen=True)
class ProbabilityReport:
    """Exact probability of >= m pilot hits with its analytical companions.

    closed_form/closed_form_case are populated when a special case applies
    and then agree with p_exact to 1e-9. ``boundary`` marks repetition
    intervals within 1e-12 of a feasible-family endpoint, where the
    zero/non-zero prediction is a knife edge.
    """

    m: int
    p_exact: float
    lower_bound: float
    upper_bound: float
    closed_form: Optional[float]
    closed_form_case: Optional[str]
    predicted_nonzero: bool
    boundary: bool


def prob_at_least(
    config: ScenarioConfig, m: int, profile: Optional[CoverageProfile] = None
) -> ProbabilityReport:
    """Exact P[at least m pilots hit], marginalizing t_f ~ U[0, t_rep].

    The t_f density is 1/t_rep with the integration domain capped at
    min(t_rep, t_csi): when t_rep exceeds the window, arrivals beyond t_csi
    cannot hit anything and contribute zero.
    """
    if not 1 <= m <= config.n_p:
        raise ScenarioError(f"m must be in [1, n_p={config.n_p}], got {m}")
    if profile is None:
        profile = coverage_profile(config)
    p_exact = min(1.0, max(0.0, profile.tail_measure(m) / config.t_rep))
    lower, upper = bounds_for(config, m)
    special = exact_special_case(config, m)
    closed_form, case = special if special is not None else (None, None)
    predicted, boundary = predict_nonzero_detail(config, m, p_exact=p_exact)
    return ProbabilityReport(
        m=m,
        p_exact=p_exact,
        lower_bound=lower,
        upper_bound=upper,
        closed_form=closed_form,
        closed_form_case=case,
        predicted_nonzero=predicted,
        boundary=boundary,
    )


def tail_probabilities(config: ScenarioConfig) -> list[float]:
    """Exact P[at least m hits] for every m = 1..n_p from one overlay."""
    profile = coverage_profile(config)
    return [
        min(1.0, max(0.0, profile.tail_measure(m) / config.t_rep))
        for m in range(1, config.n_p + 1)
    ]


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Binomial estimate of P[at least m pilots hit].

    Deterministic: identical (config, m, n_samples, seed) reproduces the
    estimate bit for bit. ``algorithm`` records the PRNG for provenance.
    """

    m: int
    estimate: float
    stderr: float
    n_samples: int
    seed: int
    algorithm: str = MC_ALGORITHM


def sample_hit_counts(
    config: ScenarioConfig,
    n_samples: int,
    seed: int,
    chunk_size: int = _DEFAULT_CHUNK,
) -> np.ndarray:
    """Distinct-pilot hit counts for n_samples uniform draws of t_f.

    Each draw simulates the pulse train directly: pilot l is hit via the
    path delayed by d when some integer j >= 0 puts the pulse start
    t_f + j*t_rep + d inside [l*t_pil - t_pulse, l*t_pil + t_ofdm]. Draws
    with t_f beyond t_csi (possible when t_rep > t_csi) hit nothing.
    """
    if n_samples < 1:
        raise ScenarioError(f"n_samples must be >= 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    l_starts = np.arange(config.n_p) * config.t_pil  # (n_p,)
    counts = np.empty(n_samples, dtype=np.int32)
    done = 0
    while done < n_samples:
        n = min(chunk_size, n_samples - done)
        t_f = rng.uniform(0.0, config.t_rep, size=n)[:, None]  # (n, 1)
        hit = np.zeros((n, config.n_p), dtype=bool)
        for delay in (0.0, *config.echo_delays):
            j_hi = (l_starts + config.t_ofdm - delay - t_f) / config.t_rep
            j_lo = (l_starts - config.t_pulse - delay - t_f) / config.t_rep
            hit |= np.floor(j_hi) >= np.maximum(np.ceil(j_lo), 0.0)
        counts[done : done + n] = hit.sum(axis=1)
        done += n
    return counts


def prob_monte_carlo(
    config: ScenarioConfig,
    m: int,
    n_samples: int,
    seed: int,
    chunk_size: int = _DEFAULT_CHUNK,
) -> MonteCarloEstimate:
    """Monte Carlo estimate of P[at least m pilots hit] with binomial stderr."""
    if not 1 <= m <= config.n_p:
        raise ScenarioError(f"m must be in [1, n_p={config.n_p}], got {m}")
    counts = sample_hit_counts(config, n_samples, seed, chunk_size=chunk_size)
    estimate = float(np.count_nonzero(counts >= m)) / n_samples
    stderr = math.sqrt(estimate * (1.0 - estimate) / n_samples)
    return MonteCarloEstimate(
        m=m, estimate=estimate, stderr=stderr, n_samples=n_samples, seed=seed
    )
