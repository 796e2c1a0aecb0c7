"""Analytical companions to the exact engine: probability bounds, closed-form
special cases, and the set of repetition intervals that can interfere with at
least m pilots.

All formulas here are rational functions of the waveform parameters; the
exact engine (``radarpilot.engine``) provides the reference values they are
checked against.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .intervals import EMPTY, Interval, IntervalSet, normalize
from .scenario import ScenarioConfig, ScenarioError

# Probabilities below this are treated as identically zero. This sits far
# above endpoint rounding (1e-12 s on >= 1e-6 s scales divided by t_rep).
NONZERO_TOL = 1e-12

# A repetition interval closer than this to an endpoint of the feasible
# family is a knife-edge case: the multi-pilot coincidence there has measure
# zero and the zero/non-zero verdict is not numerically meaningful.
BOUNDARY_TOL = 1e-12


def bounds_m1(config: ScenarioConfig) -> tuple[float, float]:
    """Lower and upper bound on the probability that at least one pilot is hit.

    For t_rep <= t_csi the probability can never fall below the pilot duty
    cycle t_ofdm/t_pil, and never exceeds the per-period pilot time
    n_p*t_ofdm/t_rep. For t_rep >= t_csi at most one pulse lands in the
    window and n_p*t_ofdm/t_rep is the exact value, so both bounds collapse
    onto it.

    Pulse broadening widens every hit window, so t_ofdm is replaced by
    t_ofdm + t_pulse in the duty-cycle bound and in the uppers. Each of the
    n_paths propagation paths contributes its own pulse train, which scales
    the upper bound only. Note the widened duty-cycle lower bound is the
    steady-state value; in a finite window it can exceed the exact
    probability by up to t_pulse/t_rep at repetition/window resonances.
    """
    width = config.t_ofdm + config.t_pulse
    upper = min(1.0, config.n_paths * config.n_p * width / config.t_rep)
    if config.t_rep <= config.t_csi:
        lower = min(1.0, width / config.t_pil)
    else:
        lower = min(1.0, config.n_p * config.t_ofdm / config.t_rep)
    return lower, upper


def bounds_m(config: ScenarioConfig, m: int) -> tuple[float, float]:
    """Bounds on the probability that at least m >= 2 pilots are hit.

    Hitting m pilots needs a hit at least every t_csi/m seconds, which caps
    the probability at n_paths*n_p*(t_ofdm+t_pulse)/(m*t_rep); the lower
    bound is 0 (attained on a large set of repetition intervals).
    """
    if not 2 <= m <= config.n_p:
        raise ScenarioError(f"m must be in [2, n_p={config.n_p}], got {m}")
    width = config.t_ofdm + config.t_pulse
    upper = min(1.0, config.n_paths * config.n_p * width / (m * config.t_rep))
    return 0.0, upper


def bounds_for(config: ScenarioConfig, m: int) -> tuple[float, float]:
    if m == 1:
        return bounds_m1(config)
    return bounds_m(config, m)


def exact_special_case(config: ScenarioConfig, m: int) -> Optional[tuple[float, str]]:
    """Closed-form probability when one applies, as (value, case).

    Cases:
      "saturated":  t_rep <= t_ofdm, every symbol is hit, probability 1 for
                    every m.
      "theorem1":   m = 1 and t_rep is an integer multiple k*t_pil with
                    k <= n_p; the pulse train then locks onto a fixed subset
                    of pilot phases and the probability equals the duty
                    cycle t_ofdm/t_pil (the lower bound is achieved).
      "corollary2": m = 1 and t_rep >= t_csi; at most one pulse falls in the
                    window, giving exactly n_p*t_ofdm/t_rep.

    The latter two hold for the baseline pulse model only, so they are not
    reported when pulse broadening or echoes are configured. Multiplicity is
    tested with relative tolerance 1e-9.
    """
    if config.is_saturated:
        return 1.0, "saturated"
    if m != 1:
        return None
    if config.t_pulse > 0 or config.echo_delays:
        return None
    ratio = config.t_rep / config.t_pil
    k = round(ratio)
    if 1 <= k <= config.n_p and abs(ratio - k) <= 1e-9 * k:
        return config.t_ofdm / config.t_pil, "theorem1"
    if config.t_rep >= config.t_csi:
        return config.n_p * config.t_ofdm / config.t_rep, "corollary2"
    return None


def _k_max(m: int, n_p: int) -> int:
    """Largest pilot stride k such that m stride-k pilots fit in the window.

    Hitting m pilots with a pulse train locked to stride k needs the pilot
    indices r, r+k, ..., r+(m-1)k to all exist, so (m-1)*k <= n_p - 1. The
    resulting floor bound is strict: a stride one larger reaches at most m-1
    existing pilots and its neighborhoods carry zero probability.
    """
    return (n_p - 1) // (m - 1)


@dataclass(frozen=True)
class FeasibleSet:
    """Repetition intervals for which at least m of n_p pilots can be hit.

    The family is the union over pilot strides k = 1..(n_p-1)//(m-1) and
    integer divisors q >= 1 of the open neighborhoods
        ( (k*t_pil - t_ofdm/(m-1)) / q , (k*t_pil + t_ofdm/(m-1)) / q ),
    intersected with the query range [trep_min, trep_max]. Members below
    t_ofdm are dropped: that regime is saturated and always interferes.

    The family characterizes the non-zero support exactly in the sparse
    regime; within roughly (m+1)/(m-1) symbol durations of the saturated
    edge, wrapped pilot phases can cluster without a stride resonance and
    the support is larger (use :func:`predict_nonzero` for the exact test).

    q_max is the divisor depth actually enumerated; every omitted q > q_max
    contributes only below max(trep_min, t_ofdm), so the truncation is
    lossless on the query range.
    """

    m: int
    n_p: int
    t_pil: float
    t_ofdm: float
    trep_min: float
    trep_max: float
    q_max: int
    trep_intervals: IntervalSet

    def contains(self, t_rep: float, tol: float = 0.0) -> bool:
        return self.trep_intervals.contains(t_rep, tol=tol)

    def measure(self) -> float:
        return self.trep_intervals.measure()

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n_p": self.n_p,
            "t_pil": self.t_pil,
            "t_ofdm": self.t_ofdm,
            "q_max": self.q_max,
            "intervals": [[iv.lo, iv.hi] for iv in self.trep_intervals],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def feasible_set(
    m: int,
    n_p: int,
    t_pil: float,
    t_ofdm: float,
    trep_min: float,
    trep_max: float,
) -> FeasibleSet:
    """Construct the feasible repetition-interval set over a query range."""
    if m < 2:
        raise ScenarioError(f"feasible set is defined for m >= 2, got m={m}")
    if n_p <= 1:
        raise ScenarioError(f"feasible set needs n_p > 1, got n_p={n_p}")
    if m > n_p:
        raise ScenarioError(f"m must be <= n_p={n_p}, got {m}")
    if t_ofdm <= 0 or t_pil < t_ofdm:
        raise ScenarioError(
            f"need 0 < t_ofdm <= t_pil, got t_ofdm={t_ofdm}, t_pil={t_pil}"
        )
    if not trep_min < trep_max:
        raise ScenarioError(
            f"empty query range: trep_min={trep_min} >= trep_max={trep_max}"
        )

    clip_lo = max(trep_min, t_ofdm)
    if trep_max <= clip_lo:
        # Entire range sits in the saturated regime; the family is irrelevant.
        return FeasibleSet(m, n_p, t_pil, t_ofdm, trep_min, trep_max, 0, EMPTY)

    half_width = t_ofdm / (m - 1)
    k_max = _k_max(m, n_p)
    top = k_max * t_pil + half_width
    q_max = int(top / clip_lo) + 1  # first q with every interval below clip_lo

    raw: list[tuple[float, float]] = []
    for k in range(1, k_max + 1):
        center = k * t_pil
        for q in range(1, q_max + 1):
            lo = (center - half_width) / q
            hi = (center + half_width) / q
            lo = max(lo, clip_lo)
            hi = min(hi, trep_max)
            if hi > lo:
                raw.append((lo, hi))
    return FeasibleSet(m, n_p, t_pil, t_ofdm, trep_min, trep_max, q_max, normalize(raw))


def feasible_endpoint_distance(
    t_rep: float, m: int, n_p: int, t_pil: float, t_ofdm: float
) -> float:
    """Distance from t_rep to the nearest endpoint of the feasible family."""
    half_width = t_ofdm / (m - 1)
    best = math.inf
    for k in range(1, _k_max(m, n_p) + 1):
        for edge in (k * t_pil - half_width, k * t_pil + half_width):
            if edge <= 0:
                continue
            # Endpoints are edge/q; candidate divisors bracket edge/t_rep.
            q_star = edge / t_rep
            for q in (math.floor(q_star), math.ceil(q_star)):
                if q >= 1:
                    best = min(best, abs(t_rep - edge / q))
    return best


def _min_cluster_span(offsets: np.ndarray, m: int, period: float) -> float:
    """Length of the tightest circular window containing m of the offsets."""
    b = np.sort(offsets)
    ext = np.concatenate([b, b + period])
    return float(np.min(ext[m - 1 : m - 1 + b.size] - ext[: b.size]))


def predict_nonzero_detail(
    config: ScenarioConfig, m: int, p_exact: Optional[float] = None
) -> tuple[bool, bool]:
    """Predict whether the probability of >= m pilot hits is non-zero.

    Returns (verdict, boundary). For the baseline pulse model the verdict is
    exact: fold the pilot start times onto one pulse period and ask whether
    m of the phase offsets l*t_pil mod t_rep fit strictly inside a circular
    window of length t_ofdm; only then do m hit windows share an arrival
    interval of positive measure. Stride-resonance neighborhoods (the
    feasible family) are the sparse-regime solutions of this test; near the
    saturated edge it additionally captures wrap-around clusters.

    ``boundary`` is True when the critical cluster span is within
    BOUNDARY_TOL of t_ofdm: there the coincidence has measure zero and the
    verdict is a knife edge that should not be checked strictly.

    Pulse broadening and echoes deform the geometry, so those configs fall
    back on the exact engine.
    """
    if not 1 <= m <= config.n_p:
        raise ScenarioError(f"m must be in [1, n_p={config.n_p}], got {m}")
    if config.is_saturated:
        return True, False
    if m == 1:
        # A single hit has positive probability for every finite t_rep.
        return True, False
    if config.t_pulse > 0 or config.echo_delays:
        if p_exact is None:
            from .engine import coverage_profile

            p_exact = coverage_profile(config).tail_measure(m) / config.t_rep
        return p_exact > NONZERO_TOL, False
    if config.t_rep > config.t_csi:
        # At most one pulse falls in the window; it cannot hit two pilots.
        return False, False
    offsets = np.mod(np.arange(config.n_p) * config.t_pil, config.t_rep)
    span = _min_cluster_span(offsets, m, config.t_rep)
    boundary = abs(span - config.t_ofdm) <= BOUNDARY_TOL
    return span < config.t_ofdm, boundary


def predict_nonzero(config: ScenarioConfig, m: int) -> bool:
    """Boolean form of :func:`predict_nonzero_detail`."""
    return predict_nonzero_detail(config, m)[0]
