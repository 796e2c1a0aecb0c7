"""Design guidance built on the probability engine: interference-minimizing
demodulation pilot spacing, and accuracy of limited statistical-CSI feedback
for the radar interference channel.
"""
from __future__ import annotations

from dataclasses import dataclass

from .analytic import feasible_set
from .engine import prob_at_least
from .intervals import EMPTY, Interval, IntervalSet
from .scenario import ScenarioConfig, ScenarioError, snap_ceil

SCSI_SCHEMES = ("min", "avg")


@dataclass(frozen=True)
class DmrsRecommendation:
    """Interference-minimizing demodulation pilot spacing.

    Locking the spacing to t_rep / k pins the long-run hit probability at its
    local minimum k*t_ofdm/t_rep; k_opt is the smallest such divisor whose
    spacing still fits under the channel coherence time.
    """

    k_opt: int
    t_dmrs: float
    p_interference: float
    coherence_ok: bool


def recommend_dmrs(t_rep: float, t_coh: float, t_ofdm: float) -> DmrsRecommendation:
    """Choose the demodulation pilot spacing t_dmrs = t_rep / k_opt with
    k_opt = ceil(t_rep / t_coh), so that t_dmrs <= t_coh by construction."""
    if t_rep <= 0 or t_coh <= 0 or t_ofdm <= 0:
        raise ScenarioError(
            f"t_rep, t_coh, t_ofdm must all be > 0, got {t_rep}, {t_coh}, {t_ofdm}"
        )
    if t_rep <= t_ofdm:
        raise ScenarioError(
            f"t_rep={t_rep} <= t_ofdm={t_ofdm}: every symbol is hit regardless "
            "of pilot placement, no useful spacing exists"
        )
    k_opt = max(1, snap_ceil(t_rep / t_coh))
    t_dmrs = t_rep / k_opt
    if t_dmrs < t_ofdm:
        raise ScenarioError(
            f"coherence time t_coh={t_coh} forces pilot spacing "
            f"{t_dmrs} below one OFDM symbol ({t_ofdm}); no valid pilot grid"
        )
    p_interference = min(1.0, k_opt * t_ofdm / t_rep)
    return DmrsRecommendation(
        k_opt=k_opt,
        t_dmrs=t_dmrs,
        p_interference=p_interference,
        coherence_ok=t_dmrs <= t_coh * (1.0 + 1e-12),
    )


@dataclass(frozen=True)
class ScsiAccuracy:
    """Probability that a limited-feedback reduction of the per-pilot rate
    vector captures the interference channel state."""

    scheme: str
    threshold_m: int
    p_accurate: float


def scsi_accuracy(config: ScenarioConfig, scheme: str) -> ScsiAccuracy:
    """Feedback accuracy for the interference channel.

    "min" feedback reflects interference as soon as one pilot in the window
    is hit (threshold m = 1); window-averaged "avg" feedback needs at least
    half the pilots hit (m = ceil(n_p / 2)).
    """
    if scheme not in SCSI_SCHEMES:
        raise ScenarioError(f"scheme must be one of {SCSI_SCHEMES}, got {scheme!r}")
    m = 1 if scheme == "min" else (config.n_p + 1) // 2
    report = prob_at_least(config, m)
    return ScsiAccuracy(scheme=scheme, threshold_m=m, p_accurate=report.p_exact)


def blind_region(
    t_pil: float,
    t_ofdm: float,
    n_p: int,
    trep_min: float,
    trep_max: float,
) -> IntervalSet:
    """Repetition intervals in [trep_min, trep_max] where window-averaged
    feedback has zero probability of seeing the interference channel.

    This is the complement, within the range and above the saturated regime
    (t_rep <= t_ofdm), of the feasible set for m = ceil(n_p / 2) hits. For
    n_p = 2 the averaged threshold is a single hit, which has positive
    probability everywhere, so the blind region is empty.
    """
    if n_p < 2:
        raise ScenarioError(f"blind region needs n_p >= 2, got {n_p}")
    if not trep_min < trep_max:
        raise ScenarioError(
            f"empty query range: trep_min={trep_min} >= trep_max={trep_max}"
        )
    window_lo = max(trep_min, t_ofdm)
    if window_lo >= trep_max:
        return EMPTY
    m = (n_p + 1) // 2
    if m < 2:
        return EMPTY
    fs = feasible_set(m, n_p, t_pil, t_ofdm, window_lo, trep_max)
    return fs.trep_intervals.complement_within(Interval(window_lo, trep_max))
