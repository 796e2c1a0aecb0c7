"""Interference probability analysis for pulsed-radar / OFDM spectrum sharing.

Computes, exactly via one-dimensional interval geometry and approximately via
Monte Carlo, the probability that a periodic radar pulse train interferes
with at least m pilot-bearing OFDM symbols inside a finite channel-estimation
window, together with analytical bounds, the feasible set of repetition
intervals, an interference-minimizing pilot-spacing rule, and limited-CSI
feedback-accuracy diagnostics.
"""

__version__ = "0.1.0"

from .advisor import (
    DmrsRecommendation,
    ScsiAccuracy,
    blind_region,
    recommend_dmrs,
    scsi_accuracy,
)
from .analytic import (
    BOUNDARY_TOL,
    NONZERO_TOL,
    FeasibleSet,
    bounds_for,
    bounds_m,
    bounds_m1,
    exact_special_case,
    feasible_endpoint_distance,
    feasible_set,
    predict_nonzero,
    predict_nonzero_detail,
)
from .engine import (
    CoverageProfile,
    MonteCarloEstimate,
    ProbabilityReport,
    coverage_profile,
    pilot_hit_set,
    prob_at_least,
    prob_monte_carlo,
    sample_hit_counts,
    tail_probabilities,
)
from .intervals import EMPTY, MERGE_TOL, Interval, IntervalSet, normalize
from .scenario import (
    PilotGridWarning,
    ScenarioConfig,
    ScenarioError,
    config_from_dict,
    config_from_json,
    hit_window,
    pilot_interval,
)
from .sweeps import (
    CSV_COLUMNS,
    SweepRow,
    SweepSpec,
    ValidationReport,
    draw_random_config,
    preset_fig3a,
    preset_fig3b,
    preset_fig4,
    run_sweep,
    run_validation,
    write_csv,
)

__all__ = [
    "__version__",
    "BOUNDARY_TOL",
    "CSV_COLUMNS",
    "CoverageProfile",
    "DmrsRecommendation",
    "EMPTY",
    "FeasibleSet",
    "Interval",
    "IntervalSet",
    "MERGE_TOL",
    "MonteCarloEstimate",
    "NONZERO_TOL",
    "PilotGridWarning",
    "ProbabilityReport",
    "ScenarioConfig",
    "ScenarioError",
    "ScsiAccuracy",
    "SweepRow",
    "SweepSpec",
    "ValidationReport",
    "blind_region",
    "bounds_for",
    "bounds_m",
    "bounds_m1",
    "config_from_dict",
    "config_from_json",
    "coverage_profile",
    "draw_random_config",
    "exact_special_case",
    "feasible_endpoint_distance",
    "feasible_set",
    "hit_window",
    "normalize",
    "pilot_hit_set",
    "pilot_interval",
    "predict_nonzero",
    "predict_nonzero_detail",
    "preset_fig3a",
    "preset_fig3b",
    "preset_fig4",
    "prob_at_least",
    "prob_monte_carlo",
    "recommend_dmrs",
    "run_sweep",
    "run_validation",
    "sample_hit_counts",
    "scsi_accuracy",
    "tail_probabilities",
    "write_csv",
]
