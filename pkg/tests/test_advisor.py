import math

import numpy as np
import pytest

from radarpilot.advisor import blind_region, recommend_dmrs, scsi_accuracy
from radarpilot.engine import prob_at_least
from radarpilot.scenario import ScenarioConfig, ScenarioError

T_OFDM = 71.43e-6


def test_recommend_dmrs_reference_values():
    rec = recommend_dmrs(t_rep=5e-3, t_coh=2e-3, t_ofdm=T_OFDM)
    assert rec.k_opt == 3
    assert rec.t_dmrs == pytest.approx(5e-3 / 3, abs=1e-12)
    assert rec.p_interference == pytest.approx(3 * T_OFDM / 5e-3, abs=1e-12)
    assert rec.p_interference == pytest.approx(0.042858, abs=1e-9)
    assert rec.coherence_ok


def test_recommend_dmrs_best_case_single_period():
    rec = recommend_dmrs(t_rep=2e-3, t_coh=2e-3, t_ofdm=T_OFDM)
    assert rec.k_opt == 1
    assert rec.t_dmrs == pytest.approx(2e-3)


def test_recommend_dmrs_quarter_spacing():
    rec = recommend_dmrs(t_rep=2e-3, t_coh=0.5e-3, t_ofdm=T_OFDM)
    assert rec.k_opt == 4
    assert rec.t_dmrs == pytest.approx(0.5e-3)
    assert rec.coherence_ok


def test_recommend_dmrs_rejects_bad_input():
    with pytest.raises(ScenarioError):
        recommend_dmrs(t_rep=-1.0, t_coh=1e-3, t_ofdm=T_OFDM)
    with pytest.raises(ScenarioError, match="every symbol is hit"):
        recommend_dmrs(t_rep=50e-6, t_coh=1e-3, t_ofdm=T_OFDM)
    with pytest.raises(ScenarioError, match="below one OFDM symbol"):
        recommend_dmrs(t_rep=1e-3, t_coh=40e-6, t_ofdm=T_OFDM)


def test_recommendation_satisfies_coherence_constraint():
    rng = np.random.default_rng(23)
    for _ in range(300):
        t_coh = T_OFDM * rng.uniform(3, 40)
        t_rep = t_coh * rng.uniform(1.0, 12.0)
        rec = recommend_dmrs(t_rep, t_coh, T_OFDM)
        assert rec.t_dmrs <= t_coh * (1 + 1e-12)
        assert rec.k_opt == math.ceil(t_rep / t_coh)


def test_recommendation_probability_matches_engine():
    """Pinning the pilot grid to the recommended spacing makes the engine
    reproduce the promised interference probability."""
    rng = np.random.default_rng(29)
    for _ in range(20):
        t_coh = T_OFDM * rng.uniform(3, 40)
        t_rep = t_coh * rng.uniform(1.0, 10.0)
        rec = recommend_dmrs(t_rep, t_coh, T_OFDM)
        cfg = ScenarioConfig(
            t_ofdm=T_OFDM, t_pil=rec.t_dmrs, n_p=4 * rec.k_opt, t_rep=t_rep
        )
        assert prob_at_least(cfg, 1).p_exact == pytest.approx(
            rec.p_interference, abs=1e-9
        )


def test_scsi_accuracy_avg_reference_window():
    cfg = ScenarioConfig(t_ofdm=T_OFDM, t_pil=2e-3, n_p=2, t_rep=2e-3)
    acc = scsi_accuracy(cfg, "avg")
    assert acc.threshold_m == 1
    assert acc.p_accurate == pytest.approx(T_OFDM / 2e-3, abs=1e-9)
    assert acc.p_accurate == pytest.approx(0.0357150, abs=1e-6)


def test_scsi_min_locked_to_duty_cycle_at_multiples():
    for k in (1, 2, 3):
        cfg = ScenarioConfig(t_ofdm=T_OFDM, t_pil=1e-3, n_p=5, t_rep=k * 1e-3)
        acc = scsi_accuracy(cfg, "min")
        assert acc.threshold_m == 1
        assert acc.p_accurate == pytest.approx(T_OFDM / 1e-3, abs=1e-9)


def test_scsi_avg_zero_outside_feasible_family():
    cfg = ScenarioConfig(t_ofdm=T_OFDM, t_pil=1e-3, n_p=5, t_rep=1.5e-3)
    acc = scsi_accuracy(cfg, "avg")
    assert acc.threshold_m == 3
    assert acc.p_accurate == 0.0


def test_scsi_scheme_validated():
    cfg = ScenarioConfig(t_ofdm=T_OFDM, t_pil=1e-3, n_p=5, t_rep=1.5e-3)
    with pytest.raises(ScenarioError, match="scheme"):
        scsi_accuracy(cfg, "median")


def test_blind_region_two_pilots_empty():
    region = blind_region(2e-3, T_OFDM, 2, 2e-3, 3e-3)
    assert region.is_empty


def test_blind_region_large_window_nearly_everything():
    n_p, m = 32, 16
    w = T_OFDM / (m - 1)
    region = blind_region(2e-3, T_OFDM, n_p, 2e-3, 3e-3)
    # Non-blind support is only the tiny neighborhood [2e-3, 2e-3 + w].
    assert region.measure() == pytest.approx(1e-3 - w, abs=1e-9)
    assert not region.contains(2e-3 + 0.5 * w)
    assert region.contains(2.5e-3)
    assert region.contains(3e-3 - 1e-6)  # stride 3 cannot reach 16 pilots


def test_blind_region_saturated_range_empty():
    assert blind_region(1e-3, T_OFDM, 4, 1e-6, T_OFDM).is_empty


def test_blind_region_monotone_in_window_length():
    t_pil = 2e-3
    measures = []
    for n_p in (2, 4, 8, 16, 32):
        measures.append(blind_region(t_pil, T_OFDM, n_p, 2e-3, 3e-3).measure())
    assert all(b >= a - 1e-12 for a, b in zip(measures, measures[1:]))
    assert measures[-1] > measures[1] > 0
