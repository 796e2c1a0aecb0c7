import json
import warnings

import pytest

from radarpilot.intervals import Interval
from radarpilot.scenario import (
    PilotGridWarning,
    ScenarioConfig,
    ScenarioError,
    config_from_dict,
    config_from_json,
    hit_window,
    pilot_interval,
)


def make(**kw):
    defaults = dict(t_ofdm=71.43e-6, t_pil=1e-3, n_p=5, t_rep=2e-3)
    defaults.update(kw)
    return ScenarioConfig(**defaults)


def test_derived_fields_reference_scenario():
    cfg = make()
    assert cfg.t_csi == pytest.approx(5e-3)
    assert cfg.n_r == 3  # ceil(5/2)


def test_derived_fields_fractional_period():
    cfg = ScenarioConfig(t_ofdm=0.5, t_pil=1.0, n_p=2, t_rep=0.8)
    assert cfg.t_csi == pytest.approx(2.0)
    assert cfg.n_r == 3  # ceil(2/0.8)


def test_rejects_pilot_spacing_below_symbol():
    with pytest.raises(ScenarioError, match="t_pil"):
        ScenarioConfig(t_ofdm=1.0, t_pil=0.5, n_p=2, t_rep=1.0)


@pytest.mark.parametrize(
    "kw,field",
    [
        (dict(t_ofdm=0.0), "t_ofdm"),
        (dict(t_rep=-1.0), "t_rep"),
        (dict(n_p=0), "n_p"),
        (dict(t_pulse=-1e-6), "t_pulse"),
        (dict(echo_delays=(2e-3, 1e-3)), "echo_delays"),
        (dict(echo_delays=(-1e-3,)), "echo"),
    ],
)
def test_field_validation_names_constraint(kw, field):
    with pytest.raises(ScenarioError, match=field):
        make(**kw)


def test_saturated_t_rep_accepted():
    cfg = make(t_rep=50e-6)  # below the symbol duration
    assert cfg.is_saturated


def test_pilot_interval_examples():
    cfg = make()
    assert pilot_interval(cfg, 0) == Interval(0.0, 71.43e-6)
    iv = pilot_interval(cfg, 4)
    assert iv.lo == pytest.approx(4e-3)
    assert iv.hi == pytest.approx(4.07143e-3)
    coarse = ScenarioConfig(t_ofdm=0.5, t_pil=1.0, n_p=2, t_rep=0.8)
    assert pilot_interval(coarse, 1) == Interval(1.0, 1.5)
    with pytest.raises(ScenarioError, match="pilot index"):
        pilot_interval(cfg, 5)


def test_hit_window_hand_solved():
    cfg = ScenarioConfig(t_ofdm=0.5, t_pil=1.0, n_p=2, t_rep=0.8)
    win = hit_window(cfg, 1, 1)
    assert win.lo == pytest.approx(0.2)
    assert win.hi == pytest.approx(0.7)
    assert hit_window(cfg, 0, 0) == Interval(-0.0, 0.5)


def test_hit_window_widened_by_pulse():
    cfg = ScenarioConfig(t_ofdm=0.5, t_pil=1.0, n_p=2, t_rep=0.8, t_pulse=0.1)
    win = hit_window(cfg, 1, 1)
    assert win.lo == pytest.approx(0.1)
    assert win.hi == pytest.approx(0.7)


def test_hit_window_invariants():
    cfg = make(t_pulse=5e-6, echo_delays=(1e-4,))
    for l in range(cfg.n_p):
        for j in range(4):
            for d in (0.0, *cfg.echo_delays):
                assert hit_window(cfg, l, j, d).width == pytest.approx(cfg.hit_width)
    w0 = hit_window(cfg, 2, 0)
    w3 = hit_window(cfg, 2, 3)
    assert w3.lo == pytest.approx(w0.lo - 3 * cfg.t_rep)
    assert pilot_interval(cfg, 3).lo - pilot_interval(cfg, 2).lo == pytest.approx(cfg.t_pil)


def test_json_round_trip():
    cfg = make(t_pulse=1e-6, echo_delays=(1e-4, 3e-4))
    doc = cfg.to_json()
    again = config_from_json(doc)
    assert again == cfg


def test_json_rejects_unknown_keys():
    doc = json.loads(make().to_json())
    doc["bandwidth"] = 20e6
    with pytest.raises(ScenarioError, match="unknown config keys"):
        config_from_dict(doc)


def test_json_missing_keys():
    with pytest.raises(ScenarioError, match="missing config keys"):
        config_from_dict({"t_ofdm": 1e-4})


def test_warns_on_misaligned_pilot_grid():
    with pytest.warns(PilotGridWarning):
        ScenarioConfig(t_ofdm=1e-4, t_pil=1.37e-4, n_p=2, t_rep=1e-3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ScenarioConfig(t_ofdm=1e-4, t_pil=14e-4, n_p=2, t_rep=1e-3)
        make()  # the reference grid is treated as aligned
