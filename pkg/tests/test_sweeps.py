import io

import numpy as np
import pytest

from radarpilot.scenario import ScenarioConfig, ScenarioError
from radarpilot.sweeps import (
    CSV_COLUMNS,
    SweepSpec,
    grid_points,
    preset_fig3a,
    preset_fig3b,
    preset_fig4,
    run_sweep,
    run_validation,
    write_csv,
    write_validation_csv,
)

BASE = ScenarioConfig(t_ofdm=71.43e-6, t_pil=1e-3, n_p=5, t_rep=2e-3)


def test_grid_points_offset():
    pts = grid_points(0.0, 1.0, 4)
    assert np.allclose(pts, [0.125, 0.375, 0.625, 0.875])
    pts_edge = grid_points(0.0, 1.0, 4, offset=False)
    assert np.allclose(pts_edge, [0.25, 0.5, 0.75, 1.0])


def test_sweep_rows_deterministic_and_sandwiched():
    spec = SweepSpec(base=BASE, axis="t_rep", start=1e-4, stop=6e-3, count=50,
                     m_list=(1, 2), with_mc=True, mc_samples=5_000, seed=3)
    rows1 = run_sweep(spec)
    rows2 = run_sweep(spec)
    assert rows1 == rows2
    assert len(rows1) == 100
    for row in rows1:
        assert row.lower_bound - 1e-9 <= row.p_exact <= row.upper_bound + 1e-9
        assert row.mc_estimate is not None


def test_sweep_axis_t_csi():
    spec = SweepSpec(base=BASE.with_updates(t_pil=2e-3), axis="t_csi",
                     start=2e-3, stop=8e-3, count=3, m_list=(1,),
                     offset_grid=False)
    rows = run_sweep(spec)
    assert [r.n_p for r in rows] == [1, 2, 3, 4][1:] or [r.n_p for r in rows] == [2, 3, 4]


def test_sweep_axis_m():
    spec = SweepSpec(base=BASE, axis="m", start=1, stop=5)
    rows = run_sweep(spec)
    assert [r.m for r in rows] == [1, 2, 3, 4, 5]
    probs = [r.p_exact for r in rows]
    assert all(a >= b - 1e-12 for a, b in zip(probs, probs[1:]))


def test_sweep_validation_errors():
    with pytest.raises(ScenarioError, match="axis"):
        SweepSpec(base=BASE, axis="bandwidth", start=0, stop=1)
    with pytest.raises(ScenarioError, match="start < stop"):
        SweepSpec(base=BASE, axis="t_rep", start=1.0, stop=1.0)
    spec = SweepSpec(base=BASE, axis="t_rep", start=1e-4, stop=6e-3, m_list=(9,))
    with pytest.raises(ScenarioError, match="out of range"):
        run_sweep(spec)


def test_csv_schema_frozen():
    spec = SweepSpec(base=BASE, axis="t_rep", start=1e-4, stop=6e-3, count=4)
    rows = run_sweep(spec)
    buf = io.StringIO()
    write_csv(rows, buf, timestamp=False)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + len(rows)
    first = lines[1].split(",")
    assert len(first) == len(CSV_COLUMNS)
    # .9e float formatting and 0/1 booleans
    assert "e-" in first[CSV_COLUMNS.index("p_exact")] or "e+" in first[CSV_COLUMNS.index("p_exact")]
    assert first[CSV_COLUMNS.index("predicted_nonzero")] in ("0", "1")
    assert first[CSV_COLUMNS.index("mc_estimate")] == ""


def test_csv_timestamp_header_toggle():
    spec = SweepSpec(base=BASE, axis="t_rep", start=1e-4, stop=6e-3, count=2)
    rows = run_sweep(spec)
    with_ts = io.StringIO()
    write_csv(rows, with_ts, timestamp=True)
    assert with_ts.getvalue().startswith("# generated ")
    without = io.StringIO()
    write_csv(rows, without, timestamp=False)
    assert without.getvalue().startswith("axis,")


def test_preset_fig3a_touches_lower_bound_at_multiples():
    rows = preset_fig3a(points=60)
    touched = [
        r for r in rows
        if r.n_p == 5 and r.closed_form_case == "theorem1"
    ]
    ks = sorted({round(r.t_rep / r.t_pil) for r in touched})
    assert ks == [1, 2, 3, 4, 5]
    for r in touched:
        assert r.p_exact == pytest.approx(0.07143, abs=1e-9)
        assert r.p_exact == pytest.approx(r.lower_bound, abs=1e-9)


def test_preset_fig3b_nonzero_only_where_predicted():
    rows = preset_fig3b(points=80)
    assert {r.m for r in rows} == {1, 2, 3, 4, 5}
    for r in rows:
        if r.boundary:
            continue
        assert (r.p_exact > 1e-12) == r.predicted_nonzero


def test_preset_fig4_support_contracts():
    rows = preset_fig4(points=120)
    by_np = {}
    for r in rows:
        by_np.setdefault(r.n_p, []).append(r)
    assert sorted(by_np) == [2, 4, 8, 16, 32]
    support = {
        n_p: sum(1 for r in grp if r.p_exact > 1e-12) for n_p, grp in by_np.items()
    }
    assert support[4] >= support[8] >= support[16] >= support[32] > 0
    assert support[2] == 120  # single-hit threshold: never blind


def test_run_validation_small_clean():
    report, checks = run_validation(10, 20_000, seed=5)
    assert report.passed, report.failures
    assert report.n_checks == len(checks)
    assert report.worst_mc_sigma <= 4.0
    buf = io.StringIO()
    write_validation_csv(checks, buf, timestamp=False)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("config_index,check,")
    assert len(lines) == 1 + len(checks)


def test_run_validation_deterministic():
    r1, c1 = run_validation(6, 5_000, seed=9)
    r2, c2 = run_validation(6, 5_000, seed=9)
    assert c1 == c2
    assert r1 == r2
