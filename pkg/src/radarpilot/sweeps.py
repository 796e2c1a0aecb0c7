"""Sweep experiments and the randomized validation harness, with a frozen
CSV schema so that golden files stay stable across platforms.

Grids are offset by half a step from their nominal anchors by default, so
sweep points stay clear of the measure-zero boundaries of the feasible
family; exact pilot-spacing multiples are covered by dedicated points that
the figure presets append explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from .analytic import NONZERO_TOL, exact_special_case
from .engine import (
    CoverageProfile,
    ProbabilityReport,
    coverage_profile,
    prob_at_least,
    sample_hit_counts,
)
from .scenario import ScenarioConfig, ScenarioError

SWEEP_AXES = ("t_rep", "t_csi", "m")

# Frozen CSV schema: column order and `.9e` float formatting are part of the
# external interface. Booleans appear as 0/1, absent values as empty fields.
CSV_COLUMNS = (
    "axis",
    "axis_value",
    "t_ofdm",
    "t_pil",
    "n_p",
    "t_rep",
    "m",
    "p_exact",
    "lower_bound",
    "upper_bound",
    "closed_form_case",
    "closed_form",
    "predicted_nonzero",
    "boundary",
    "mc_estimate",
    "mc_stderr",
)


@dataclass(frozen=True)
class SweepRow:
    axis: str
    axis_value: float
    t_ofdm: float
    t_pil: float
    n_p: int
    t_rep: float
    m: int
    p_exact: float
    lower_bound: float
    upper_bound: float
    closed_form_case: Optional[str]
    closed_form: Optional[float]
    predicted_nonzero: bool
    boundary: bool
    mc_estimate: Optional[float] = None
    mc_stderr: Optional[float] = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.9e}"
    return str(value)


def row_to_csv(row: SweepRow) -> str:
    return ",".join(_fmt(getattr(row, col)) for col in CSV_COLUMNS)


def write_csv(rows: Iterable[SweepRow], fh: TextIO, timestamp: bool = True) -> None:
    if timestamp:
        fh.write(f"# generated {datetime.now(timezone.utc).isoformat()}\n")
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        fh.write(row_to_csv(row) + "\n")


def grid_points(start: float, stop: float, count: int, offset: bool = True) -> np.ndarray:
    """count points in (start, stop], offset half a step from the anchors."""
    if not start < stop:
        raise ScenarioError(f"grid needs start < stop, got {start} >= {stop}")
    if count < 1:
        raise ScenarioError(f"grid needs count >= 1, got {count}")
    step = (stop - start) / count
    shift = 0.5 if offset else 1.0
    return start + (np.arange(count) + shift) * step


@dataclass(frozen=True)
class SweepSpec:
    """One sweep experiment: vary ``axis`` over a grid, evaluate every m in
    ``m_list`` at each point, optionally with a Monte Carlo cross-check."""

    base: ScenarioConfig
    axis: str
    start: float
    stop: float
    count: int = 100
    m_list: tuple[int, ...] = (1,)
    with_mc: bool = False
    mc_samples: int = 100_000
    seed: int = 0
    offset_grid: bool = True
    extra_points: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ScenarioError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.start < self.stop:
            raise ScenarioError(f"sweep needs start < stop, got {self.start} >= {self.stop}")
        if self.count < 1:
            raise ScenarioError(f"sweep needs count >= 1, got {self.count}")
        if self.mc_samples < 1:
            raise ScenarioError(f"mc_samples must be >= 1, got {self.mc_samples}")
        if self.axis != "m":
            for m in self.m_list:
                if not 1 <= m:
                    raise ScenarioError(f"m values must be >= 1, got {m}")

    def grid(self) -> np.ndarray:
        if self.axis == "m":
            return np.arange(int(self.start), int(self.stop) + 1, dtype=float)
        pts = grid_points(self.start, self.stop, self.count, offset=self.offset_grid)
        if self.extra_points:
            pts = np.unique(np.concatenate([pts, np.asarray(self.extra_points, float)]))
            pts = pts[(pts > self.start) & (pts <= self.stop)]
        return pts


def _config_for_axis(spec: SweepSpec, value: float) -> ScenarioConfig:
    if spec.axis == "t_rep":
        return spec.base.with_updates(t_rep=float(value))
    if spec.axis == "t_csi":
        ratio = value / spec.base.t_pil
        n_p = round(ratio)
        if n_p < 1 or abs(ratio - n_p) > 1e-9 * n_p:
            raise ScenarioError(
                f"t_csi axis value {value} is not an integer multiple of "
                f"t_pil={spec.base.t_pil}"
            )
        return spec.base.with_updates(n_p=int(n_p))
    return spec.base  # axis == "m": the grid value is m itself


def _mc_seed(seed: int, index: int) -> int:
    # Stable per-point derivation; independent of evaluation order.
    return int(np.random.SeedSequence((seed, index)).generate_state(1, np.uint64)[0])


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the sweep; rows are ordered by grid index then by m and are
    deterministic given the spec (including MC seeds)."""
    rows: list[SweepRow] = []
    for idx, value in enumerate(spec.grid()):
        config = _config_for_axis(spec, value)
        m_values = (int(value),) if spec.axis == "m" else spec.m_list
        profile = coverage_profile(config)
        mc_counts = None
        if spec.with_mc:
            mc_counts = sample_hit_counts(config, spec.mc_samples, _mc_seed(spec.seed, idx))
        for m in m_values:
            if not 1 <= m <= config.n_p:
                raise ScenarioError(f"m={m} out of range [1, n_p={config.n_p}]")
            report = prob_at_least(config, m, profile=profile)
            mc_est = mc_err = None
            if mc_counts is not None:
                mc_est = float(np.count_nonzero(mc_counts >= m)) / spec.mc_samples
                mc_err = math.sqrt(mc_est * (1.0 - mc_est) / spec.mc_samples)
            rows.append(
                SweepRow(
                    axis=spec.axis,
                    axis_value=float(value),
                    t_ofdm=config.t_ofdm,
                    t_pil=config.t_pil,
                    n_p=config.n_p,
                    t_rep=config.t_rep,
                    m=m,
                    p_exact=report.p_exact,
                    lower_bound=report.lower_bound,
                    upper_bound=report.upper_bound,
                    closed_form_case=report.closed_form_case,
                    closed_form=report.closed_form,
                    predicted_nonzero=report.predicted_nonzero,
                    boundary=report.boundary,
                    mc_estimate=mc_est,
                    mc_stderr=mc_err,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# Figure presets

FIG_T_OFDM = 71.43e-6


def preset_fig3a(points: int = 240, with_mc: bool = False,
                 mc_samples: int = 100_000, seed: int = 0) -> list[SweepRow]:
    """Single-hit probability and its bounds vs t_rep for a 5 ms window with
    1 and 5 pilots. Exact pilot-spacing multiples are appended to the grid so
    the lower-bound touch points appear as rows."""
    t_csi = 5e-3
    rows: list[SweepRow] = []
    for n_p in (1, 5):
        t_pil = t_csi / n_p
        touch = tuple(k * t_pil for k in range(1, n_p + 1))
        base = ScenarioConfig(t_ofdm=FIG_T_OFDM, t_pil=t_pil, n_p=n_p, t_rep=1e-3)
        spec = SweepSpec(
            base=base, axis="t_rep", start=1e-4, stop=10e-3, count=points,
            m_list=(1,), with_mc=with_mc, mc_samples=mc_samples, seed=seed,
            extra_points=touch,
        )
        rows.extend(run_sweep(spec))
    return rows


def preset_fig3b(points: int = 300, with_mc: bool = False,
                 mc_samples: int = 100_000, seed: int = 0) -> list[SweepRow]:
    """Multi-hit probabilities P[>= m] for m = 1..5 over a 5-pilot window;
    non-zero only on narrow neighborhoods of rational fractions of t_pil."""
    base = ScenarioConfig(t_ofdm=FIG_T_OFDM, t_pil=1e-3, n_p=5, t_rep=1e-3)
    spec = SweepSpec(
        base=base, axis="t_rep", start=FIG_T_OFDM, stop=6e-3, count=points,
        m_list=(1, 2, 3, 4, 5), with_mc=with_mc, mc_samples=mc_samples, seed=seed,
    )
    return run_sweep(spec)


FIG4_T_CSI_MS = (4, 8, 16, 32, 64)


def preset_fig4(points: int = 200, with_mc: bool = False,
                mc_samples: int = 100_000, seed: int = 0) -> list[SweepRow]:
    """Window-averaged feedback accuracy P[>= n_p/2] vs t_rep in [2, 3] ms at
    fixed 2 ms pilot spacing, for window lengths 4..64 ms. Doubling the
    window shrinks the support of the non-zero region."""
    t_pil = 2e-3
    rows: list[SweepRow] = []
    for t_csi_ms in FIG4_T_CSI_MS:
        n_p = round(t_csi_ms * 1e-3 / t_pil)
        m = (n_p + 1) // 2
        base = ScenarioConfig(t_ofdm=FIG_T_OFDM, t_pil=t_pil, n_p=n_p, t_rep=2.5e-3)
        spec = SweepSpec(
            base=base, axis="t_rep", start=2e-3, stop=3e-3, count=points,
            m_list=(m,), with_mc=with_mc, mc_samples=mc_samples, seed=seed,
        )
        rows.extend(run_sweep(spec))
    return rows


PRESETS = {"fig3a": preset_fig3a, "fig3b": preset_fig3b, "fig4": preset_fig4}


# ---------------------------------------------------------------------------
# Randomized validation

VALIDATION_CHECKS = ("sandwich", "closed_form", "nonzero_prediction", "mc", "saturated")


@dataclass(frozen=True)
class ValidationCheck:
    config_index: int
    check: str
    m: int
    t_ofdm: float
    t_pil: float
    n_p: int
    t_rep: float
    t_pulse: float
    n_echoes: int
    value: float
    reference: float
    margin: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    n_configs: int
    n_checks: int
    n_failed: int
    worst_sandwich_margin: float
    worst_closed_form_error: float
    worst_mc_sigma: float
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.n_failed == 0


def draw_random_config(rng: np.random.Generator) -> ScenarioConfig:
    """One random valid scenario. Ranges: t_ofdm log-uniform in
    [20 us, 200 us]; t_pil/t_ofdm uniform in [1, 30]; n_p in 1..6; t_rep
    drawn from the saturated (10%), in-window (65%) and sparse (25%)
    regimes; 20% of draws get a broadened pulse, 25% get 1-2 echoes."""
    t_ofdm = float(10 ** rng.uniform(-4.7, -3.7))
    t_pil = float(t_ofdm * rng.uniform(1.0, 30.0))
    n_p = int(rng.integers(1, 7))
    t_csi = n_p * t_pil
    regime = rng.uniform()
    if regime < 0.10:
        t_rep = float(t_ofdm * rng.uniform(0.3, 1.0))
    elif regime < 0.75:
        lo = min(t_ofdm * 1.05, t_csi * 0.999)
        t_rep = float(rng.uniform(lo, t_csi))
    else:
        t_rep = float(t_csi * rng.uniform(1.0, 3.0))
    t_pulse = float(t_ofdm * rng.uniform(0.01, 0.5)) if rng.uniform() < 0.2 else 0.0
    echoes: tuple[float, ...] = ()
    if rng.uniform() < 0.25:
        n_echo = int(rng.integers(1, 3))
        gaps = rng.uniform(0.05 * t_pil, t_csi, size=n_echo)
        echoes = tuple(np.cumsum(gaps))
    return ScenarioConfig(
        t_ofdm=t_ofdm, t_pil=t_pil, n_p=n_p, t_rep=t_rep,
        t_pulse=t_pulse, echo_delays=echoes,
    )


def _validation_m_values(n_p: int) -> tuple[int, ...]:
    return tuple(sorted({1, min(2, n_p), (n_p + 1) // 2}))


def run_validation(
    n_random_configs: int, mc_samples: int, seed: int
) -> tuple[ValidationReport, list[ValidationCheck]]:
    """Randomized self-check of the whole stack.

    Per config and per m in {1, 2, ceil(n_p/2)}: the analytical bounds must
    sandwich the exact probability (the widened duty-cycle lower bound is
    skipped when t_pulse > 0, where it is only a steady-state value); any
    closed form must match to 1e-9; the zero/non-zero prediction must agree
    with the engine away from family boundaries; and the Monte Carlo
    estimate must fall within 4 standard errors. Saturated draws must give
    probability exactly 1. A fixed grid of pilot-spacing multiples is
    appended to exercise the duty-cycle touch points.
    """
    if n_random_configs < 1 or mc_samples < 1:
        raise ScenarioError("n_random_configs and mc_samples must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    checks: list[ValidationCheck] = []

    configs: list[tuple[int, ScenarioConfig, int]] = []
    for i in range(n_random_configs):
        config = draw_random_config(rng)
        mc_seed = int(rng.integers(0, 2**63 - 1))
        configs.append((i, config, mc_seed))
    # Deterministic extras: duty-cycle touch points k*t_pil, k = 1..n_p.
    touch_base = ScenarioConfig(t_ofdm=FIG_T_OFDM, t_pil=1e-3, n_p=5, t_rep=1e-3)
    for k in range(1, touch_base.n_p + 1):
        config = touch_base.with_updates(t_rep=k * touch_base.t_pil)
        mc_seed = int(rng.integers(0, 2**63 - 1))
        configs.append((n_random_configs + k - 1, config, mc_seed))

    worst_sandwich = math.inf
    worst_closed = 0.0
    worst_sigma = 0.0

    def add(check: ValidationCheck) -> None:
        checks.append(check)

    for idx, config, mc_seed in configs:
        profile = coverage_profile(config)
        counts = sample_hit_counts(config, mc_samples, mc_seed)
        base = dict(
            config_index=idx, t_ofdm=config.t_ofdm, t_pil=config.t_pil,
            n_p=config.n_p, t_rep=config.t_rep, t_pulse=config.t_pulse,
            n_echoes=len(config.echo_delays),
        )
        for m in _validation_m_values(config.n_p):
            report = prob_at_least(config, m, profile=profile)
            p = report.p_exact

            if config.t_pulse > 0:
                lower_margin = math.inf  # widened lower bound not certified
            else:
                lower_margin = p - report.lower_bound
            margin = min(lower_margin, report.upper_bound - p)
            worst_sandwich = min(worst_sandwich, margin)
            add(ValidationCheck(check="sandwich", m=m, value=p,
                                reference=report.lower_bound, margin=margin,
                                passed=margin >= -1e-9, **base))

            if report.closed_form is not None:
                err = abs(report.closed_form - p)
                worst_closed = max(worst_closed, err)
                add(ValidationCheck(check="closed_form", m=m, value=p,
                                    reference=report.closed_form, margin=err,
                                    passed=err <= 1e-9, **base))

            if m >= 2 and not report.boundary:
                agree = report.predicted_nonzero == (p > NONZERO_TOL)
                add(ValidationCheck(check="nonzero_prediction", m=m, value=p,
                                    reference=float(report.predicted_nonzero),
                                    margin=0.0 if agree else 1.0, passed=agree,
                                    **base))

            est = float(np.count_nonzero(counts >= m)) / mc_samples
            stderr = math.sqrt(est * (1.0 - est) / mc_samples)
            diff = abs(p - est)
            sigma = diff / stderr if stderr > 0 else (0.0 if diff == 0 else math.inf)
            worst_sigma = max(worst_sigma, 0.0 if math.isinf(sigma) else sigma)
            add(ValidationCheck(check="mc", m=m, value=est, reference=p,
                                margin=sigma, passed=diff <= 4.0 * stderr, **base))

            if config.is_saturated:
                add(ValidationCheck(check="saturated", m=m, value=p, reference=1.0,
                                    margin=abs(p - 1.0), passed=abs(p - 1.0) <= 1e-12,
                                    **base))

    failures = tuple(
        f"config {c.config_index} {c.check} m={c.m}: value={c.value:.6e} "
        f"reference={c.reference:.6e} margin={c.margin:.3e}"
        for c in checks if not c.passed
    )
    report = ValidationReport(
        n_configs=len(configs),
        n_checks=len(checks),
        n_failed=len(failures),
        worst_sandwich_margin=worst_sandwich,
        worst_closed_form_error=worst_closed,
        worst_mc_sigma=worst_sigma,
        failures=failures,
    )
    return report, checks


VALIDATION_CSV_COLUMNS = (
    "config_index", "check", "m", "t_ofdm", "t_pil", "n_p", "t_rep",
    "t_pulse", "n_echoes", "value", "reference", "margin", "passed",
)


def write_validation_csv(checks: Iterable[ValidationCheck], fh: TextIO,
                         timestamp: bool = True) -> None:
    if timestamp:
        fh.write(f"# generated {datetime.now(timezone.utc).isoformat()}\n")
    fh.write(",".join(VALIDATION_CSV_COLUMNS) + "\n")
    for c in checks:
        fh.write(",".join(_fmt(getattr(c, col)) for col in VALIDATION_CSV_COLUMNS) + "\n")
