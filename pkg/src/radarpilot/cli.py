"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 bad input.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .advisor import blind_region, recommend_dmrs, scsi_accuracy
from .analytic import bounds_for, feasible_set
from .engine import prob_at_least, prob_monte_carlo
from .scenario import ScenarioConfig, ScenarioError, config_from_dict
from .sweeps import (
    PRESETS,
    SweepSpec,
    run_sweep,
    run_validation,
    write_csv,
    write_validation_csv,
)


def _config_options(fn):
    opts = [
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="JSON ScenarioConfig file."),
        click.option("--t-ofdm", type=float, default=None, help="OFDM symbol duration [s]."),
        click.option("--t-pil", type=float, default=None, help="Pilot spacing [s]."),
        click.option("--n-p", type=int, default=None, help="Pilots per estimation window."),
        click.option("--t-rep", type=float, default=None, help="Radar repetition interval [s]."),
        click.option("--t-pulse", type=float, default=None, help="Broadened pulse width [s]."),
        click.option("--echo-delays", type=str, default=None,
                     help="Comma-separated echo delays [s]."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _build_config(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays) -> ScenarioConfig:
    data: dict = {}
    if config_path is not None:
        try:
            data = json.loads(Path(config_path).read_text())
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"invalid JSON in {config_path}: {exc}")
    overrides = {
        "t_ofdm": t_ofdm, "t_pil": t_pil, "n_p": n_p,
        "t_rep": t_rep, "t_pulse": t_pulse,
    }
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    if echo_delays is not None:
        try:
            data["echo_delays"] = [float(x) for x in echo_delays.split(",") if x.strip()]
        except ValueError:
            raise click.UsageError(f"--echo-delays must be comma-separated numbers, got {echo_delays!r}")
    try:
        return config_from_dict(data)
    except ScenarioError as exc:
        raise click.UsageError(str(exc))


def _open_out(out: Optional[str]):
    if out is None:
        return sys.stdout, False
    return open(out, "w"), True


@click.group()
@click.version_option(version=__version__, prog_name="radarpilot")
def main() -> None:
    """Interference probability analysis for pulsed-radar / OFDM coexistence."""


@main.command("prob")
@_config_options
@click.option("--m", "m", type=int, default=1, show_default=True,
              help="Threshold: at least m pilots hit.")
@click.option("--mc-samples", type=int, default=None,
              help="Also run a Monte Carlo cross-check with this many samples.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def cmd_prob(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays,
             m, mc_samples, seed, as_json) -> None:
    """Exact interference probability for one scenario."""
    config = _build_config(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays)
    try:
        report = prob_at_least(config, m)
        mc = prob_monte_carlo(config, m, mc_samples, seed) if mc_samples else None
    except ScenarioError as exc:
        raise click.UsageError(str(exc))
    if as_json:
        doc = {
            "config": config.to_dict(),
            "t_csi": config.t_csi,
            "n_r": config.n_r,
            "m": report.m,
            "p_exact": report.p_exact,
            "lower_bound": report.lower_bound,
            "upper_bound": report.upper_bound,
            "closed_form": report.closed_form,
            "closed_form_case": report.closed_form_case,
            "predicted_nonzero": report.predicted_nonzero,
            "boundary": report.boundary,
        }
        if mc is not None:
            doc["mc"] = {
                "estimate": mc.estimate, "stderr": mc.stderr,
                "n_samples": mc.n_samples, "seed": mc.seed,
                "algorithm": mc.algorithm,
            }
        click.echo(json.dumps(doc, indent=2))
        return
    click.echo(f"P[M >= {m}] = {report.p_exact:.9e}")
    click.echo(f"bounds     = [{report.lower_bound:.9e}, {report.upper_bound:.9e}]")
    if report.closed_form is not None:
        click.echo(f"closed form ({report.closed_form_case}) = {report.closed_form:.9e}")
    click.echo(f"predicted non-zero: {report.predicted_nonzero}"
               + (" (boundary)" if report.boundary else ""))
    if mc is not None:
        click.echo(f"monte carlo = {mc.estimate:.9e} +/- {mc.stderr:.3e} "
                   f"({mc.n_samples} samples, seed {mc.seed}, {mc.algorithm})")


@main.command("bounds")
@_config_options
@click.option("--m", "m", type=int, default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_bounds(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays,
               m, as_json) -> None:
    """Analytical lower/upper bounds for one scenario."""
    config = _build_config(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays)
    try:
        lower, upper = bounds_for(config, m)
    except ScenarioError as exc:
        raise click.UsageError(str(exc))
    if as_json:
        click.echo(json.dumps({"m": m, "lower_bound": lower, "upper_bound": upper}, indent=2))
    else:
        click.echo(f"lower = {lower:.9e}")
        click.echo(f"upper = {upper:.9e}")


@main.command("feasible-set")
@click.option("--m", "m", type=int, required=True)
@click.option("--n-p", "n_p", type=int, required=True)
@click.option("--t-pil", type=float, required=True)
@click.option("--t-ofdm", type=float, required=True)
@click.option("--trep-min", type=float, required=True)
@click.option("--trep-max", type=float, required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_feasible_set(m, n_p, t_pil, t_ofdm, trep_min, trep_max, as_json) -> None:
    """Repetition intervals for which >= m of n_p pilots can be hit."""
    try:
        fs = feasible_set(m, n_p, t_pil, t_ofdm, trep_min, trep_max)
    except ScenarioError as exc:
        raise click.UsageError(str(exc))
    if as_json:
        click.echo(fs.to_json(indent=2))
        return
    click.echo(f"feasible set for m={m}, n_p={n_p} over [{trep_min}, {trep_max}] "
               f"(q_max={fs.q_max}):")
    for iv in fs.trep_intervals:
        click.echo(f"  [{iv.lo:.9e}, {iv.hi:.9e}]")
    click.echo(f"measure = {fs.measure():.9e}")


@main.command("recommend-dmrs")
@click.option("--t-rep", type=float, required=True)
@click.option("--t-coh", type=float, required=True)
@click.option("--t-ofdm", type=float, required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_recommend_dmrs(t_rep, t_coh, t_ofdm, as_json) -> None:
    """Interference-minimizing demodulation pilot spacing."""
    try:
        rec = recommend_dmrs(t_rep, t_coh, t_ofdm)
    except ScenarioError as exc:
        raise click.UsageError(str(exc))
    if as_json:
        click.echo(json.dumps({
            "k_opt": rec.k_opt, "t_dmrs": rec.t_dmrs,
            "p_interference": rec.p_interference, "coherence_ok": rec.coherence_ok,
        }, indent=2))
        return
    click.echo(f"k_opt = {rec.k_opt}")
    click.echo(f"t_dmrs = {rec.t_dmrs:.9e}")
    click.echo(f"p_interference = {rec.p_interference:.9e}")
    click.echo(f"coherence_ok = {rec.coherence_ok}")


@main.command("scsi-accuracy")
@_config_options
@click.option("--scheme", type=click.Choice(["min", "avg"]), required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_scsi_accuracy(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays,
                      scheme, as_json) -> None:
    """Probability that limited feedback captures the interference channel."""
    config = _build_config(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays)
    try:
        acc = scsi_accuracy(config, scheme)
    except ScenarioError as exc:
        raise click.UsageError(str(exc))
    if as_json:
        click.echo(json.dumps({
            "scheme": acc.scheme, "threshold_m": acc.threshold_m,
            "p_accurate": acc.p_accurate,
        }, indent=2))
    else:
        click.echo(f"scheme = {acc.scheme} (threshold m = {acc.threshold_m})")
        click.echo(f"p_accurate = {acc.p_accurate:.9e}")


def _emit_rows(rows, out, timestamp) -> None:
    fh, close = _open_out(out)
    try:
        write_csv(rows, fh, timestamp=timestamp)
    finally:
        if close:
            fh.close()


def _maybe_plot(rows, out, plot, no_plot, preset=None, **plot_kwargs) -> None:
    if no_plot:
        return
    path = plot
    if path is None and out is not None:
        path = str(Path(out).with_suffix(".png"))
    if path is None:
        return
    from .plots import plot_spec_for_preset, save_sweep_plot

    if preset is not None:
        plot_kwargs = plot_spec_for_preset(preset)
    save_sweep_plot(rows, path, **plot_kwargs)
    click.echo(f"wrote figure {path}", err=True)


@main.command("sweep")
@_config_options
@click.option("--axis", type=click.Choice(["t_rep", "t_csi", "m"]), default="t_rep",
              show_default=True)
@click.option("--start", type=float, required=True)
@click.option("--stop", type=float, required=True)
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--m-list", type=str, default="1", show_default=True,
              help="Comma-separated m values.")
@click.option("--with-mc", is_flag=True)
@click.option("--mc-samples", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--offset-grid/--no-offset-grid", default=True, show_default=True,
              help="Offset grid points half a step from the range anchors.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV output path (default: stdout).")
@click.option("--plot", type=click.Path(dir_okay=False), default=None,
              help="Render the sweep to this image file.")
@click.option("--timestamp/--no-timestamp", default=True, show_default=True)
def cmd_sweep(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays,
              axis, start, stop, count, m_list, with_mc, mc_samples, seed,
              offset_grid, out, plot, timestamp) -> None:
    """Sweep one axis and emit a long-format CSV (one row per point per m)."""
    config = _build_config(config_path, t_ofdm, t_pil, n_p, t_rep, t_pulse, echo_delays)
    try:
        ms = tuple(int(x) for x in m_list.split(",") if x.strip())
    except ValueError:
        raise click.UsageError(f"--m-list must be comma-separated integers, got {m_list!r}")
    try:
        spec = SweepSpec(base=config, axis=axis, start=start, stop=stop, count=count,
                         m_list=ms, with_mc=with_mc, mc_samples=mc_samples, seed=seed,
                         offset_grid=offset_grid)
        rows = run_sweep(spec)
    except ScenarioError as exc:
        raise click.UsageError(str(exc))
    _emit_rows(rows, out, timestamp)
    if plot:
        _maybe_plot(rows, out, plot, no_plot=False, series_field="m",
                    logy=False, title=None)


def _preset_command(name: str):
    @main.command(name)
    @click.option("--points", type=int, default=None, help="Grid points per series.")
    @click.option("--with-mc", is_flag=True)
    @click.option("--mc-samples", type=int, default=100_000, show_default=True)
    @click.option("--seed", type=int, default=0, show_default=True)
    @click.option("--out", type=click.Path(dir_okay=False), default=None,
                  help="CSV output path (default: stdout).")
    @click.option("--plot", type=click.Path(dir_okay=False), default=None,
                  help="Figure path (default: alongside --out with .png).")
    @click.option("--no-plot", is_flag=True, help="Skip figure rendering.")
    @click.option("--timestamp/--no-timestamp", default=True, show_default=True)
    def _cmd(points, with_mc, mc_samples, seed, out, plot, no_plot, timestamp,
             _preset=name) -> None:
        kwargs = dict(with_mc=with_mc, mc_samples=mc_samples, seed=seed)
        if points is not None:
            kwargs["points"] = points
        rows = PRESETS[_preset](**kwargs)
        _emit_rows(rows, out, timestamp)
        _maybe_plot(rows, out, plot, no_plot, preset=_preset)

    _cmd.__doc__ = {
        "fig3a": "Single-hit probability vs t_rep (5 ms window, 1 and 5 pilots).",
        "fig3b": "Multi-hit probabilities vs t_rep (5-pilot window, m = 1..5).",
        "fig4": "Window-averaged feedback accuracy vs t_rep for 4..64 ms windows.",
    }[name]
    return _cmd


cmd_fig3a = _preset_command("fig3a")
cmd_fig3b = _preset_command("fig3b")
cmd_fig4 = _preset_command("fig4")


@main.command("validate")
@click.option("--configs", "n_configs", type=int, default=100, show_default=True)
@click.option("--mc-samples", type=int, default=1_000_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Per-check CSV output path.")
@click.option("--json", "as_json", is_flag=True)
@click.option("--timestamp/--no-timestamp", default=True, show_default=True)
@click.pass_context
def cmd_validate(ctx, n_configs, mc_samples, seed, out, as_json, timestamp) -> None:
    """Randomized self-validation; exit code 1 if any check fails."""
    try:
        report, checks = run_validation(n_configs, mc_samples, seed)
    except ScenarioError as exc:
        raise click.UsageError(str(exc))
    if out is not None:
        with open(out, "w") as fh:
            write_validation_csv(checks, fh, timestamp=timestamp)
    summary = {
        "n_configs": report.n_configs,
        "n_checks": report.n_checks,
        "n_failed": report.n_failed,
        "worst_sandwich_margin": report.worst_sandwich_margin,
        "worst_closed_form_error": report.worst_closed_form_error,
        "worst_mc_sigma": report.worst_mc_sigma,
        "passed": report.passed,
    }
    if as_json:
        click.echo(json.dumps(summary, indent=2))
    else:
        click.echo(f"checks: {report.n_checks}  failed: {report.n_failed}")
        click.echo(f"worst sandwich margin: {report.worst_sandwich_margin:.3e}")
        click.echo(f"worst closed-form error: {report.worst_closed_form_error:.3e}")
        click.echo(f"worst MC deviation: {report.worst_mc_sigma:.2f} sigma")
        for line in report.failures[:20]:
            click.echo(f"FAIL {line}")
        click.echo("PASS" if report.passed else "FAIL")
    if not report.passed:
        ctx.exit(1)


@main.command("blind-region")
@click.option("--t-pil", type=float, required=True)
@click.option("--t-ofdm", type=float, required=True)
@click.option("--n-p", "n_p", type=int, required=True)
@click.option("--trep-min", type=float, required=True)
@click.option("--trep-max", type=float, required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_blind_region(t_pil, t_ofdm, n_p, trep_min, trep_max, as_json) -> None:
    """Repetition intervals invisible to window-averaged feedback."""
    try:
        region = blind_region(t_pil, t_ofdm, n_p, trep_min, trep_max)
    except ScenarioError as exc:
        raise click.UsageError(str(exc))
    if as_json:
        click.echo(json.dumps({
            "n_p": n_p, "m": (n_p + 1) // 2,
            "intervals": [[iv.lo, iv.hi] for iv in region],
            "measure": region.measure(),
        }, indent=2))
        return
    for iv in region:
        click.echo(f"  [{iv.lo:.9e}, {iv.hi:.9e}]")
    click.echo(f"measure = {region.measure():.9e}")


if __name__ == "__main__":
    main()
