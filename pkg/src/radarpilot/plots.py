"""Matplotlib rendering of sweep tables to image files (headless backend)."""
from __future__ import annotations

from collections import OrderedDict
from typing import Iterable, Sequence

from .sweeps import SweepRow

_PLOT_FLOOR = 1e-7  # keep exact zeros visible on log axes


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_sweep_plot(
    rows: Sequence[SweepRow],
    path: str,
    series_field: str = "m",
    logy: bool = False,
    title: str | None = None,
    show_bounds: bool = True,
) -> str:
    """Render probability-vs-t_rep curves, one series per distinct value of
    ``series_field`` (and m), with dashed bound envelopes. Returns ``path``."""
    if not rows:
        raise ValueError("nothing to plot: empty row table")
    plt = _pyplot()

    series: "OrderedDict[tuple, list[SweepRow]]" = OrderedDict()
    for row in rows:
        key = (getattr(row, series_field), row.m)
        series.setdefault(key, []).append(row)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for (value, m), group in series.items():
        group = sorted(group, key=lambda r: r.t_rep)
        x = [r.t_rep * 1e3 for r in group]
        y = [max(r.p_exact, _PLOT_FLOOR) if logy else r.p_exact for r in group]
        if series_field == "m":
            label = f"m={m}"
        else:
            label = f"{series_field}={value}, m={m}"
        (line,) = ax.plot(x, y, lw=1.2, label=label)
        if show_bounds:
            up = [max(r.upper_bound, _PLOT_FLOOR) if logy else r.upper_bound for r in group]
            ax.plot(x, up, ls="--", lw=0.8, color=line.get_color(), alpha=0.7)
            if m == 1:
                lo = [max(r.lower_bound, _PLOT_FLOOR) if logy else r.lower_bound
                      for r in group]
                ax.plot(x, lo, ls=":", lw=0.8, color=line.get_color(), alpha=0.7)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("repetition interval t_rep [ms]")
    ax.set_ylabel("P[at least m pilots hit]")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_spec_for_preset(preset: str) -> dict:
    """Series key and axis scale used when rendering each figure preset."""
    return {
        "fig3a": dict(series_field="n_p", logy=False, title="single-pilot interference probability"),
        "fig3b": dict(series_field="m", logy=True, title="multi-pilot interference probability"),
        "fig4": dict(series_field="n_p", logy=True, title="window-averaged feedback accuracy"),
    }[preset]
