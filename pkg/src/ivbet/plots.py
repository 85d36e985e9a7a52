"""Figure rendering for run traces.

Writes PNG files next to the CSV output: capital trajectories for the
adversary and the gamblers, opponent values along the sequence, and the
gambler/opponent ratios. All game arithmetic stays exact; values are
converted to floats here purely for drawing. matplotlib is imported lazily
so running and verifying traces never needs a rendering backend.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Union

from .construction import Trace

__all__ = ["render_trace_figures"]


def _numeric_or_nan(value: object) -> float:
    return float(value) if isinstance(value, int) else math.nan


def render_trace_figures(trace: Trace, out_dir: Union[str, Path]) -> list[Path]:
    """Render the standard figures for a trace into out_dir; returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lengths = range(trace.stages + 1)
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(lengths, trace.adversary_series(), label="adversary", drawstyle="steps-post", linewidth=1.4)
    for e in range(trace.family_size):
        ax.plot(lengths, trace.gambler_series(e), label=f"gambler {e} ({trace.opponent_names[e]})",
                drawstyle="steps-post", linewidth=0.9)
    ax.set_xlabel("prefix length")
    ax.set_ylabel("capital (quanta)")
    ax.set_title("adversary and gambler capitals")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = out_dir / "capitals.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    if trace.family_size:
        fig, ax = plt.subplots(figsize=(8, 4.5))
        for e in range(trace.family_size):
            series = [_numeric_or_nan(v) for v in trace.opponent_series(e)]
            ax.plot(lengths, series, label=trace.opponent_names[e], drawstyle="steps-post", linewidth=0.9)
        ax.set_xlabel("prefix length")
        ax.set_ylabel("opponent capital (quanta)")
        ax.set_title("opponent values along the sequence")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / "opponents.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

        fig, ax = plt.subplots(figsize=(8, 4.5))
        for e in range(trace.family_size):
            gamblers = trace.gambler_series(e)
            opponents = trace.opponent_series(e)
            ratios = [
                g / v if isinstance(v, int) and v > 0 else math.nan
                for g, v in zip(gamblers, opponents)
            ]
            ax.plot(lengths, ratios, label=trace.opponent_names[e], drawstyle="steps-post", linewidth=0.9)
        ax.axhline(1.0, color="black", linewidth=0.7, linestyle="--", alpha=0.6)
        ax.set_xlabel("prefix length")
        ax.set_ylabel("gambler / opponent")
        ax.set_title("catch-up ratios (gaps where the opponent is worth 0 or gone)")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / "ratios.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    return written
