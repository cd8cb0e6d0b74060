"""File emission: delimited tables, deterministic SVG line plots, and
matplotlib figures.

CSV and SVG output is byte-identical for identical inputs (fixed column
orders, floats at 12 significant digits, no timestamps or random ids), so
repeated runs can be diffed.  The matplotlib path is for human consumption
and carries no byte-level guarantee.
"""

from __future__ import annotations

import csv
import math
from typing import Sequence

SWEEP_COLUMNS = (
    "n", "tau", "adversary", "trials",
    "mean_rounds", "std_rounds", "errored_trials", "seed",
)
TRIAL_COLUMNS = (
    "trial_id", "n", "tau", "adversary",
    "rounds", "truncated", "final_corrupted_weight", "seed_used",
)
TRAJECTORY_COLUMNS = (
    "round", "mean_corrupted_weight", "mean_good_weight", "contributing_trials",
)

# One series: (label, xs, ys)
Series = tuple[str, Sequence[float], Sequence[float]]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def emit_csv(rows: Sequence, path: str, columns: Sequence[str]) -> None:
    """Write dataclass rows as UTF-8 CSV with a fixed column order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(_cell(getattr(row, col)) for col in columns)


def _nice_step(span: float, target_ticks: int = 5) -> float:
    raw = span / max(target_ticks, 1)
    power = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * power:
            return mult * power
    return 10.0 * power


def _ticks(lo: float, hi: float) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step)
    last = math.floor(hi / step)
    return [t * step for t in range(first, last + 1)]


def emit_svg(
    series: Sequence[Series],
    path: str,
    *,
    x_label: str,
    y_label: str,
    title: str | None = None,
) -> None:
    """Single-file SVG line plot: linear axes, tick labels, legend.

    Deterministic byte output for identical inputs.  Every series needs at
    least one point.
    """
    if not series:
        raise ValueError("at least one series is required")
    for label, xs, ys in series:
        if len(xs) != len(ys):
            raise ValueError(f"series {label!r} has mismatched x/y lengths")
        if not xs:
            raise ValueError(f"series {label!r} has no points")

    width, height = 720.0, 480.0
    left, right, top, bottom = 72.0, 24.0, 40.0, 56.0
    plot_w = width - left - right
    plot_h = height - top - bottom

    all_x = [float(x) for _, xs, _ in series for x in xs]
    all_y = [float(y) for _, _, ys in series for y in ys]
    x_lo, x_hi = min(all_x), max(all_x)
    y_lo, y_hi = min(all_y), max(all_y)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0

    def px(x: float) -> float:
        return left + (float(x) - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return top + plot_h - (float(y) - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" '
        f'height="{height:g}" viewBox="0 0 {width:g} {height:g}">',
        f'<rect x="0" y="0" width="{width:g}" height="{height:g}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.2f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="15">{title}</text>'
        )

    for t in _ticks(x_lo, x_hi):
        x = px(t)
        parts.append(
            f'<line x1="{x:.2f}" y1="{top:.2f}" x2="{x:.2f}" '
            f'y2="{top + plot_h:.2f}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{top + plot_h + 18:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{t:.6g}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        parts.append(
            f'<line x1="{left:.2f}" y1="{y:.2f}" x2="{left + plot_w:.2f}" '
            f'y2="{y:.2f}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{left - 6:.2f}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{t:.6g}</text>'
        )

    parts.append(
        f'<rect x="{left:.2f}" y="{top:.2f}" width="{plot_w:.2f}" '
        f'height="{plot_h:.2f}" fill="none" stroke="#333333" stroke-width="1"/>'
    )

    for k, (label, xs, ys) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"/>'
        )

    legend_x = left + plot_w - 150.0
    legend_y = top + 10.0
    for k, (label, _, _) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        y = legend_y + 16.0 * k
        parts.append(
            f'<line x1="{legend_x:.2f}" y1="{y:.2f}" x2="{legend_x + 22:.2f}" '
            f'y2="{y:.2f}" stroke="{color}" stroke-width="1.5" class="legend"/>'
        )
        parts.append(
            f'<text x="{legend_x + 28:.2f}" y="{y + 4:.2f}" '
            f'font-family="sans-serif" font-size="12">{label}</text>'
        )

    parts.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{height - 14:.2f}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="13">{x_label}</text>'
    )
    parts.append(
        f'<text x="18" y="{top + plot_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {top + plot_h / 2:.2f})">{y_label}</text>'
    )
    parts.append("</svg>")

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")


def render_figure(
    series: Sequence[Series],
    path: str,
    *,
    x_label: str,
    y_label: str,
    title: str | None = None,
) -> None:
    """Render the same line plot through matplotlib (PNG, PDF, ...)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    for k, (label, xs, ys) in enumerate(series):
        ax.plot(xs, ys, label=label, color=_PALETTE[k % len(_PALETTE)], lw=1.5)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
