"""Minimal static SVG line plots.

Hand-rolled so the output is dependency-free, deterministic, and easy to
check structurally in tests (one <polyline> element per series).
"""

import math

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 62, 150, 34, 46


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def line_plot(
    series: list[tuple[str, list[float], list[float]]],
    path: str,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 720,
    height: int = 440,
) -> None:
    """Write a line plot of (label, x, y) series to an SVG file."""
    xs = [v for _, x, _ in series for v in x if math.isfinite(v)]
    ys = [v for _, _, y in series for v in y if math.isfinite(v)]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    pw = width - MARGIN_L - MARGIN_R
    ph = height - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + pw * (x - x_lo) / (x_hi - x_lo)

    def sy(y):
        return MARGIN_T + ph * (1.0 - (y - y_lo) / (y_hi - y_lo))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:g}" y="20" text-anchor="middle" '
        f'font-size="14" font-family="sans-serif">{title}</text>',
    ]
    # axes
    out.append(
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T + ph}" x2="{MARGIN_L + pw}" '
        f'y2="{MARGIN_T + ph}" stroke="black"/>'
    )
    out.append(
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{MARGIN_T + ph}" stroke="black"/>'
    )
    for t in _ticks(x_lo, x_hi):
        px = sx(t)
        out.append(
            f'<line x1="{_fmt(px)}" y1="{MARGIN_T + ph}" x2="{_fmt(px)}" '
            f'y2="{MARGIN_T + ph + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(px)}" y="{MARGIN_T + ph + 18}" '
            f'text-anchor="middle" font-size="11" '
            f'font-family="sans-serif">{_fmt(t)}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        py = sy(t)
        out.append(
            f'<line x1="{MARGIN_L - 5}" y1="{_fmt(py)}" x2="{MARGIN_L}" '
            f'y2="{_fmt(py)}" stroke="black"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{_fmt(py)}" text-anchor="end" '
            f'dominant-baseline="middle" font-size="11" '
            f'font-family="sans-serif">{_fmt(t)}</text>'
        )
    out.append(
        f'<text x="{MARGIN_L + pw / 2:g}" y="{height - 8}" '
        f'text-anchor="middle" font-size="12" '
        f'font-family="sans-serif">{xlabel}</text>'
    )
    out.append(
        f'<text x="16" y="{MARGIN_T + ph / 2:g}" text-anchor="middle" '
        f'font-size="12" font-family="sans-serif" '
        f'transform="rotate(-90 16 {MARGIN_T + ph / 2:g})">{ylabel}</text>'
    )

    for i, (label, x, y) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(
            f"{_fmt(sx(xi))},{_fmt(sy(yi))}" for xi, yi in zip(x, y)
        )
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        ly = MARGIN_T + 14 * (i + 1)
        out.append(
            f'<line x1="{MARGIN_L + pw + 8}" y1="{ly - 4}" '
            f'x2="{MARGIN_L + pw + 28}" y2="{ly - 4}" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{MARGIN_L + pw + 32}" y="{ly}" font-size="11" '
            f'font-family="sans-serif">{label}</text>'
        )
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
