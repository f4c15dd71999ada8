"""Post-hoc chart rendering for logged runs: fixed-size ASCII and SVG.

Both renderers are deterministic string generators so their output can be
golden-tested byte for byte. The ASCII chart is always 24 lines of 80
characters; the SVG is a fixed 640x480 polyline chart.
"""

from __future__ import annotations

from .errors import EmptyRunError, InvalidInputError

ASCII_COLS = 80
ASCII_ROWS = 24
_GUTTER = 10  # y-axis label width
_PLOT_COLS = ASCII_COLS - _GUTTER - 2  # "<label> |<plot>"
_PLOT_ROWS = ASCII_ROWS - 1  # last line is the x axis

SVG_WIDTH = 640
SVG_HEIGHT = 480
_MARGIN_LEFT = 60.0
_MARGIN_RIGHT = 20.0
_MARGIN_TOP = 40.0
_MARGIN_BOTTOM = 40.0


def _axis_label(value: float) -> str:
    text = f"{value:.6g}"
    if len(text) > _GUTTER:
        text = f"{value:.3g}"
    return text.rjust(_GUTTER)


def ascii_chart(t_values, values, label: str) -> str:
    """Render values against time as an 80x24 character chart.

    Rows 1..23 are the plot area with max/min labels on the first and last
    plot rows; the final line shows the time extent and column label.
    """
    if len(values) == 0:
        raise EmptyRunError("nothing to plot")
    if len(t_values) != len(values):
        raise InvalidInputError("t_values and values must have the same length")
    vmin, vmax = min(values), max(values)
    span = vmax - vmin
    n = len(values)

    grid = [[" "] * _PLOT_COLS for _ in range(_PLOT_ROWS)]
    for col in range(_PLOT_COLS):
        idx = round(col * (n - 1) / (_PLOT_COLS - 1)) if n > 1 else 0
        v = values[idx]
        if span > 0:
            row = round((vmax - v) / span * (_PLOT_ROWS - 1))
        else:
            row = _PLOT_ROWS // 2
        grid[row][col] = "*"

    lines = []
    for row in range(_PLOT_ROWS):
        if row == 0:
            prefix = _axis_label(vmax)
        elif row == _PLOT_ROWS - 1:
            prefix = _axis_label(vmin)
        else:
            prefix = " " * _GUTTER
        lines.append(f"{prefix} |{''.join(grid[row])}")
    footer = f"{'':{_GUTTER}} {label}: t_s {t_values[0]:.6f} .. {t_values[-1]:.6f}"
    lines.append(footer[:ASCII_COLS].ljust(ASCII_COLS))
    return "\n".join(line.ljust(ASCII_COLS) for line in lines)


def svg_chart(t_values, values, label: str) -> str:
    """Render values against time as a 640x480 SVG polyline chart."""
    if len(values) == 0:
        raise EmptyRunError("nothing to plot")
    if len(t_values) != len(values):
        raise InvalidInputError("t_values and values must have the same length")
    vmin, vmax = min(values), max(values)
    tmin, tmax = t_values[0], t_values[-1]
    vspan = vmax - vmin
    tspan = tmax - tmin
    plot_w = SVG_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = SVG_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def x_of(t):
        frac = (t - tmin) / tspan if tspan > 0 else 0.5
        return _MARGIN_LEFT + frac * plot_w

    def y_of(v):
        frac = (v - vmin) / vspan if vspan > 0 else 0.5
        return _MARGIN_TOP + (1.0 - frac) * plot_h

    points = " ".join(f"{x_of(t):.2f},{y_of(v):.2f}" for t, v in zip(t_values, values))
    x0, y0 = _MARGIN_LEFT, _MARGIN_TOP + plot_h
    x1, y1 = _MARGIN_LEFT + plot_w, _MARGIN_TOP
    return "\n".join(
        (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" '
            f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
            f'  <text x="{SVG_WIDTH / 2:.0f}" y="24" text-anchor="middle" '
            f'font-family="monospace" font-size="16">{label}</text>',
            f'  <line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
            f'  <line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
            f'  <text x="{x0 - 6:.0f}" y="{y1 + 4:.0f}" text-anchor="end" '
            f'font-family="monospace" font-size="12">{vmax:.6g}</text>',
            f'  <text x="{x0 - 6:.0f}" y="{y0 + 4:.0f}" text-anchor="end" '
            f'font-family="monospace" font-size="12">{vmin:.6g}</text>',
            f'  <text x="{x0:.0f}" y="{y0 + 20:.0f}" font-family="monospace" '
            f'font-size="12">{tmin:.6f}</text>',
            f'  <text x="{x1:.0f}" y="{y0 + 20:.0f}" text-anchor="end" '
            f'font-family="monospace" font-size="12">{tmax:.6f}</text>',
            f'  <polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{points}"/>',
            "</svg>",
        )
    )
