"""Objective surface export: CSV grids and a dependency-free SVG heatmap."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .objective import user_arrays
from .oracle import GridSpec
from .scenario import UserDevice

# Low / mid / high stops of a perceptually ordered colormap.
_STOPS = ((68, 1, 84), (33, 145, 140), (253, 231, 37))


def surface_grid(
    users: Sequence[UserDevice], z: float, grid: GridSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Objective values over the grid; result[ix, iy] pairs with (xs[ix], ys[iy])."""
    xs_u, ys_u, es = user_arrays(users)
    gxs = grid.xs()
    gys = grid.ys()
    values = np.zeros((len(gxs), len(gys)))
    z2 = z * z
    for ix, gx in enumerate(gxs):
        totals = np.zeros(len(gys))
        for ux, uy, ue in zip(xs_u, ys_u, es):
            totals += ue / ((gx - ux) ** 2 + (gys - uy) ** 2 + z2)
        values[ix] = totals
    return gxs, gys, values


def write_surface_csv(path: str | Path, xs: np.ndarray, ys: np.ndarray, values: np.ndarray) -> None:
    lines = ["x,y,value"]
    for ix, x in enumerate(xs):
        for iy, y in enumerate(ys):
            lines.append(f"{float(x)!r},{float(y)!r},{float(values[ix, iy])!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def _color(t: float) -> str:
    """Linear interpolation through the colormap stops; t in [0, 1]."""
    if t <= 0.5:
        lo, hi, u = _STOPS[0], _STOPS[1], t * 2.0
    else:
        lo, hi, u = _STOPS[1], _STOPS[2], (t - 0.5) * 2.0
    r, g, b = (round(a + (b_ - a) * u) for a, b_ in zip(lo, hi))
    return f"#{r:02x}{g:02x}{b:02x}"


def write_surface_svg(
    path: str | Path,
    xs: np.ndarray,
    ys: np.ndarray,
    values: np.ndarray,
    plot_px: int = 560,
) -> None:
    """Hand-emitted heatmap: one rect per grid cell, axes labeled in meters,
    linear color scale annotated with the value range."""
    margin_left, margin_bottom, margin_top, margin_right = 70, 45, 30, 20
    width = margin_left + plot_px + margin_right
    height = margin_top + plot_px + margin_bottom
    x_lo, x_hi = float(xs[0]), float(xs[-1])
    y_lo, y_hi = float(ys[0]), float(ys[-1])
    v_lo, v_hi = float(np.min(values)), float(np.max(values))
    v_span = v_hi - v_lo

    def px(x):  # meters -> svg x
        return margin_left + (x - x_lo) / max(x_hi - x_lo, 1e-300) * plot_px

    def py(y):  # meters -> svg y, flipped so +y points up
        return margin_top + (y_hi - y) / max(y_hi - y_lo, 1e-300) * plot_px

    cell_w = plot_px / len(xs)
    cell_h = plot_px / len(ys)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for ix, x in enumerate(xs):
        for iy, y in enumerate(ys):
            t = (values[ix, iy] - v_lo) / v_span if v_span > 0 else 0.5
            cx = margin_left + ix * cell_w
            cy = margin_top + (len(ys) - 1 - iy) * cell_h
            parts.append(
                f'<rect x="{cx:.2f}" y="{cy:.2f}" width="{cell_w + 0.5:.2f}" '
                f'height="{cell_h + 0.5:.2f}" fill="{_color(float(t))}"/>'
            )
    # Axes with five ticks each, labeled in meters.
    axis_y = margin_top + plot_px
    parts.append(
        f'<line x1="{margin_left}" y1="{axis_y}" x2="{margin_left + plot_px}" y2="{axis_y}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{margin_left}" y1="{margin_top}" x2="{margin_left}" y2="{axis_y}" stroke="black"/>'
    )
    for i in range(5):
        fx = x_lo + (x_hi - x_lo) * i / 4
        fy = y_lo + (y_hi - y_lo) * i / 4
        parts.append(
            f'<text x="{px(fx):.1f}" y="{axis_y + 16}" font-size="11" text-anchor="middle">{fx:g}</text>'
        )
        parts.append(
            f'<text x="{margin_left - 6}" y="{py(fy) + 4:.1f}" font-size="11" text-anchor="end">{fy:g}</text>'
        )
    parts.append(
        f'<text x="{margin_left + plot_px / 2:.0f}" y="{height - 8}" font-size="12" '
        f'text-anchor="middle">x (m)</text>'
    )
    parts.append(
        f'<text x="14" y="{margin_top + plot_px / 2:.0f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {margin_top + plot_px / 2:.0f})">y (m)</text>'
    )
    parts.append(
        f'<text x="{margin_left}" y="{margin_top - 10}" font-size="11">'
        f"value range: {v_lo:.4g} to {v_hi:.4g} J/m^2</text>"
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
