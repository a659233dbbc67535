"""SVG rendering of a significance map as concentric colored rings.

One annulus per concentration value (ascending outward), split into ngrid
equal sectors colored by cell state.  The default palette is blue
(increasing) / red (decreasing) / purple (flat) / gray (sparse), with a
grayscale alternative (black / dark gray / gray / light gray).  Output is
a pure function of (map, spec): no timestamps, no generated ids.
"""

import math
from dataclasses import dataclass

from .inference import CellState
from .kernels import TWO_PI

__all__ = ["RenderSpec", "PALETTES", "render_svg"]

PALETTES = {
    "color": {
        CellState.INCREASING: "#0000ff",
        CellState.DECREASING: "#ff0000",
        CellState.FLAT: "#a020f0",
        CellState.SPARSE: "#bebebe",
    },
    "grayscale": {
        CellState.INCREASING: "#000000",
        CellState.DECREASING: "#404040",
        CellState.FLAT: "#808080",
        CellState.SPARSE: "#d3d3d3",
    },
}

_DIRECTIONS = [("N", 0.5 * math.pi), ("E", 0.0), ("S", -0.5 * math.pi), ("W", math.pi)]


@dataclass(frozen=True)
class RenderSpec:
    """Visual options: labels 1=directions, 2=hours, 3=radians, 4=degrees."""

    label_type: int = 3
    palette: str = "color"
    radial_scale: str = "index"
    display_convention: str = "compass"
    size: int = 600

    def __post_init__(self):
        if self.label_type not in (1, 2, 3, 4):
            raise ValueError("label_type must be 1, 2, 3 or 4")
        if self.palette not in PALETTES:
            raise ValueError(f"palette must be one of {sorted(PALETTES)}")
        if self.radial_scale not in ("index", "log", "linear"):
            raise ValueError("radial_scale must be 'index', 'log' or 'linear'")
        if self.display_convention not in ("compass", "math"):
            raise ValueError("display_convention must be 'compass' or 'math'")
        if self.size < 100:
            raise ValueError("size must be at least 100 pixels")


def _ring_edges(nu_grid, scale, r_in, r_out):
    """n+1 radial edges for n rings, ascending nu outward."""
    n = len(nu_grid)
    if scale == "index" or (scale == "log" and nu_grid[0] <= 0):
        return [r_in + (r_out - r_in) * k / n for k in range(n + 1)]
    if scale == "log":
        vals = [math.log(v) for v in nu_grid]
    else:
        vals = list(nu_grid)
    half = 0.5 * (vals[1] - vals[0]) if n > 1 else 1.0
    bounds = [vals[0] - half]
    bounds += [0.5 * (vals[k] + vals[k + 1]) for k in range(n - 1)]
    bounds.append(vals[-1] + (0.5 * (vals[-1] - vals[-2]) if n > 1 else 1.0))
    lo, hi = bounds[0], bounds[-1]
    return [r_in + (r_out - r_in) * (b - lo) / (hi - lo) for b in bounds]


def render_svg(sizer_map, spec=RenderSpec()):
    """Render the map; returns the SVG document as a string."""
    n_nu, ngrid = sizer_map.shape
    colors = PALETTES[spec.palette]
    size = spec.size
    cx = cy = size / 2.0
    r_out = 0.40 * size
    r_in = 0.10 * size
    edges = _ring_edges(list(sizer_map.grid.nu_grid), spec.radial_scale, r_in, r_out)

    if spec.display_convention == "math":
        to_screen = lambda t: t
    else:
        to_screen = lambda t: 0.5 * math.pi - t

    def point(r, phi):
        return cx + r * math.cos(phi), cy - r * math.sin(phi)

    def fmt(x):
        return f"{x:.3f}"

    def sector_path(theta0, theta1, r0, r1):
        p0, p1 = to_screen(theta0), to_screen(theta1)
        sweep_out = "0" if p1 > p0 else "1"
        sweep_in = "1" if p1 > p0 else "0"
        ax, ay = point(r1, p0)
        bx, by = point(r1, p1)
        dx, dy = point(r0, p1)
        ex, ey = point(r0, p0)
        return (
            f"M {fmt(ax)} {fmt(ay)} "
            f"A {fmt(r1)} {fmt(r1)} 0 0 {sweep_out} {fmt(bx)} {fmt(by)} "
            f"L {fmt(dx)} {fmt(dy)} "
            f"A {fmt(r0)} {fmt(r0)} 0 0 {sweep_in} {fmt(ex)} {fmt(ey)} Z"
        )

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
    ]

    half_step = math.pi / ngrid
    theta = sizer_map.grid.theta
    for k in range(n_nu):
        for g in range(ngrid):
            d = sector_path(
                theta[g] - half_step, theta[g] + half_step, edges[k], edges[k + 1]
            )
            fill = colors[sizer_map.states[k, g]]
            parts.append(f'<path class="sector" fill="{fill}" stroke="none" d="{d}"/>')

    # radial axis with nu tick labels, drawn to the right of the rings
    parts.append(
        f'<line x1="{fmt(cx + r_in)}" y1="{fmt(cy)}" x2="{fmt(cx + r_out)}" '
        f'y2="{fmt(cy)}" stroke="#000000" stroke-width="1"/>'
    )
    for k, nu in enumerate(sizer_map.grid.nu_grid):
        x = cx + edges[k + 1]
        parts.append(
            f'<text class="nu-tick" x="{fmt(x)}" y="{fmt(cy - 4)}" font-size="10" '
            f'text-anchor="middle" fill="#000000">{nu:g}</text>'
        )

    for text, phi in _angle_labels(spec, to_screen):
        lx, ly = point(r_out + 0.055 * size, phi)
        parts.append(
            f'<text class="angle-label" x="{fmt(lx)}" y="{fmt(ly + 4)}" font-size="14" '
            f'text-anchor="middle" fill="#000000">{text}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _angle_labels(spec, to_screen):
    if spec.label_type == 1:
        # compass points always read N at the top regardless of convention
        return _DIRECTIONS
    if spec.label_type == 2:
        # 24-hour dial, 0h at the top, clockwise
        return [
            (f"{h}h", 0.5 * math.pi - TWO_PI * h / 24.0) for h in range(0, 24, 3)
        ]
    if spec.label_type == 3:
        names = [("0", 0.0), ("π/2", 0.5 * math.pi), ("π", math.pi), ("3π/2", 1.5 * math.pi)]
    else:
        names = [(f"{d}°", math.radians(d)) for d in (0, 90, 180, 270)]
    return [(text, to_screen(angle)) for text, angle in names]
