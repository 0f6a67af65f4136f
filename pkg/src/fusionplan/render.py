"""SVG rendering of a map with planner paths drawn on top.

Obstacles are merged into horizontal runs, one ``<rect>`` per run. Each path
is a single ``<polyline>``; source and goal markers are circles. Output is a
pure function of its inputs, so files are byte-stable.
"""

from __future__ import annotations

from .gridmap import OccupancyGrid

PLANNER_COLORS = {"conventional": "#d62728", "fusion": "#1f4fd6"}
SPARE_COLORS = ["#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#e377c2"]


class RenderError(ValueError):
    pass


def _num(v: float) -> str:
    text = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _obstacle_runs(grid: OccupancyGrid):
    cells = grid.cells
    for r in range(grid.height):
        row = cells[r]
        c = 0
        w = grid.width
        while c < w:
            if row[c]:
                start = c
                while c < w and row[c]:
                    c += 1
                yield r, start, c - start
            else:
                c += 1


def render_svg(grid: OccupancyGrid, reports=(), axis_step: int = 50) -> str:
    """Map plus one polyline per report (red for conventional, blue for fusion).

    Raises :class:`RenderError` when a report was planned on a map of another size.
    """
    cs = grid.cell_size
    wcm, hcm = grid.width * cs, grid.height * cs
    for rep in reports:
        if (rep.width, rep.height) != (grid.width, grid.height) or rep.cell_size != cs:
            raise RenderError(
                f"report for {rep.width}x{rep.height} (cell {rep.cell_size}) does not match "
                f"map {grid.width}x{grid.height} (cell {cs})"
            )
    margin = 24
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(wcm + margin)}" height="{_num(hcm + margin)}" '
        f'viewBox="{-margin} {-margin} {_num(wcm + margin)} {_num(hcm + margin)}">',
        f'<rect x="0" y="0" width="{_num(wcm)}" height="{_num(hcm)}" fill="#ffffff" stroke="#000000" stroke-width="0.5"/>',
        '<g id="obstacles" fill="#000000">',
    ]
    for r, c, n in _obstacle_runs(grid):
        out.append(f'<rect x="{_num(c * cs)}" y="{_num(r * cs)}" width="{_num(n * cs)}" height="{_num(cs)}"/>')
    out.append("</g>")

    # axes: x along the top edge, y down the left edge
    out.append('<g id="axes" font-family="sans-serif" font-size="8" fill="#444444">')
    step = axis_step * cs
    k = 0
    while k * step <= wcm:
        out.append(f'<text x="{_num(k * step)}" y="-6" text-anchor="middle">{_num(k * step)}</text>')
        k += 1
    k = 1
    while k * step <= hcm:
        out.append(f'<text x="-4" y="{_num(k * step + 3)}" text-anchor="end">{_num(k * step)}</text>')
        k += 1
    out.append('<text x="-14" y="-14" text-anchor="middle">x→ y↓</text>')
    out.append("</g>")

    used = set()
    spare = iter(SPARE_COLORS)
    marker_lines = []
    for i, rep in enumerate(reports):
        color = PLANNER_COLORS.get(rep.planner)
        if color is None or color in used:
            color = next(spare, "#7f7f7f")
        used.add(color)
        pts = " ".join(f"{_num(p[0])},{_num(p[1])}" for p in rep.path)
        out.append(
            f'<polyline id="path-{i}" class="{rep.planner}" points="{pts}" fill="none" '
            f'stroke="{color}" stroke-width="{_num(1.5 * cs)}" stroke-linejoin="round"/>'
        )
        if rep.path:
            s, g = rep.path[0], rep.path[-1]
            marker_lines.append(f'<circle cx="{_num(s[0])}" cy="{_num(s[1])}" r="{_num(3 * cs)}" fill="#2ca02c"/>')
            marker_lines.append(f'<circle cx="{_num(g[0])}" cy="{_num(g[1])}" r="{_num(3 * cs)}" fill="#ff7f0e"/>')
    # identical endpoints across reports collapse to one marker each
    seen = set()
    for line in marker_lines:
        if line not in seen:
            seen.add(line)
            out.append(line)
    out.append("</svg>")
    return "\n".join(out) + "\n"
