"""Deterministic 400x400 benchmark map with polygonal obstacles.

The obstacle layout sits across the diagonal corridors between the fixed
source (25, 25) and the six benchmark goals, so every case has to detour.
"""

from __future__ import annotations

import math
from importlib import resources

import numpy as np

from .gridmap import OccupancyGrid, load_bitmap, to_pgm

SIZE = 400


def _regular(cx, cy, radius, sides, phase=0.0):
    return [
        (cx + radius * math.cos(phase + 2 * math.pi * k / sides), cy + radius * math.sin(phase + 2 * math.pi * k / sides))
        for k in range(sides)
    ]


def _rotated_rect(cx, cy, w, h, angle_deg):
    t = math.radians(angle_deg)
    c, s = math.cos(t), math.sin(t)
    pts = [(-w / 2, -h / 2), (w / 2, -h / 2), (w / 2, h / 2), (-w / 2, h / 2)]
    return [(cx + x * c - y * s, cy + x * s + y * c) for x, y in pts]


# vertices in pixel units, (x, y) = (col, row)
POLYGONS = [
    [(60, 70), (150, 60), (140, 110), (70, 120)],  # quadrilateral below the source
    _rotated_rect(120, 190, 140, 28, 35),  # slanted bar
    [(200, 40), (290, 50), (245, 130)],  # triangle, top middle
    _regular(225, 230, 42, 5, 0.3),  # pentagon in the middle
    [(300, 95), (370, 110), (365, 150), (295, 140)],  # right block
    _rotated_rect(322, 300, 90, 22, -30),  # slanted bar, lower right
    [(60, 260), (130, 250), (150, 330), (80, 360)],  # lower-left block
    _regular(190, 330, 26, 6, 0.0),  # hexagon near the bottom goals
    [(330, 210), (385, 220), (370, 240)],  # sliver triangle by case 4
]


def rasterize(polygons, size: int = SIZE) -> np.ndarray:
    """Cells whose centers fall inside any polygon (even-odd rule)."""
    ys, xs = np.mgrid[0:size, 0:size] + 0.5
    inside = np.zeros((size, size), dtype=bool)
    for poly in polygons:
        hit = np.zeros_like(inside)
        n = len(poly)
        for i in range(n):
            x1, y1 = poly[i]
            x2, y2 = poly[(i + 1) % n]
            if y1 == y2:
                continue
            crosses = (ys < max(y1, y2)) & (ys >= min(y1, y2))
            x_at = x1 + (ys - y1) * (x2 - x1) / (y2 - y1)
            hit ^= crosses & (xs < x_at)
        inside |= hit
    return inside


def generate_replica() -> OccupancyGrid:
    return OccupancyGrid(rasterize(POLYGONS))


def replica_pgm() -> bytes:
    return to_pgm(generate_replica())


def replica_path():
    """Filesystem path of the committed fixture."""
    return resources.files("fusionplan") / "data" / "replica_map.pgm"


def load_replica() -> OccupancyGrid:
    return load_bitmap(replica_path().read_bytes())
