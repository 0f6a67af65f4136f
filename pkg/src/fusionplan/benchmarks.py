"""Benchmark maps and cases: the replica environment plus two synthetic maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fusion import REPLICA_CASES, CaseSpec
from .gridmap import OccupancyGrid
from .replica import load_replica


@dataclass(frozen=True)
class Benchmark:
    name: str
    grid: OccupancyGrid
    cases: tuple


def pillars_map() -> OccupancyGrid:
    """120x120 field of round pillars on a staggered lattice."""
    rows, cols = np.mgrid[0:120, 0:120]
    cells = np.zeros((120, 120), bool)
    for i, cy in enumerate(range(20, 110, 22)):
        for cx in range(18 + 11 * (i % 2), 110, 22):
            cells |= (rows - cy) ** 2 + (cols - cx) ** 2 <= 36
    return OccupancyGrid(cells)


def corridor_map() -> OccupancyGrid:
    """100x60 map split by three walls with offset doorways."""
    cells = np.zeros((60, 100), bool)
    for x, gap in ((25, (45, 55)), (50, (5, 15)), (75, (40, 52))):
        cells[:, x : x + 3] = True
        cells[gap[0] : gap[1], x : x + 3] = False
    return OccupancyGrid(cells)


def benchmark_suite() -> list[Benchmark]:
    return [
        Benchmark("replica", load_replica(), REPLICA_CASES),
        Benchmark(
            "pillars",
            pillars_map(),
            (CaseSpec((2, 2), (117, 117), "p1"), CaseSpec((117, 3), (4, 115), "p2"), CaseSpec((2, 60), (117, 60), "p3")),
        ),
        Benchmark("corridor", corridor_map(), (CaseSpec((3, 3), (96, 56), "c1"), CaseSpec((96, 3), (3, 30), "c2"))),
    ]
