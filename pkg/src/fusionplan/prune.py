"""Key-node extraction: drop path waypoints that a straight, collision-free
segment can skip."""

from __future__ import annotations

from .gridmap import OccupancyGrid, inflate, line_of_sight


def extract_key_nodes(grid: OccupancyGrid, path, inflation: float = 0.0) -> list:
    """Greedy farthest-visible pruning.

    From the current anchor, keep the farthest later waypoint that is still in
    line of sight, make it the anchor and repeat until the last waypoint.
    ``inflation`` grows obstacles by that many cells before testing.
    Paths with fewer than two waypoints come back unchanged.
    """
    path = list(path)
    if len(path) < 2:
        return path
    check = inflate(grid, inflation) if inflation > 0 else grid
    keys = [path[0]]
    anchor = 0
    last = len(path) - 1
    while anchor < last:
        nxt = anchor + 1
        for j in range(last, anchor + 1, -1):
            if line_of_sight(check, path[anchor], path[j]):
                nxt = j
                break
        keys.append(path[nxt])
        anchor = nxt
    return keys
