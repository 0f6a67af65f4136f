"""A* search over an occupancy grid.

The open set is a binary heap keyed on ``(f, h, seq)``: smaller f first,
then smaller h, then insertion order. Stale heap entries are skipped on pop
(lazy deletion) instead of decreasing keys in place.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum

from .gridmap import Cell, OccupancyGrid, Point, cell_center, is_occupied

SQRT2 = math.sqrt(2.0)


class PlanningError(Exception):
    """Base class for planner failures."""


class EndpointError(PlanningError, ValueError):
    """Source or goal is outside the map or on an obstacle."""


class NoPathError(PlanningError):
    """The open set ran dry before reaching the goal."""

    def __init__(self, message: str, expansions: int = 0):
        super().__init__(message)
        self.expansions = expansions


def manhattan(p, q, cell_size: float = 1.0) -> float:
    return (abs(q[0] - p[0]) + abs(q[1] - p[1])) * cell_size


def euclidean(p, q, cell_size: float = 1.0) -> float:
    return math.sqrt((q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2) * cell_size


def octile(p, q, cell_size: float = 1.0) -> float:
    """Exact free-space cost on an 8-connected grid with unit/sqrt(2) steps."""
    dx, dy = abs(q[0] - p[0]), abs(q[1] - p[1])
    return ((max(dx, dy) - min(dx, dy)) + SQRT2 * min(dx, dy)) * cell_size


class HeuristicKind(str, Enum):
    MANHATTAN = "manhattan"
    EUCLIDEAN = "euclidean"


_HEURISTICS = {HeuristicKind.MANHATTAN: manhattan, HeuristicKind.EUCLIDEAN: euclidean}


@dataclass(frozen=True)
class Heuristic:
    kind: HeuristicKind = HeuristicKind.EUCLIDEAN
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", HeuristicKind(self.kind))
        if not (self.weight >= 0 and math.isfinite(self.weight)):
            raise ValueError(f"heuristic weight must be >= 0, got {self.weight}")

    def admissible(self, connectivity: "Connectivity") -> bool:
        """Whether optimality is guaranteed for this heuristic/neighborhood pair."""
        if self.weight > 1.0:
            return False
        if self.kind is HeuristicKind.EUCLIDEAN:
            return True
        return connectivity is Connectivity.FOUR

    def __call__(self, p, q, cell_size: float = 1.0) -> float:
        return self.weight * _HEURISTICS[self.kind](p, q, cell_size)


class Connectivity(Enum):
    FOUR = 4
    EIGHT = 8

    @classmethod
    def parse(cls, value) -> "Connectivity":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        aliases = {"4": cls.FOUR, "four": cls.FOUR, "8": cls.EIGHT, "eight": cls.EIGHT}
        if text not in aliases:
            raise ValueError(f"connectivity must be 4 or 8, got {value!r}")
        return aliases[text]


@dataclass(frozen=True)
class SearchNode:
    """One expansion record: the f/g/h triple at the moment a cell was closed."""

    cell: Cell
    g: float
    h: float
    f: float
    parent: Cell | None


@dataclass
class SearchResult:
    cells: list[Cell]
    cost: float
    expansions: int
    trace: list[SearchNode] = field(default_factory=list)

    def waypoints(self, grid: OccupancyGrid) -> list[Point]:
        return [cell_center(grid, c) for c in self.cells]


def path_cost(cells, cell_size: float = 1.0) -> float:
    """Grid cost of a cell path, summed as axial and diagonal step counts."""
    axial = diagonal = 0
    for a, b in zip(cells, cells[1:]):
        if a[0] != b[0] and a[1] != b[1]:
            diagonal += 1
        else:
            axial += 1
    return axial * cell_size + diagonal * (cell_size * SQRT2)


def _check_endpoint(grid: OccupancyGrid, cell, name: str) -> Cell:
    cell = Cell(int(cell[0]), int(cell[1]))
    if cell.col < 0 or cell.row < 0 or cell.col >= grid.width or cell.row >= grid.height:
        raise EndpointError(f"{name} {tuple(cell)} is outside the {grid.width}x{grid.height} map")
    if is_occupied(grid, cell):
        raise EndpointError(f"{name} {tuple(cell)} is on an obstacle")
    return cell


def astar_search(
    grid: OccupancyGrid,
    source,
    goal,
    heuristic: Heuristic = Heuristic(),
    connectivity: Connectivity = Connectivity.EIGHT,
    trace: bool = False,
) -> SearchResult:
    """Shortest grid path from ``source`` to ``goal`` (both ``(col, row)``).

    Diagonal moves need both flanking axial cells free. Raises
    :class:`EndpointError` for bad endpoints and :class:`NoPathError` when the
    goal is unreachable.
    """
    source = _check_endpoint(grid, source, "source")
    goal = _check_endpoint(grid, goal, "goal")
    connectivity = Connectivity.parse(connectivity)
    w, h = grid.width, grid.height
    cs = grid.cell_size
    blocked = grid.blocked_bytes()
    diag_cost = cs * SQRT2

    gcol, grow = goal
    weight = heuristic.weight
    if heuristic.kind is HeuristicKind.EUCLIDEAN:
        def hfun(c, r):
            return weight * (math.sqrt((gcol - c) ** 2 + (grow - r) ** 2) * cs)
    else:
        def hfun(c, r):
            return weight * ((abs(gcol - c) + abs(grow - r)) * cs)

    n = w * h
    start = source.row * w + source.col
    target = grow * w + gcol
    best_g = [math.inf] * n
    parent = [-1] * n
    best_g[start] = 0.0
    h0 = hfun(source.col, source.row)
    # entries: (f, h, seq, g, index)
    heap = [(h0, h0, 0, 0.0, start)]
    seq = 1
    expansions = 0
    records: list[SearchNode] = []
    eight = connectivity is Connectivity.EIGHT
    push = heapq.heappush
    pop = heapq.heappop

    while heap:
        f, hv, _, g, idx = pop(heap)
        if g > best_g[idx]:
            continue
        expansions += 1
        r, c = divmod(idx, w)
        if trace:
            p = parent[idx]
            records.append(SearchNode(Cell(c, r), g, hv, f, None if p < 0 else Cell(p % w, p // w)))
        if idx == target:
            break
        # axial neighbors: E, W, S, N
        e_free = c + 1 < w and not blocked[idx + 1]
        w_free = c > 0 and not blocked[idx - 1]
        s_free = r + 1 < h and not blocked[idx + w]
        n_free = r > 0 and not blocked[idx - w]
        cand = []
        ng = g + cs
        if e_free:
            cand.append((idx + 1, c + 1, r, ng))
        if w_free:
            cand.append((idx - 1, c - 1, r, ng))
        if s_free:
            cand.append((idx + w, c, r + 1, ng))
        if n_free:
            cand.append((idx - w, c, r - 1, ng))
        if eight:
            dg = g + diag_cost
            if s_free and e_free and not blocked[idx + w + 1]:
                cand.append((idx + w + 1, c + 1, r + 1, dg))
            if s_free and w_free and not blocked[idx + w - 1]:
                cand.append((idx + w - 1, c - 1, r + 1, dg))
            if n_free and e_free and not blocked[idx - w + 1]:
                cand.append((idx - w + 1, c + 1, r - 1, dg))
            if n_free and w_free and not blocked[idx - w - 1]:
                cand.append((idx - w - 1, c - 1, r - 1, dg))
        for nidx, nc, nr, cost in cand:
            if cost < best_g[nidx]:
                best_g[nidx] = cost
                parent[nidx] = idx
                nh = hfun(nc, nr)
                push(heap, (cost + nh, nh, seq, cost, nidx))
                seq += 1
    else:
        raise NoPathError(
            f"no path from {tuple(source)} to {tuple(goal)} ({expansions} expansions)", expansions
        )

    cells = []
    idx = target
    while idx >= 0:
        cells.append(Cell(idx % w, idx // w))
        idx = parent[idx]
    cells.reverse()
    return SearchResult(cells, path_cost(cells, cs), expansions, records)


def format_cells(cells) -> str:
    """Path debug format: one ``col,row`` pair per line."""
    return "".join(f"{c},{r}\n" for c, r in cells)


def format_trace(records) -> str:
    """Expansion trace: ``col,row,f,g,h`` per expanded cell, in order."""
    return "".join(f"{n.cell.col},{n.cell.row},{n.f!r},{n.g!r},{n.h!r}\n" for n in records)
