"""Shared fixtures and independent oracles.

The oracles here deliberately share no code with the package: Dijkstra
without a heuristic, an exhaustive nearest-obstacle scan, and dense
point sampling of segments.
"""

import heapq
import math

import numpy as np
import pytest
from hypothesis import settings

from fusionplan.gridmap import OccupancyGrid

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SQRT2 = math.sqrt(2.0)


def random_grid(seed, width, height, density=0.2, cell_size=1.0):
    rng = np.random.default_rng(seed)
    return OccupancyGrid(rng.random((height, width)) < density, cell_size)


def dijkstra(grid, source, eight=True):
    """All-targets shortest paths. Returns {cell: (cost, axial_steps, diag_steps)}.

    The reported cost is recomputed from step counts so equal paths give
    bit-identical costs regardless of summation order.
    """
    occ = grid.cells
    h, w = occ.shape
    cs = grid.cell_size

    def free(c, r):
        return 0 <= c < w and 0 <= r < h and not occ[r, c]

    moves = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    if eight:
        moves += [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    dist = {tuple(source): 0.0}
    counts = {tuple(source): (0, 0)}
    heap = [(0.0, tuple(source))]
    done = set()
    while heap:
        d, (c, r) = heapq.heappop(heap)
        if (c, r) in done:
            continue
        done.add((c, r))
        for dc, dr in moves:
            nc, nr = c + dc, r + dr
            if not free(nc, nr):
                continue
            diag = dc != 0 and dr != 0
            if diag and not (free(c + dc, r) and free(c, r + dr)):
                continue
            nd = d + (cs * SQRT2 if diag else cs)
            if nd < dist.get((nc, nr), math.inf) - 1e-12:
                dist[(nc, nr)] = nd
                a, g = counts[(c, r)]
                counts[(nc, nr)] = (a, g + 1) if diag else (a + 1, g)
                heapq.heappush(heap, (nd, (nc, nr)))
    return {k: (v[0] * cs + v[1] * (cs * SQRT2), v[0], v[1]) for k, v in counts.items()}


def brute_distance(grid):
    """O(cells x obstacles) nearest-obstacle distances."""
    occ = grid.cells
    obs = np.argwhere(occ)
    h, w = occ.shape
    out = np.full((h, w), np.inf)
    for r in range(h):
        for c in range(w):
            if len(obs):
                d2 = (obs[:, 0] - r) ** 2 + (obs[:, 1] - c) ** 2
                out[r, c] = math.sqrt(int(d2.min())) * grid.cell_size
    return out


def sampled_cells(grid, p, q, spacing=0.25):
    """Cells containing points sampled along p-q every ``spacing`` cells."""
    cs = grid.cell_size
    length = math.hypot(q[0] - p[0], q[1] - p[1]) / cs
    n = max(1, math.ceil(length / spacing))
    cells = set()
    for i in range(n + 1):
        t = i / n
        x = p[0] + (q[0] - p[0]) * t
        y = p[1] + (q[1] - p[1]) * t
        cells.add((math.floor(x / cs), math.floor(y / cs)))
    return cells


def sampled_hits_obstacle(grid, p, q, spacing=0.25):
    h, w = grid.cells.shape
    for c, r in sampled_cells(grid, p, q, spacing):
        if not (0 <= c < w and 0 <= r < h) or grid.cells[r, c]:
            return True
    return False


def segment_touches_square(p, q, col, row, cs=1.0):
    """Exact closed segment / closed axis-aligned square intersection (Liang-Barsky)."""
    x0, y0, x1, y1 = p[0] / cs, p[1] / cs, q[0] / cs, q[1] / cs
    t0, t1 = 0.0, 1.0
    dx, dy = x1 - x0, y1 - y0
    for pk, qk in ((-dx, x0 - col), (dx, col + 1 - x0), (-dy, y0 - row), (dy, row + 1 - y0)):
        if pk == 0:
            if qk < 0:
                return False
        else:
            t = qk / pk
            if pk < 0:
                t0 = max(t0, t)
            else:
                t1 = min(t1, t)
            if t0 > t1:
                return False
    return True


def polyline_clear(grid, path, spacing=0.25):
    """True if dense sampling of every segment of ``path`` stays off obstacles."""
    return not any(sampled_hits_obstacle(grid, a, b, spacing) for a, b in zip(path, path[1:]))


@pytest.fixture(scope="session")
def replica_grid():
    from fusionplan.replica import load_replica

    return load_replica()


@pytest.fixture(scope="session")
def replica_field(replica_grid):
    from fusionplan.gridmap import build_distance_field

    return build_distance_field(replica_grid)


# --- acceptance reporting ------------------------------------------------

SUITE_BUDGET_S = 60.0
_acceptance_lines = []
_session = {}


def pytest_sessionstart(session):
    import time

    _session["t0"] = time.perf_counter()


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; printed at the end."""

    def record(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
        _acceptance_lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    import time

    if not _acceptance_lines:
        return
    elapsed = time.perf_counter() - _session["t0"]
    ok = elapsed < SUITE_BUDGET_S
    _session["over_budget"] = not ok
    tr = terminalreporter
    tr.section("acceptance criteria")
    for line in _acceptance_lines:
        tr.write_line(line)
    tr.write_line(f"{'PASS' if ok else 'FAIL'}  full suite runtime  ({elapsed:.1f} s, budget {SUITE_BUDGET_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    import time

    # the runtime budget only applies when the whole suite ran
    if _acceptance_lines and session.testscollected > 100:
        if time.perf_counter() - _session["t0"] >= SUITE_BUDGET_S and exitstatus == 0:
            session.exitstatus = 1
