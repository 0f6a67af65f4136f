from hypothesis import given
from hypothesis import strategies as st

from fusionplan.astar import NoPathError, astar_search
from fusionplan.fusion import path_length
from fusionplan.gridmap import OccupancyGrid, line_of_sight
from fusionplan.prune import extract_key_nodes

from conftest import polyline_clear, random_grid


def test_collinear_collapses_to_endpoints():
    grid = OccupancyGrid.empty(5, 3)
    path = [(0.5, 1.5), (1.5, 1.5), (2.5, 1.5), (3.5, 1.5)]
    assert extract_key_nodes(grid, path) == [(0.5, 1.5), (3.5, 1.5)]


def test_l_shape_keeps_corner():
    grid = OccupancyGrid.from_strings(["...", "##.", "##."])
    path = [(0.5, 0.5), (1.5, 0.5), (2.5, 0.5), (2.5, 1.5), (2.5, 2.5)]
    assert extract_key_nodes(grid, path) == [(0.5, 0.5), (2.5, 0.5), (2.5, 2.5)]


def test_short_paths_unchanged():
    grid = OccupancyGrid.empty(2, 2)
    assert extract_key_nodes(grid, []) == []
    assert extract_key_nodes(grid, [(0.5, 0.5)]) == [(0.5, 0.5)]
    assert extract_key_nodes(grid, [(0.5, 0.5), (1.5, 1.5)]) == [(0.5, 0.5), (1.5, 1.5)]


def test_inflation_keeps_extra_clearance():
    grid = OccupancyGrid.from_strings(["......", "......", "...#..", "......"])
    path = [(0.5, 1.5), (1.5, 1.5), (2.5, 1.5), (3.5, 1.5), (4.5, 1.5), (5.5, 1.5)]
    assert len(extract_key_nodes(grid, path)) == 2
    assert len(extract_key_nodes(grid, path, inflation=1.0)) > 2


def _astar_waypoints(grid):
    h, w = grid.cells.shape
    free = [(c, r) for r in range(h) for c in range(w) if not grid.cells[r, c]]
    try:
        return astar_search(grid, free[0], free[-1]).waypoints(grid)
    except NoPathError:
        return None


@given(st.integers(0, 2**32 - 1))
def test_key_nodes_properties(seed):
    grid = random_grid(seed, 30, 30, 0.2)
    path = _astar_waypoints(grid)
    if path is None:
        return
    keys = extract_key_nodes(grid, path)
    assert keys[0] == path[0] and keys[-1] == path[-1]
    # subsequence of the original path
    it = iter(path)
    assert all(k in it for k in keys)
    assert path_length(keys) <= path_length(path) + 1e-9
    assert all(line_of_sight(grid, a, b) for a, b in zip(keys, keys[1:]))
    assert polyline_clear(grid, keys)
    assert extract_key_nodes(grid, keys) == keys
