import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionplan.gridmap import (
    BitmapError,
    Cell,
    OccupancyGrid,
    build_distance_field,
    cell_center,
    dump_grid,
    is_occupied,
    line_of_sight,
    load_bitmap,
    read_bitmap,
    supercover_cells,
    to_pgm,
)
from fusionplan.replica import generate_replica, replica_path

from conftest import brute_distance, random_grid, sampled_cells, sampled_hits_obstacle, segment_touches_square


# --- bitmap loading ------------------------------------------------------


def test_load_2x2_graymap_threshold():
    data = b"P5\n2 2\n255\n" + bytes([0, 255, 255, 0])
    grid = load_bitmap(data, threshold=128)
    assert (grid.width, grid.height) == (2, 2)
    assert is_occupied(grid, (0, 0)) and is_occupied(grid, (1, 1))
    assert not is_occupied(grid, (1, 0)) and not is_occupied(grid, (0, 1))


def test_all_white_has_no_obstacles():
    data = b"P2\n3 2\n255\n" + b" ".join([b"255"] * 6)
    assert load_bitmap(data).obstacle_count == 0


def test_threshold_boundary():
    data = b"P2 3 1 255 127 128 129"
    assert load_bitmap(data, threshold=128).cells.tolist() == [[True, False, False]]


@pytest.mark.parametrize(
    "payload, expected",
    [
        (b"P1\n# comment\n3 2\n1 0 1\n0 0 1\n", [[1, 0, 1], [0, 0, 1]]),
        (b"P1 3 2 101001", [[1, 0, 1], [0, 0, 1]]),
        (b"P4\n3 2\n" + bytes([0b10100000, 0b00100000]), [[1, 0, 1], [0, 0, 1]]),
        (b"P2\n2 1\n15\n0 15\n", [[1, 0]]),
        (b"P5 2 1 15\n" + bytes([15, 0]), [[0, 1]]),
    ],
)
def test_all_magic_numbers(payload, expected):
    assert load_bitmap(payload).cells.astype(int).tolist() == expected


def test_low_maxval_scaled_to_8_bit():
    assert read_bitmap(b"P2 3 1 4 0 2 4").tolist() == [[0, 128, 255]]


@pytest.mark.parametrize(
    "payload, offset",
    [
        (b"P7\n1 1\n255\n\x00", 0),
        (b"P", 0),
        (b"P5\n2", 4),
        (b"P5\nx 2\n255\n", 3),
        (b"P5\n0 2\n255\n", 4),
        (b"P5\n2 0\n255\n", 6),
        (b"P5\n2 2\n300\n" + bytes(4), 10),
        (b"P5\n2 2\n255\n" + bytes(3), 14),
        (b"P2\n2 2\n255\n1 2 3", 16),
        (b"P2\n2 1\n100\n1 200", 13),
        (b"P4\n9 2\n" + bytes(3), 10),
    ],
)
def test_malformed_bitmaps_name_offset(payload, offset):
    with pytest.raises(BitmapError) as info:
        load_bitmap(payload)
    assert info.value.offset == offset
    assert f"byte offset {offset}" in str(info.value)


def test_replica_obstacle_count_matches_pixel_scan():
    data = replica_path().read_bytes()
    grid = load_bitmap(data, 128)
    # independent scan of the raw bytes after the 3-line header
    header_end = 0
    for _ in range(3):
        header_end = data.index(b"\n", header_end) + 1
    dark = sum(1 for b in data[header_end:] if b < 128)
    assert (grid.width, grid.height) == (400, 400)
    assert grid.obstacle_count == dark > 0


def test_committed_fixture_matches_generator():
    assert load_bitmap(replica_path().read_bytes()) == generate_replica()


@given(st.integers(0, 2**32 - 1), st.integers(1, 20), st.integers(1, 20))
def test_binarization_idempotent(seed, w, h):
    grid = random_grid(seed, w, h, 0.3)
    again = load_bitmap(to_pgm(grid))
    assert again == grid
    assert to_pgm(again) == to_pgm(grid)


def test_dump_format():
    grid = OccupancyGrid.from_strings(["#..", ".#."])
    assert dump_grid(grid) == "#..\n.#.\n"
    assert OccupancyGrid.from_strings(dump_grid(grid)) == grid


def test_grid_rejects_bad_construction():
    with pytest.raises(ValueError):
        OccupancyGrid(np.zeros((0, 3), bool))
    with pytest.raises(ValueError):
        OccupancyGrid(np.zeros((2, 2), bool), cell_size=0)
    grid = OccupancyGrid.empty(2, 2)
    with pytest.raises(ValueError):
        grid.cells[0, 0] = True


# --- occupancy -----------------------------------------------------------


def test_is_occupied_cases():
    grid = OccupancyGrid.from_strings(["#.", ".."])
    assert is_occupied(grid, Cell(0, 0))
    assert not is_occupied(grid, Cell(1, 1))
    assert is_occupied(grid, Cell(-1, 0))
    assert is_occupied(grid, Cell(2, 0))
    assert is_occupied(grid, Cell(0, 2))


# --- distance field ------------------------------------------------------


def test_distance_single_obstacle():
    cells = np.zeros((11, 11), bool)
    cells[5, 5] = True
    field = build_distance_field(OccupancyGrid(cells, cell_size=2.0))
    assert field.at((5, 7)) == 2.0 * 2.0
    assert field.at((5, 5)) == 0.0
    assert field.nearest_obstacle((0, 0)) == Cell(5, 5)


def test_distance_no_obstacles_is_beyond_any_radius():
    field = build_distance_field(OccupancyGrid.empty(4, 3))
    assert np.all(np.isinf(field.distance))
    assert field.query((1.5, 1.5)) == (math.inf, None)


@pytest.mark.parametrize("seed", range(10))
def test_distance_matches_brute_force(seed):
    grid = random_grid(1000 + seed, 32, 32, density=0.05 + 0.02 * seed)
    field = build_distance_field(grid)
    assert np.array_equal(field.distance, brute_distance(grid))


def test_distance_nearest_tie_break_lowest_row_col():
    grid = OccupancyGrid.from_strings([".#.", "...", ".#.", "#.#"])
    field = build_distance_field(grid)
    # cell (1,1) is equidistant from (1,0) and (1,2): lowest row wins
    assert field.nearest_obstacle((1, 1)) == Cell(1, 0)
    # cell (1,3) sees (0,3), (2,3) and (1,2) all at distance 1: row 2 first
    assert field.nearest_obstacle((1, 3)) == Cell(1, 2)
    # cell (0,2): (1,2) at 1 and (0,3) at 1: row 2 first
    assert field.nearest_obstacle((0, 2)) == Cell(1, 2)


@given(st.integers(0, 2**32 - 1), st.integers(2, 40), st.integers(2, 40), st.sampled_from([0.5, 1.0, 3.0]))
def test_distance_field_properties(seed, w, h, cs):
    grid = random_grid(seed, w, h, 0.1, cs)
    if grid.obstacle_count == 0:
        return
    field = build_distance_field(grid)
    d = field.distance
    assert np.all(d[grid.cells] == 0)
    assert np.all(d[~grid.cells] >= cs)
    lim = cs * math.sqrt(2) + 1e-9
    assert np.all(np.abs(np.diff(d, axis=0)) <= lim)
    assert np.all(np.abs(np.diff(d, axis=1)) <= lim)
    assert np.all(np.abs(d[1:, 1:] - d[:-1, :-1]) <= lim)
    assert np.all(np.abs(d[1:, :-1] - d[:-1, 1:]) <= lim)
    # recorded nearest obstacle is an obstacle at the recorded distance
    rr, cc = field.nearest[..., 0], field.nearest[..., 1]
    assert grid.cells[rr, cc].all()
    rows, cols = np.mgrid[0:h, 0:w]
    assert np.array_equal(np.sqrt((rr - rows) ** 2 + (cc - cols) ** 2) * cs, d)


def test_field_query_equals_cell_value_at_centers(replica_grid, replica_field):
    rng = random.Random(7)
    for _ in range(300):
        c, r = rng.randrange(400), rng.randrange(400)
        d, _ = replica_field.query(cell_center(replica_grid, (c, r)))
        assert d == replica_field.at((c, r))


# --- line of sight -------------------------------------------------------


def test_los_point_segment_on_free_cell():
    grid = OccupancyGrid.empty(3, 3)
    assert line_of_sight(grid, (1.5, 1.5), (1.5, 1.5))


def test_los_blocked_by_single_cell():
    grid = OccupancyGrid.from_strings(["......", "...#..", "......"])
    assert not line_of_sight(grid, (0.5, 1.5), (5.5, 1.5))
    assert line_of_sight(grid, (0.5, 0.5), (5.5, 0.5))


def test_los_rejects_corner_squeeze():
    grid = OccupancyGrid.from_strings([".#", "#."])
    assert not line_of_sight(grid, (0.5, 0.5), (1.5, 1.5))
    grid = OccupancyGrid.from_strings(["..", "#."])
    # diagonal through the shared vertex touches the corner cell
    assert not line_of_sight(grid, (0.5, 0.5), (1.5, 1.5))


def test_los_leaving_map_is_blocked():
    grid = OccupancyGrid.empty(4, 4)
    assert not line_of_sight(grid, (1.5, 1.5), (5.0, 1.5))
    assert not line_of_sight(grid, (0.0, 1.5), (2.5, 1.5))


def test_supercover_includes_vertex_cells():
    grid = OccupancyGrid.empty(4, 4)
    cells = set(supercover_cells(grid, (0.5, 0.5), (2.5, 2.5)))
    assert cells == {(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)}


def test_los_against_dense_sampling_and_exact_oracle():
    grid = random_grid(42, 64, 64, 0.03)
    rng = random.Random(3)
    disagreements = 0
    for _ in range(100):
        p = (rng.uniform(0, 64), rng.uniform(0, 64))
        q = (rng.uniform(0, 64), rng.uniform(0, 64))
        los = line_of_sight(grid, p, q)
        sampled_blocked = sampled_hits_obstacle(grid, p, q)
        # anything the sampler sees, the supercover sees
        if sampled_blocked:
            assert not los
        exact_blocked = any(
            segment_touches_square(p, q, c, r) for r, c in np.argwhere(grid.cells)
        )
        assert los == (not exact_blocked)
        disagreements += los == sampled_blocked
    # quarter-cell sampling only misses thin corner clips
    assert disagreements <= 10


@given(st.integers(0, 2**32 - 1), st.lists(st.floats(0, 24, allow_nan=False), min_size=4, max_size=4))
def test_los_symmetric_and_covers_samples(seed, coords):
    grid = random_grid(seed, 24, 24, 0.08)
    p, q = tuple(coords[:2]), tuple(coords[2:])
    assert line_of_sight(grid, p, q) == line_of_sight(grid, q, p)
    cover = set(supercover_cells(grid, p, q))
    assert sampled_cells(grid, p, q, 0.05) <= cover


def test_los_respects_cell_size():
    grid = OccupancyGrid.from_strings(["...", ".#.", "..."], cell_size=10.0)
    assert not line_of_sight(grid, (5, 15), (25, 15))
    assert line_of_sight(grid, (5, 5), (25, 5))
