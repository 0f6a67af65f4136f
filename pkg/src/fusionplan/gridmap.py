"""Occupancy grids built from portable bitmaps, plus the geometric queries the
planners need: occupancy tests, supercover line of sight and an exact
Euclidean distance field with nearest-obstacle indices.

Coordinates: ``x`` grows rightward along columns, ``y`` grows downward along
rows, origin at the top-left corner of the image. A continuous point
``(x, y)`` in cm lies in cell ``(floor(x / cell_size), floor(y / cell_size))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_THRESHOLD = 128

# Slack (in cell units) when rasterizing segments; errs toward touching more cells.
_LOS_EPS = 1e-9


class BitmapError(ValueError):
    """Malformed or truncated portable bitmap payload."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class Cell(NamedTuple):
    col: int
    row: int


class Point(NamedTuple):
    x: float
    y: float


class OccupancyGrid:
    """Immutable binary occupancy grid.

    ``cells`` has shape ``(height, width)``; ``True`` marks an obstacle.
    """

    __slots__ = ("cells", "cell_size", "_col_cumsum", "_blocked")

    def __init__(self, cells, cell_size: float = 1.0):
        arr = np.array(cells, dtype=bool, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"grid must be a non-empty 2D array, got shape {arr.shape}")
        if not (cell_size > 0 and math.isfinite(cell_size)):
            raise ValueError(f"cell_size must be positive, got {cell_size}")
        arr.flags.writeable = False
        self.cells = arr
        self.cell_size = float(cell_size)
        # obstacle counts of rows [0, r) per column; used for O(1) strip queries
        cum = np.zeros((arr.shape[0] + 1, arr.shape[1]), dtype=np.int32)
        np.cumsum(arr, axis=0, out=cum[1:])
        cum.flags.writeable = False
        self._col_cumsum = cum
        self._blocked = arr.tobytes()

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def obstacle_count(self) -> int:
        return int(self.cells.sum())

    def __eq__(self, other):
        if not isinstance(other, OccupancyGrid):
            return NotImplemented
        return self.cell_size == other.cell_size and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.cells.shape, self.cell_size, self._blocked))

    def __repr__(self):
        return (
            f"OccupancyGrid(width={self.width}, height={self.height}, "
            f"obstacles={self.obstacle_count}, cell_size={self.cell_size})"
        )

    def blocked_bytes(self) -> bytes:
        """Row-major occupancy, one byte per cell (1 = obstacle)."""
        return self._blocked

    @classmethod
    def empty(cls, width: int, height: int, cell_size: float = 1.0) -> "OccupancyGrid":
        return cls(np.zeros((height, width), dtype=bool), cell_size)

    @classmethod
    def from_strings(cls, rows, cell_size: float = 1.0) -> "OccupancyGrid":
        """Build from rows of '.' (free) and '#' (obstacle)."""
        if isinstance(rows, str):
            rows = rows.split()
        rows = [r for r in rows if r]
        if len({len(r) for r in rows}) != 1:
            raise ValueError("ragged rows")
        bad = set("".join(rows)) - {".", "#"}
        if bad:
            raise ValueError(f"unexpected characters {sorted(bad)}")
        return cls([[ch == "#" for ch in r] for r in rows], cell_size)


def is_occupied(grid: OccupancyGrid, cell) -> bool:
    """True for obstacle cells and for anything outside the image."""
    col, row = cell
    if col < 0 or row < 0 or col >= grid.width or row >= grid.height:
        return True
    return bool(grid.cells[row, col])


def cell_of(grid: OccupancyGrid, p) -> Cell:
    return Cell(math.floor(p[0] / grid.cell_size), math.floor(p[1] / grid.cell_size))


def cell_center(grid: OccupancyGrid, cell) -> Point:
    cs = grid.cell_size
    return Point((cell[0] + 0.5) * cs, (cell[1] + 0.5) * cs)


def point_occupied(grid: OccupancyGrid, p) -> bool:
    return is_occupied(grid, cell_of(grid, p))


def dump_grid(grid: OccupancyGrid) -> str:
    """Debug dump: one line per row, '#' obstacle, '.' free."""
    lut = np.array([".", "#"])
    return "".join("".join(lut[row.astype(int)]) + "\n" for row in grid.cells)


# --------------------------------------------------------------------------
# portable bitmap I/O
# --------------------------------------------------------------------------

_WHITESPACE = b" \t\n\r\v\f"


class _HeaderReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos : self.pos + 1]
            if ch == b"#":
                nl = data.find(b"\n", self.pos)
                self.pos = len(data) if nl < 0 else nl + 1
            elif ch in _WHITESPACE:
                self.pos += 1
            else:
                break

    def integer(self, what: str) -> int:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            if start >= len(self.data):
                raise BitmapError(f"truncated header: missing {what}", start)
            raise BitmapError(f"expected integer {what}", start)
        return int(self.data[start : self.pos])


def read_bitmap(image_bytes: bytes) -> np.ndarray:
    """Decode a P1/P2/P4/P5 payload into a uint8 gray image (0 black, 255 white)."""
    data = bytes(image_bytes)
    if len(data) < 2:
        raise BitmapError("truncated header: missing magic number", 0)
    magic = data[:2]
    if magic not in (b"P1", b"P2", b"P4", b"P5"):
        raise BitmapError(f"unsupported magic number {magic!r}", 0)
    rd = _HeaderReader(data)
    rd.pos = 2
    width = rd.integer("width")
    width_at = rd.pos
    height = rd.integer("height")
    if width == 0 or height == 0:
        raise BitmapError(f"zero image dimension {width}x{height}", width_at if width == 0 else rd.pos)
    is_pbm = magic in (b"P1", b"P4")
    maxval = 1
    if not is_pbm:
        maxval = rd.integer("maxval")
        if not 1 <= maxval <= 255:
            raise BitmapError(f"maxval {maxval} outside 1..255", rd.pos)
    npix = width * height

    if magic in (b"P4", b"P5"):
        # exactly one whitespace byte separates the header from raster data
        if rd.pos >= len(data) or data[rd.pos : rd.pos + 1] not in _WHITESPACE:
            raise BitmapError("missing whitespace before raster data", rd.pos)
        start = rd.pos + 1
        if magic == b"P5":
            need = npix
            raw = np.frombuffer(data, dtype=np.uint8, count=min(need, max(len(data) - start, 0)), offset=start) \
                if start <= len(data) else np.empty(0, np.uint8)
            if raw.size < need:
                raise BitmapError(f"truncated raster: need {need} bytes, have {raw.size}", len(data))
            pixels = raw.reshape(height, width).astype(np.int32)
            if pixels.max() > maxval:
                bad = int(np.argmax(pixels.ravel() > maxval))
                raise BitmapError(f"pixel value exceeds maxval {maxval}", start + bad)
        else:
            stride = (width + 7) // 8
            need = stride * height
            avail = len(data) - start
            if avail < need:
                raise BitmapError(f"truncated raster: need {need} bytes, have {max(avail, 0)}", len(data))
            packed = np.frombuffer(data, dtype=np.uint8, count=need, offset=start).reshape(height, stride)
            pixels = np.unpackbits(packed, axis=1)[:, :width].astype(np.int32)
    else:
        values = []
        pos = rd.pos
        n = len(data)
        if is_pbm:
            # plain PBM digits need not be separated by whitespace
            while len(values) < npix:
                while pos < n and (data[pos : pos + 1] in _WHITESPACE or data[pos : pos + 1] == b"#"):
                    if data[pos : pos + 1] == b"#":
                        nl = data.find(b"\n", pos)
                        pos = n if nl < 0 else nl + 1
                    else:
                        pos += 1
                if pos >= n:
                    raise BitmapError(f"truncated raster: got {len(values)} of {npix} pixels", pos)
                ch = data[pos : pos + 1]
                if ch not in (b"0", b"1"):
                    raise BitmapError(f"invalid plain bitmap digit {ch!r}", pos)
                values.append(int(ch))
                pos += 1
        else:
            rd.pos = pos
            while len(values) < npix:
                rd.skip_space()
                if rd.pos >= n:
                    raise BitmapError(f"truncated raster: got {len(values)} of {npix} pixels", rd.pos)
                at = rd.pos
                v = rd.integer("pixel value")
                if v > maxval:
                    raise BitmapError(f"pixel value {v} exceeds maxval {maxval}", at)
                values.append(v)
        pixels = np.array(values, dtype=np.int32).reshape(height, width)

    if is_pbm:
        return np.where(pixels == 1, 0, 255).astype(np.uint8)
    if maxval != 255:
        pixels = np.rint(pixels * (255.0 / maxval))
    return pixels.astype(np.uint8)


def load_bitmap(image_bytes: bytes, threshold: int = DEFAULT_THRESHOLD, cell_size: float = 1.0) -> OccupancyGrid:
    """Binarize a portable bitmap/graymap: gray < threshold is an obstacle."""
    if not 0 <= threshold <= 256:
        raise ValueError(f"threshold must be within 0..256, got {threshold}")
    gray = read_bitmap(image_bytes)
    return OccupancyGrid(gray < threshold, cell_size)


def load_bitmap_file(path, threshold: int = DEFAULT_THRESHOLD, cell_size: float = 1.0) -> OccupancyGrid:
    with open(path, "rb") as fh:
        return load_bitmap(fh.read(), threshold, cell_size)


def to_pgm(grid: OccupancyGrid) -> bytes:
    """Encode as raw graymap: obstacles 0, free space 255."""
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    return header + np.where(grid.cells, 0, 255).astype(np.uint8).tobytes()


# --------------------------------------------------------------------------
# line of sight
# --------------------------------------------------------------------------


def supercover_cells(grid: OccupancyGrid, p, q) -> list[Cell]:
    """Every cell whose closed square touches segment p-q (corner grazes included).

    Cells may lie outside the grid.
    """
    out = []
    for c, r0, r1 in _strips(grid, p, q):
        out.extend(Cell(int(c), r) for r in range(int(r0), int(r1) + 1))
    return out


def _strips(grid: OccupancyGrid, p, q):
    """Column strips ``(col, row_lo, row_hi)`` covering the closed segment."""
    cs = grid.cell_size
    x0, y0 = p[0] / cs, p[1] / cs
    x1, y1 = q[0] / cs, q[1] / cs
    if x1 < x0:
        x0, y0, x1, y1 = x1, y1, x0, y0
    c_lo = math.ceil(x0 - 1.0 - _LOS_EPS)
    c_hi = math.floor(x1 + _LOS_EPS)
    cols = np.arange(c_lo, c_hi + 1)
    if x1 == x0:
        ya = np.full(cols.shape, min(y0, y1))
        yb = np.full(cols.shape, max(y0, y1))
    else:
        slope = (y1 - y0) / (x1 - x0)
        xa = np.clip(cols, x0, x1)
        xb = np.clip(cols + 1.0, x0, x1)
        ya_ = y0 + (xa - x0) * slope
        yb_ = y0 + (xb - x0) * slope
        ya = np.minimum(ya_, yb_)
        yb = np.maximum(ya_, yb_)
    r_lo = np.ceil(ya - 1.0 - _LOS_EPS).astype(np.int64)
    r_hi = np.floor(yb + _LOS_EPS).astype(np.int64)
    return zip(cols, r_lo, r_hi)


def line_of_sight(grid: OccupancyGrid, p, q) -> bool:
    """True iff no cell touched by the closed segment p-q is an obstacle.

    Touching the outside of the image counts as blocked.
    """
    if not all(map(math.isfinite, (p[0], p[1], q[0], q[1]))):
        raise ValueError("line_of_sight needs finite endpoints")
    cs = grid.cell_size
    x0, y0 = p[0] / cs, p[1] / cs
    x1, y1 = q[0] / cs, q[1] / cs
    if x1 < x0:
        x0, y0, x1, y1 = x1, y1, x0, y0
    c_lo = math.ceil(x0 - 1.0 - _LOS_EPS)
    c_hi = math.floor(x1 + _LOS_EPS)
    if c_lo < 0 or c_hi >= grid.width:
        return False
    cum = grid._col_cumsum
    h = grid.height
    if c_hi - c_lo <= 2:
        # short segments: scalar path avoids numpy call overhead
        for c in range(c_lo, c_hi + 1):
            if x1 == x0:
                ya, yb = min(y0, y1), max(y0, y1)
            else:
                slope = (y1 - y0) / (x1 - x0)
                xa = min(max(c, x0), x1)
                xb = min(max(c + 1.0, x0), x1)
                ya = y0 + (xa - x0) * slope
                yb = y0 + (xb - x0) * slope
                if ya > yb:
                    ya, yb = yb, ya
            r_lo = math.ceil(ya - 1.0 - _LOS_EPS)
            r_hi = math.floor(yb + _LOS_EPS)
            if r_lo < 0 or r_hi >= h:
                return False
            if cum[r_hi + 1, c] - cum[r_lo, c]:
                return False
        return True
    cols = np.arange(c_lo, c_hi + 1)
    if x1 == x0:
        ya = np.full(cols.shape, min(y0, y1))
        yb = np.full(cols.shape, max(y0, y1))
    else:
        slope = (y1 - y0) / (x1 - x0)
        xa = np.clip(cols, x0, x1)
        xb = np.clip(cols + 1.0, x0, x1)
        ya_ = y0 + (xa - x0) * slope
        yb_ = y0 + (xb - x0) * slope
        ya = np.minimum(ya_, yb_)
        yb = np.maximum(ya_, yb_)
    r_lo = np.ceil(ya - 1.0 - _LOS_EPS).astype(np.int64)
    r_hi = np.floor(yb + _LOS_EPS).astype(np.int64)
    if r_lo.min() < 0 or r_hi.max() >= h:
        return False
    return not np.any(cum[r_hi + 1, cols] - cum[r_lo, cols])


def inflate(grid: OccupancyGrid, radius_cells: float) -> OccupancyGrid:
    """Grow obstacles by ``radius_cells`` (Euclidean, measured between centers)."""
    if radius_cells <= 0 or grid.obstacle_count == 0:
        return grid
    field = build_distance_field(grid)
    return OccupancyGrid(field.distance <= radius_cells * grid.cell_size, grid.cell_size)


# --------------------------------------------------------------------------
# distance field
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Per-cell distance (cm) from each cell center to the nearest obstacle center.

    ``nearest`` holds the (row, col) of that obstacle; ties go to the lowest
    (row, col). Without obstacles every distance is ``inf`` and ``nearest`` is -1.
    """

    distance: np.ndarray
    nearest: np.ndarray
    cell_size: float

    @property
    def width(self) -> int:
        return self.distance.shape[1]

    @property
    def height(self) -> int:
        return self.distance.shape[0]

    @property
    def has_obstacles(self) -> bool:
        return bool(self.nearest[0, 0, 0] >= 0)

    def at(self, cell) -> float:
        col, row = cell
        if col < 0 or row < 0 or col >= self.width or row >= self.height:
            return 0.0
        return float(self.distance[row, col])

    def nearest_obstacle(self, cell) -> Cell | None:
        col, row = cell
        if col < 0 or row < 0 or col >= self.width or row >= self.height:
            return None
        r, c = self.nearest[row, col]
        if r < 0:
            return None
        return Cell(int(c), int(r))

    def query(self, p) -> tuple[float, Point | None]:
        """Distance from point ``p`` to its nearest obstacle center, and that center.

        Candidates are the obstacles recorded for the 3x3 cells around ``p``,
        which keeps the distance continuous as ``p`` crosses cell borders. At a
        cell center the result equals the stored cell value. Points outside
        the grid report distance 0 and no obstacle.
        """
        cs = self.cell_size
        col, row = math.floor(p[0] / cs), math.floor(p[1] / cs)
        w, h = self.width, self.height
        if col < 0 or row < 0 or col >= w or row >= h:
            return 0.0, None
        table = self._table()
        if table is None:
            return math.inf, None
        px, py = p[0], p[1]
        best = None
        for r in range(max(row - 1, 0), min(row + 2, h)):
            base = r * w
            for c in range(max(col - 1, 0), min(col + 2, w)):
                orow, ocol, ox, oy = table[base + c]
                key = (math.hypot(px - ox, py - oy), orow, ocol)
                if best is None or key < best:
                    best = key
        d, orow, ocol = best
        return d, Point((ocol + 0.5) * cs, (orow + 0.5) * cs)

    def _table(self):
        """Flat per-cell ``(row, col, x, y)`` of the nearest obstacle, built once."""
        try:
            return self._lookup
        except AttributeError:
            pass
        if self.nearest[0, 0, 0] < 0:
            table = None
        else:
            cs = self.cell_size
            rows = self.nearest[..., 0].ravel().tolist()
            cols = self.nearest[..., 1].ravel().tolist()
            table = [(r, c, (c + 0.5) * cs, (r + 0.5) * cs) for r, c in zip(rows, cols)]
        object.__setattr__(self, "_lookup", table)
        return table


def build_distance_field(grid: OccupancyGrid) -> DistanceField:
    """Exact Euclidean distance field via two separable passes.

    Pass one finds, per column, the nearest obstacle row (ties: lower row).
    Pass two minimizes over columns the lexicographic key
    (squared distance, row, col) in integer arithmetic, so distances are
    ``sqrt(integer) * cell_size`` with deterministic tie-breaking.
    """
    occ = grid.cells
    h, w = occ.shape
    if not occ.any():
        dist = np.full((h, w), np.inf)
        nearest = np.full((h, w, 2), -1, dtype=np.int64)
        dist.flags.writeable = False
        nearest.flags.writeable = False
        return DistanceField(dist, nearest, grid.cell_size)

    big = h + w + 1
    rows = np.arange(h)
    # pass 1: nearest obstacle row above (inclusive) and below per column
    above = np.where(occ, rows[:, None], -big)
    above = np.maximum.accumulate(above, axis=0)
    below = np.where(occ, rows[:, None], 2 * big)
    below = np.minimum.accumulate(below[::-1], axis=0)[::-1]
    d_above = rows[:, None] - above
    d_below = below - rows[:, None]
    use_above = d_above <= d_below
    col_row = np.where(use_above, above, below)  # nearest obstacle row in that column
    col_dy = np.where(use_above, d_above, d_below)
    has = occ.any(axis=0)

    # pass 2: lexicographic min over columns, per row
    n_cells = h * w
    cols = np.arange(w)
    dx2 = (cols[:, None] - cols[None, :]) ** 2  # [query col, source col]
    nearest = np.empty((h, w, 2), dtype=np.int64)
    sq = np.empty((h, w), dtype=np.int64)
    inf_key = np.iinfo(np.int64).max
    for r in range(h):
        dy = col_dy[r].astype(np.int64)
        key = (dx2 + dy[None, :] ** 2) * n_cells + col_row[r][None, :] * w + cols[None, :]
        key = np.where(has[None, :], key, inf_key)
        best = np.argmin(key, axis=1)
        nearest[r, :, 0] = col_row[r][best]
        nearest[r, :, 1] = best
        sq[r] = dx2[cols, best] + dy[best] ** 2
    dist = np.sqrt(sq.astype(np.float64)) * grid.cell_size
    dist.flags.writeable = False
    nearest.flags.writeable = False
    return DistanceField(dist, nearest, grid.cell_size)
