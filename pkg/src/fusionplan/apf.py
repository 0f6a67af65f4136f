"""Artificial potential field stepping between consecutive local goals.

Forces used directly (no scalar potential):

* attraction ``F_att = G * d_g`` with ``d_g`` the vector from the current
  point to the local goal;
* repulsion, active only while the obstacle distance ``d0 <= rho0``::

      F_r1 = a (1/d0 - 1/rho0) d_g**n / d0**2      along n0 (obstacle -> point)
      F_r2 = n a / 2 (1/d0 - 1/rho0)**2 d_g**(n-1) along ng (point -> goal)

The F_r1 numerator carries ``d_g**n``; it is the printed ``d_g**2`` at the
default ``n = 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

from .gridmap import DistanceField, OccupancyGrid, Point, line_of_sight, point_occupied

F_MIN = 1e-9


class ForceVector(NamedTuple):
    fx: float
    fy: float

    @property
    def magnitude(self) -> float:
        return math.hypot(self.fx, self.fy)

    def __add__(self, other):
        return ForceVector(self.fx + other[0], self.fy + other[1])

    def scale(self, k: float) -> "ForceVector":
        return ForceVector(self.fx * k, self.fy * k)


ZERO = ForceVector(0.0, 0.0)


class Outcome(str, Enum):
    REACHED = "reached"
    CAPPED = "capped"
    STALLED = "stalled"
    # a step would have entered an obstacle cell
    BLOCKED = "blocked"


@dataclass(frozen=True)
class ApfConfig:
    G: float = 1.0
    a: float = 2.0
    rho0: float = 10.0
    n: int = 2
    step_size: float = 0.5
    goal_tolerance: float = 1.0
    max_steps: int | None = None  # None: 10 * chord / step_size per segment
    f_min: float = F_MIN
    d_min: float = 1e-3
    # distance the tracked local goal runs ahead along the key-node polyline; 0 = off
    lookahead: float = 3.0

    def __post_init__(self):
        checks = [
            ("G", self.G > 0),
            ("a", self.a >= 0),
            ("rho0", self.rho0 > 0),
            ("n", isinstance(self.n, int) and self.n >= 1),
            ("step_size", self.step_size > 0),
            ("goal_tolerance", self.goal_tolerance > 0),
            ("max_steps", self.max_steps is None or (isinstance(self.max_steps, int) and self.max_steps >= 1)),
            ("f_min", self.f_min >= 0),
            ("d_min", self.d_min > 0),
            ("lookahead", self.lookahead >= 0),
        ]
        for name, ok in checks:
            if not ok:
                raise ValueError(f"invalid ApfConfig.{name}: {getattr(self, name)!r}")
        for name in ("G", "a", "rho0", "step_size", "goal_tolerance", "f_min", "d_min", "lookahead"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"invalid ApfConfig.{name}: {getattr(self, name)!r}")

    @classmethod
    def for_cell_size(cls, cell_size: float, **overrides) -> "ApfConfig":
        """Defaults expressed in cells, converted to cm for ``cell_size``."""
        base = cls(
            a=2.0 * cell_size**2,
            rho0=10.0 * cell_size,
            step_size=0.5 * cell_size,
            goal_tolerance=1.0 * cell_size,
            d_min=1e-3 * cell_size,
            lookahead=3.0 * cell_size,
        )
        return replace(base, **overrides)

    def steps_for(self, chord: float) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return max(1, math.ceil(10.0 * chord / self.step_size))


def attractive_force(current, local_goal, G: float) -> ForceVector:
    return ForceVector(G * (local_goal[0] - current[0]), G * (local_goal[1] - current[1]))


def repulsive_force(current, field: DistanceField, local_goal, cfg: ApfConfig) -> ForceVector:
    d0, obstacle = field.query(current)
    if obstacle is None or d0 > cfg.rho0:
        return ZERO
    gx, gy = local_goal[0] - current[0], local_goal[1] - current[1]
    dg = math.hypot(gx, gy)
    ng = (gx / dg, gy / dg) if dg > 0 else (0.0, 0.0)
    if d0 > 0:
        n0 = ((current[0] - obstacle.x) / d0, (current[1] - obstacle.y) / d0)
    else:
        # sitting on an obstacle center: push straight back from the goal
        n0 = (-ng[0], -ng[1])
    d0 = max(d0, cfg.d_min)
    k = 1.0 / d0 - 1.0 / cfg.rho0
    fr1 = cfg.a * k * dg**cfg.n / (d0 * d0)
    fr2 = cfg.n * cfg.a / 2.0 * k * k * dg ** (cfg.n - 1)
    return ForceVector(fr1 * n0[0] + fr2 * ng[0], fr1 * n0[1] + fr2 * ng[1])


def total_force(current, field: DistanceField, local_goal, cfg: ApfConfig) -> ForceVector:
    return attractive_force(current, local_goal, cfg.G) + repulsive_force(current, field, local_goal, cfg)


class SegmentResult(NamedTuple):
    waypoints: list
    outcome: Outcome
    steps: int


def apf_segment(local_source, local_goal, field: DistanceField, grid: OccupancyGrid, cfg: ApfConfig) -> SegmentResult:
    """Walk from ``local_source`` toward ``local_goal`` along the normalized force.

    Waypoints exclude the source; on ``REACHED`` the last one is the local goal
    itself. Any other outcome means the caller should fall back to the straight
    chord. A step is only taken if the segment to the new point stays clear.
    """
    goal = Point(float(local_goal[0]), float(local_goal[1]))
    p = Point(float(local_source[0]), float(local_source[1]))
    chord = math.hypot(goal.x - p.x, goal.y - p.y)
    if chord == 0.0:
        return SegmentResult([], Outcome.REACHED, 0)
    if chord <= cfg.goal_tolerance:
        return SegmentResult([goal], Outcome.REACHED, 0)
    out = []
    max_steps = cfg.steps_for(chord)
    for step in range(1, max_steps + 1):
        fx, fy = total_force(p, field, goal, cfg)
        mag = math.hypot(fx, fy)
        if mag < cfg.f_min:
            return SegmentResult(out, Outcome.STALLED, step - 1)
        q = Point(p.x + cfg.step_size * fx / mag, p.y + cfg.step_size * fy / mag)
        if point_occupied(grid, q) or not line_of_sight(grid, p, q):
            return SegmentResult(out, Outcome.BLOCKED, step - 1)
        out.append(q)
        p = q
        if math.hypot(goal.x - p.x, goal.y - p.y) <= cfg.goal_tolerance:
            if not line_of_sight(grid, p, goal):
                return SegmentResult(out, Outcome.BLOCKED, step)
            out.append(goal)
            return SegmentResult(out, Outcome.REACHED, step)
    return SegmentResult(out, Outcome.CAPPED, max_steps)


class TrackResult(NamedTuple):
    waypoints: list
    outcome: Outcome
    steps: int
    # index of the key-node segment the local goal was on when the walk ended
    segment: int


def apf_track(key_nodes, field: DistanceField, grid: OccupancyGrid, cfg: ApfConfig) -> TrackResult:
    """Walk the whole key-node polyline with a sliding local goal.

    The local goal sits ``cfg.lookahead`` ahead (in arc length) of the robot's
    projection onto the polyline, so corners are rounded over several steps
    instead of being taken at a single waypoint. Force law and step rule are
    those of :func:`apf_segment`; the walk ends within ``goal_tolerance`` of
    the final node, which is then appended.
    """
    nodes = [Point(float(k[0]), float(k[1])) for k in key_nodes]
    if len(nodes) < 2:
        return TrackResult([], Outcome.REACHED, 0, 0)
    goal = nodes[-1]
    lengths = [math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(nodes, nodes[1:])]
    starts = [0.0]
    for seg_len in lengths:
        starts.append(starts[-1] + seg_len)
    total = starts[-1]
    last_seg = len(lengths) - 1

    def point_at(s):
        j = seg
        while j < last_seg and s > starts[j + 1]:
            j += 1
        if lengths[j] == 0.0:
            return nodes[j + 1]
        t = min(max((s - starts[j]) / lengths[j], 0.0), 1.0)
        a, b = nodes[j], nodes[j + 1]
        return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))

    def project(p, j):
        a, b = nodes[j], nodes[j + 1]
        if lengths[j] == 0.0:
            return starts[j], math.hypot(p.x - a.x, p.y - a.y)
        ux, uy = (b.x - a.x) / lengths[j], (b.y - a.y) / lengths[j]
        t = min(max((p.x - a.x) * ux + (p.y - a.y) * uy, 0.0), lengths[j])
        return starts[j] + t, math.hypot(p.x - a.x - t * ux, p.y - a.y - t * uy)

    p = nodes[0]
    if total <= cfg.goal_tolerance:
        return TrackResult([goal] if total > 0 else [], Outcome.REACHED, 0, last_seg)
    out = []
    s = 0.0
    seg = 0
    max_steps = cfg.steps_for(total)
    for step in range(1, max_steps + 1):
        target = point_at(min(s + cfg.lookahead, total))
        fx, fy = total_force(p, field, target, cfg)
        mag = math.hypot(fx, fy)
        if mag < cfg.f_min:
            return TrackResult(out, Outcome.STALLED, step - 1, seg)
        q = Point(p.x + cfg.step_size * fx / mag, p.y + cfg.step_size * fy / mag)
        if point_occupied(grid, q) or not line_of_sight(grid, p, q):
            return TrackResult(out, Outcome.BLOCKED, step - 1, seg)
        out.append(q)
        p = q
        # advance the progress marker; it never moves backward
        best_s, best_d, best_j = s, math.inf, seg
        for j in range(seg, min(seg + 2, last_seg + 1)):
            sj, dj = project(p, j)
            if dj < best_d:
                best_s, best_d, best_j = sj, dj, j
        if best_s > s:
            s, seg = best_s, best_j
        if math.hypot(goal.x - p.x, goal.y - p.y) <= cfg.goal_tolerance:
            if not line_of_sight(grid, p, goal):
                return TrackResult(out, Outcome.BLOCKED, step, seg)
            out.append(goal)
            return TrackResult(out, Outcome.REACHED, step, last_seg)
    return TrackResult(out, Outcome.CAPPED, max_steps, seg)
