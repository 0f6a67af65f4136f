"""End-to-end planners (plain A* and the A* + key nodes + APF fusion),
path metrics and the baseline-vs-fusion comparison harness."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field, replace

from .apf import ApfConfig, Outcome, apf_segment, apf_track
from .astar import Connectivity, Heuristic, HeuristicKind, PlanningError, astar_search
from .gridmap import Cell, DistanceField, OccupancyGrid, Point, build_distance_field
from .prune import extract_key_nodes


@dataclass(frozen=True)
class PlannerConfig:
    heuristic: HeuristicKind = HeuristicKind.EUCLIDEAN
    weight: float = 1.0
    connectivity: Connectivity = Connectivity.EIGHT
    # heuristic weight of the preliminary search in the fusion arm; None = weight
    fusion_weight: float | None = 1.5
    apf: ApfConfig | None = None  # None: ApfConfig.for_cell_size(grid.cell_size)
    inflation: float = 0.0
    repeat: int = 5

    def __post_init__(self):
        object.__setattr__(self, "heuristic", HeuristicKind(self.heuristic))
        object.__setattr__(self, "connectivity", Connectivity.parse(self.connectivity))
        Heuristic(self.heuristic, self.weight)
        if self.fusion_weight is not None:
            Heuristic(self.heuristic, self.fusion_weight)
        if not self.inflation >= 0:
            raise ValueError(f"inflation must be >= 0, got {self.inflation}")
        if not (isinstance(self.repeat, int) and self.repeat >= 1):
            raise ValueError(f"repeat must be a positive integer, got {self.repeat!r}")

    def baseline_heuristic(self) -> Heuristic:
        return Heuristic(self.heuristic, self.weight)

    def fusion_heuristic(self) -> Heuristic:
        w = self.weight if self.fusion_weight is None else self.fusion_weight
        return Heuristic(self.heuristic, w)

    def apf_for(self, grid: OccupancyGrid) -> ApfConfig:
        return self.apf if self.apf is not None else ApfConfig.for_cell_size(grid.cell_size)


@dataclass(frozen=True)
class PlanReport:
    planner: str
    source: Cell
    goal: Cell
    path: tuple
    path_length: float
    running_time: float
    expansions: int
    max_turn_angle: float
    heuristic: str
    weight: float
    admissible: bool
    segment_outcomes: tuple = ()
    key_nodes: tuple = ()
    width: int = 0
    height: int = 0
    cell_size: float = 1.0


@dataclass(frozen=True)
class CaseSpec:
    source: Cell
    goal: Cell
    label: str

    def __post_init__(self):
        object.__setattr__(self, "source", Cell(*map(int, self.source)))
        object.__setattr__(self, "goal", Cell(*map(int, self.goal)))


# source/goal pairs in (x, y) = (col, row) pixels
REPLICA_CASES = (
    CaseSpec((25, 25), (180, 280), "1"),
    CaseSpec((25, 25), (280, 340), "2"),
    CaseSpec((25, 25), (250, 340), "3"),
    CaseSpec((25, 25), (330, 250), "4"),
    CaseSpec((25, 25), (270, 310), "5"),
    CaseSpec((25, 25), (320, 170), "6"),
)


def path_length(path) -> float:
    total = 0.0
    for a, b in zip(path, path[1:]):
        total += math.hypot(b[0] - a[0], b[1] - a[1])
    return total


def max_turn_angle(path) -> float:
    """Largest absolute heading change (degrees) at any interior waypoint.

    Zero-length segments are skipped so repeated points add no spurious turns.
    """
    pts = [path[0]] if path else []
    for p in path[1:]:
        if p[0] != pts[-1][0] or p[1] != pts[-1][1]:
            pts.append(p)
    worst = 0.0
    for a, b, c in zip(pts, pts[1:], pts[2:]):
        ux, uy = b[0] - a[0], b[1] - a[1]
        vx, vy = c[0] - b[0], c[1] - b[1]
        ang = abs(math.degrees(math.atan2(ux * vy - uy * vx, ux * vx + uy * vy)))
        worst = max(worst, ang)
    return worst


def _centers(grid: OccupancyGrid, cells) -> list[Point]:
    cs = grid.cell_size
    return [Point((c + 0.5) * cs, (r + 0.5) * cs) for c, r in cells]


def plan_conventional(grid: OccupancyGrid, source, goal, cfg: PlannerConfig = PlannerConfig()) -> PlanReport:
    """Plain A* between cell centers, no pruning or smoothing."""
    heur = cfg.baseline_heuristic()
    t0 = time.perf_counter()
    result = astar_search(grid, source, goal, heur, cfg.connectivity)
    path = _centers(grid, result.cells)
    elapsed = time.perf_counter() - t0
    return PlanReport(
        planner="conventional",
        source=Cell(*source),
        goal=Cell(*goal),
        path=tuple(path),
        path_length=path_length(path),
        running_time=elapsed,
        expansions=result.expansions,
        max_turn_angle=max_turn_angle(path),
        heuristic=heur.kind.value,
        weight=heur.weight,
        admissible=heur.admissible(cfg.connectivity),
        width=grid.width,
        height=grid.height,
        cell_size=grid.cell_size,
    )


def plan_fusion(
    grid: OccupancyGrid,
    source,
    goal,
    cfg: PlannerConfig = PlannerConfig(),
    field: DistanceField | None = None,
) -> PlanReport:
    """Preliminary A*, key-node pruning, then APF between consecutive key nodes.

    Segments that stall, cap out or would collide are replaced by the straight
    chord, which pruning already proved clear. Pass a prebuilt ``field`` to
    keep the once-per-map distance transform out of the timing.
    """
    heur = cfg.fusion_heuristic()
    apf_cfg = cfg.apf_for(grid)
    t0 = time.perf_counter()
    if field is None:
        field = build_distance_field(grid)
    result = astar_search(grid, source, goal, heur, cfg.connectivity)
    keys = extract_key_nodes(grid, _centers(grid, result.cells), cfg.inflation)
    path, outcomes = _smooth(grid, field, keys, apf_cfg)
    elapsed = time.perf_counter() - t0
    return PlanReport(
        planner="fusion",
        source=Cell(*source),
        goal=Cell(*goal),
        path=tuple(path),
        path_length=path_length(path),
        running_time=elapsed,
        expansions=result.expansions,
        max_turn_angle=max_turn_angle(path),
        heuristic=heur.kind.value,
        weight=heur.weight,
        admissible=heur.admissible(cfg.connectivity),
        segment_outcomes=tuple(outcomes),
        key_nodes=tuple(keys),
        width=grid.width,
        height=grid.height,
        cell_size=grid.cell_size,
    )


def _smooth(grid, field, keys, apf_cfg):
    n_pairs = len(keys) - 1
    if apf_cfg.lookahead > 0 and n_pairs > 0:
        track = apf_track(keys, field, grid, apf_cfg)
        if track.outcome is Outcome.REACHED:
            return [keys[0], *track.waypoints], [Outcome.REACHED.value] * n_pairs
    # pairwise walk between key nodes, straight chord where APF fails
    path = [keys[0]]
    outcomes = []
    for a, b in zip(keys, keys[1:]):
        seg = apf_segment(a, b, field, grid, apf_cfg)
        outcomes.append(seg.outcome.value)
        if seg.outcome is Outcome.REACHED:
            path.extend(seg.waypoints)
        else:
            path.append(b)
    return path, outcomes


@dataclass
class ComparisonRow:
    label: str
    baseline_time: float = math.nan
    baseline_length: float = math.nan
    fusion_time: float = math.nan
    fusion_length: float = math.nan
    pct_time_reduction: float = math.nan
    pct_length_reduction: float = math.nan
    baseline_turn: float = math.nan
    fusion_turn: float = math.nan
    error: str = ""
    baseline: PlanReport | None = field(default=None, repr=False)
    fusion: PlanReport | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return not self.error


def pct_reduction(baseline: float, treated: float) -> float:
    return 100.0 * (baseline - treated) / baseline if baseline else 0.0


def _timed(fn, repeat: int) -> PlanReport:
    reports = [fn() for _ in range(repeat)]
    median = statistics.median(r.running_time for r in reports)
    return replace(reports[0], running_time=median)


def compare(
    grid: OccupancyGrid,
    cases,
    cfg: PlannerConfig = PlannerConfig(),
    *,
    fusion: bool = True,
    field: DistanceField | None = None,
) -> list[ComparisonRow]:
    """Baseline A* vs fusion per case; running times are medians of
    ``cfg.repeat`` sequential runs. With ``fusion=False`` both arms run the
    baseline planner. A failing case is recorded in its row and skipped."""
    if fusion and field is None:
        field = build_distance_field(grid)
    rows = []
    for case in cases:
        row = ComparisonRow(case.label)
        try:
            base = _timed(lambda: plan_conventional(grid, case.source, case.goal, cfg), cfg.repeat)
            if fusion:
                treat = _timed(lambda: plan_fusion(grid, case.source, case.goal, cfg, field), cfg.repeat)
            else:
                treat = _timed(lambda: plan_conventional(grid, case.source, case.goal, cfg), cfg.repeat)
        except PlanningError as exc:
            row.error = f"{type(exc).__name__}: {exc}"
            rows.append(row)
            continue
        row.baseline, row.fusion = base, treat
        row.baseline_time, row.baseline_length = base.running_time, base.path_length
        row.fusion_time, row.fusion_length = treat.running_time, treat.path_length
        row.baseline_turn, row.fusion_turn = base.max_turn_angle, treat.max_turn_angle
        row.pct_time_reduction = pct_reduction(base.running_time, treat.running_time)
        row.pct_length_reduction = pct_reduction(base.path_length, treat.path_length)
        rows.append(row)
    return rows
