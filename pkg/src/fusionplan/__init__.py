"""Grid path planning with A*, key-node pruning and artificial potential fields."""

from .apf import ApfConfig, ForceVector, Outcome, apf_segment, apf_track, attractive_force, repulsive_force, total_force
from .astar import (
    Connectivity,
    EndpointError,
    Heuristic,
    HeuristicKind,
    NoPathError,
    PlanningError,
    astar_search,
    euclidean,
    manhattan,
)
from .fusion import (
    REPLICA_CASES,
    CaseSpec,
    ComparisonRow,
    PlannerConfig,
    PlanReport,
    compare,
    max_turn_angle,
    path_length,
    plan_conventional,
    plan_fusion,
)
from .gridmap import (
    BitmapError,
    Cell,
    DistanceField,
    OccupancyGrid,
    Point,
    build_distance_field,
    is_occupied,
    line_of_sight,
    load_bitmap,
)
from .prune import extract_key_nodes

__version__ = "0.1.0"
