"""Sweep APF repulsion strength and look-ahead on the replica cases.

    python scripts/sweep_apf.py [--a 0.5 2 8 50] [--lookahead 0 1.5 3 6]

For each setting reports the worst fusion turn angle, the mean length change
against the conventional path, and how many key-node pairs fell back to the
straight chord. Timing is not measured here.
"""

import argparse
import itertools
import statistics

from fusionplan.apf import ApfConfig
from fusionplan.fusion import REPLICA_CASES, PlannerConfig, pct_reduction, plan_conventional, plan_fusion
from fusionplan.gridmap import build_distance_field
from fusionplan.replica import load_replica


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, nargs="+", default=[0.5, 2.0, 8.0, 50.0])
    ap.add_argument("--lookahead", type=float, nargs="+", default=[0.0, 1.5, 3.0, 6.0])
    ap.add_argument("--rho0", type=float, default=10.0)
    args = ap.parse_args()

    grid = load_replica()
    field = build_distance_field(grid)
    base_cfg = PlannerConfig(repeat=1)
    conventional = {c.label: plan_conventional(grid, c.source, c.goal, base_cfg) for c in REPLICA_CASES}
    print(f"{'a':>6} {'lookahead':>9} {'max turn':>9} {'mean len red.%':>15} {'fallbacks':>9}")
    for a, look in itertools.product(args.a, args.lookahead):
        apf = ApfConfig.for_cell_size(grid.cell_size, a=a, lookahead=look, rho0=args.rho0)
        cfg = PlannerConfig(repeat=1, apf=apf)
        turns, reds, fallbacks = [], [], 0
        for case in REPLICA_CASES:
            rep = plan_fusion(grid, case.source, case.goal, cfg, field)
            turns.append(rep.max_turn_angle)
            reds.append(pct_reduction(conventional[case.label].path_length, rep.path_length))
            fallbacks += sum(o != "reached" for o in rep.segment_outcomes)
        print(f"{a:>6g} {look:>9g} {max(turns):>9.1f} {statistics.mean(reds):>15.2f} {fallbacks:>9d}")


if __name__ == "__main__":
    main()
