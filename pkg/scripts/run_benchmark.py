"""Compare conventional A* with the fusion planner on every benchmark map.

    python scripts/run_benchmark.py [--repeat 5] [--out results/] [--render]

Prints one comparison table per map. With ``--out``, writes
``<map>.csv`` (and ``<map>-<case>.svg`` with ``--render``) there.
"""

import argparse
import statistics
import time
from pathlib import Path

from fusionplan.benchmarks import benchmark_suite
from fusionplan.fusion import PlannerConfig, compare
from fusionplan.gridmap import build_distance_field
from fusionplan.render import render_svg
from fusionplan.reports import comparison_csv, comparison_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions per planner (median)")
    ap.add_argument("--fusion-weight", type=float, default=1.5)
    ap.add_argument("--maps", nargs="*", help="subset of map names")
    ap.add_argument("--out", type=Path)
    ap.add_argument("--render", action="store_true")
    args = ap.parse_args()

    cfg = PlannerConfig(repeat=args.repeat, fusion_weight=args.fusion_weight)
    for bench in benchmark_suite():
        if args.maps and bench.name not in args.maps:
            continue
        t0 = time.perf_counter()
        rows = compare(bench.grid, bench.cases, cfg, field=build_distance_field(bench.grid))
        ok = [r for r in rows if r.ok]
        print(f"== {bench.name} ({bench.grid.width}x{bench.grid.height}, {time.perf_counter() - t0:.1f} s)")
        print(comparison_table(rows), end="")
        if ok:
            print(
                f"median time reduction {statistics.median(r.pct_time_reduction for r in ok):.2f}%, "
                f"median length reduction {statistics.median(r.pct_length_reduction for r in ok):.2f}%\n"
            )
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{bench.name}.csv").write_text(comparison_csv(rows))
            if args.render:
                for r in ok:
                    svg = render_svg(bench.grid, [r.baseline, r.fusion])
                    (args.out / f"{bench.name}-{r.label}.svg").write_text(svg)


if __name__ == "__main__":
    main()
