"""Command-line front end: ``plan``, ``compare`` and ``render``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import replica
from .astar import EndpointError, NoPathError, astar_search, format_trace
from .config import ConfigError, build_config, dump_config, parse_cases, parse_cell
from .fusion import REPLICA_CASES, compare, plan_conventional, plan_fusion
from .gridmap import BitmapError, build_distance_field, load_bitmap
from .render import RenderError, render_svg
from .reports import ReportFormatError, comparison_csv, comparison_table, dump_report, load_report

log = logging.getLogger("fusionplan")

EXIT_OK = 0
EXIT_CONFIG = 2  # malformed flags or config file (argparse uses 2 as well)
EXIT_IO = 3  # missing or unreadable input file
EXIT_BAD_MAP = 4  # map file is not a valid portable bitmap
EXIT_ENDPOINT = 5  # source/goal outside the map or on an obstacle
EXIT_NO_PATH = 6  # goal unreachable
EXIT_CASE_FAILED = 7  # compare: at least one case failed
EXIT_MISMATCH = 8  # render: report and map dimensions differ
EXIT_BAD_REPORT = 9  # render: report file is malformed


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _load_map(cfg):
    data = replica.replica_path().read_bytes() if cfg.map is None else _read(cfg.map)
    try:
        grid = load_bitmap(data, cfg.threshold, cfg.cell_size)
    except BitmapError as exc:
        raise CliError(EXIT_BAD_MAP, f"{cfg.map or 'replica map'}: {exc}") from None
    log.info("map %s: %dx%d cells, %d obstacles", cfg.map or "replica", grid.width, grid.height, grid.obstacle_count)
    return grid


def _config_from_args(args):
    file_text = None
    if getattr(args, "config", None):
        file_text = _read(args.config).decode("utf-8", errors="replace")
    overrides = {
        "map": args.map,
        "threshold": args.threshold,
        "cell_size": args.cell_size,
        "heuristic": args.heuristic,
        "weight": args.weight,
        "fusion_weight": args.fusion_weight,
        "connectivity": args.connectivity,
        "G": args.G,
        "a": args.a,
        "rho0": args.rho0,
        "n": args.n,
        "step": args.step,
        "tol": args.tol,
        "max_steps": args.max_steps,
        "lookahead": args.lookahead,
        "inflation": args.inflation,
        "repeat": args.repeat,
        "out": args.out,
        "render": True if args.render else None,
    }
    for name in ("source", "goal", "cases", "planner"):
        if hasattr(args, name):
            overrides[name] = getattr(args, name)
    try:
        return build_config(file_text, overrides).resolved()
    except (ConfigError, ValueError, TypeError) as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None


def _write(out_dir: Path, files: dict):
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, content in files.items():
        path = out_dir / name
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(content, encoding="utf-8")
        os.replace(tmp, path)


def cmd_plan(args) -> int:
    cfg = _config_from_args(args)
    grid = _load_map(cfg)
    pcfg = cfg.planner_config()
    try:
        if cfg.planner == "fusion":
            field = build_distance_field(grid)
            report = plan_fusion(grid, cfg.source, cfg.goal, pcfg, field)
        else:
            report = plan_conventional(grid, cfg.source, cfg.goal, pcfg)
    except EndpointError as exc:
        raise CliError(EXIT_ENDPOINT, str(exc)) from None
    except NoPathError as exc:
        raise CliError(EXIT_NO_PATH, str(exc)) from None
    files = {"report.txt": dump_report(report), "config.txt": dump_config(cfg)}
    if args.trace:
        heur = pcfg.fusion_heuristic() if cfg.planner == "fusion" else pcfg.baseline_heuristic()
        res = astar_search(grid, cfg.source, cfg.goal, heur, pcfg.connectivity, trace=True)
        files["trace.txt"] = format_trace(res.trace)
    if cfg.render:
        files["plan.svg"] = render_svg(grid, [report])
    _write(Path(cfg.out), files)
    print(
        f"{report.planner}: path length {report.path_length:.4f} cm, "
        f"running time {report.running_time:.6f} s, {report.expansions} expansions, "
        f"max turn {report.max_turn_angle:.1f} deg -> {Path(cfg.out) / 'report.txt'}"
    )
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config_from_args(args)
    if cfg.cases is not None:
        try:
            cases = parse_cases(_read(cfg.cases).decode("utf-8", errors="replace"))
        except ConfigError as exc:
            raise CliError(EXIT_CONFIG, f"{cfg.cases}: {exc}") from None
    else:
        cases = list(REPLICA_CASES)
    grid = _load_map(cfg)
    rows = compare(grid, cases, cfg.planner_config())
    files = {
        "comparison.txt": comparison_table(rows),
        "comparison.csv": comparison_csv(rows),
        "config.txt": dump_config(cfg),
    }
    for row in rows:
        if row.ok:
            files[f"case-{row.label}-conventional.txt"] = dump_report(row.baseline)
            files[f"case-{row.label}-fusion.txt"] = dump_report(row.fusion)
            if cfg.render:
                files[f"case-{row.label}.svg"] = render_svg(grid, [row.baseline, row.fusion])
    _write(Path(cfg.out), files)
    sys.stdout.write(files["comparison.txt"])
    failed = [r.label for r in rows if not r.ok]
    if failed:
        print(f"fusionplan: error: cases failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CASE_FAILED
    return EXIT_OK


def cmd_render(args) -> int:
    cfg = _config_from_args(args)
    grid = _load_map(cfg)
    reports = []
    for path in args.reports:
        try:
            reports.append(load_report(_read(path).decode("utf-8", errors="replace")))
        except ReportFormatError as exc:
            raise CliError(EXIT_BAD_REPORT, f"{path}: {exc}") from None
    try:
        svg = render_svg(grid, reports)
    except RenderError as exc:
        raise CliError(EXIT_MISMATCH, str(exc)) from None
    target = Path(args.output) if args.output else Path(cfg.out) / "render.svg"
    _write(target.parent, {target.name: svg})
    print(f"wrote {target}")
    return EXIT_OK


def _cell_arg(text):
    try:
        return parse_cell(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file; flags override it")
    common.add_argument("--map", help="PBM/PGM environment image (default: bundled replica map)")
    common.add_argument("--threshold", type=int, help="gray level below which a pixel is an obstacle (128)")
    common.add_argument("--cell-size", dest="cell_size", type=float, help="cm per pixel (1.0)")
    common.add_argument("--heuristic", choices=["manhattan", "euclidean"])
    common.add_argument("--weight", type=float, help="heuristic weight of the baseline search (1.0)")
    common.add_argument("--fusion-weight", dest="fusion_weight", type=float,
                        help="heuristic weight of the fusion arm's preliminary search (1.5)")
    common.add_argument("--connectivity", type=int, choices=[4, 8])
    common.add_argument("--G", type=float, help="attractive constant")
    common.add_argument("--a", type=float, help="repulsive constant")
    common.add_argument("--rho0", type=float, help="obstacle influence radius (cm)")
    common.add_argument("--n", type=int, help="repulsive goal-distance exponent")
    common.add_argument("--step", type=float, help="APF step size (cm)")
    common.add_argument("--tol", type=float, help="goal tolerance (cm)")
    common.add_argument("--max-steps", dest="max_steps", type=int, help="APF iteration cap")
    common.add_argument("--lookahead", type=float, help="sliding local-goal look-ahead (cm); 0 = per-pair APF")
    common.add_argument("--inflation", type=float, help="obstacle inflation for pruning (cells)")
    common.add_argument("--repeat", type=int, help="timing repetitions; the median is reported (5)")
    common.add_argument("--out", help="output directory (out)")
    common.add_argument("--render", action="store_true", help="also write SVG renderings")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fusionplan", description="Grid path planning: A* vs A*+APF fusion.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", parents=[common], help="plan one source/goal pair")
    p.add_argument("--source", type=_cell_arg, help="C,R (default 25,25)")
    p.add_argument("--goal", type=_cell_arg, help="C,R (default 180,280)")
    p.add_argument("--planner", choices=["fusion", "conventional"])
    p.add_argument("--trace", action="store_true", help="write the A* expansion trace")
    p.set_defaults(func=cmd_plan)

    c = sub.add_parser("compare", parents=[common], help="baseline A* vs fusion over a case list")
    c.add_argument("--cases", help="case file: label,sc,sr,gc,gr per line (default: six built-in cases)")
    c.set_defaults(func=cmd_compare)

    r = sub.add_parser("render", parents=[common], help="draw reports over their map as SVG")
    r.add_argument("reports", nargs="+", help="report files written by plan/compare")
    r.add_argument("-o", "--output", help="SVG file (default OUT/render.svg)")
    r.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already printed by argparse
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"fusionplan: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
