"""Text serialization for plan reports and comparison tables.

Report documents are ``key = value`` lines in a fixed order followed by
``key_nodes`` and ``waypoints`` arrays (count on the header line, one
``x y`` pair per line). Floats use ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import io

from .fusion import ComparisonRow, PlanReport
from .gridmap import Cell, Point

MAGIC = "# fusionplan report v1"

_SCALARS = [
    ("planner", str),
    ("source", "cell"),
    ("goal", "cell"),
    ("width", int),
    ("height", int),
    ("cell_size", float),
    ("heuristic", str),
    ("weight", float),
    ("admissible", "bool"),
    ("expansions", int),
    ("path_length", float),
    ("max_turn_angle", float),
    ("running_time", float),
    ("segment_outcomes", "list"),
]


class ReportFormatError(ValueError):
    pass


def _fmt(value, kind) -> str:
    if kind == "cell":
        return f"{value[0]},{value[1]}"
    if kind == "bool":
        return "true" if value else "false"
    if kind == "list":
        return ",".join(value)
    if kind is float:
        return repr(float(value))
    return str(value)


def _parse(text: str, kind):
    if kind == "cell":
        c, r = text.split(",")
        return Cell(int(c), int(r))
    if kind == "bool":
        if text not in ("true", "false"):
            raise ValueError(f"expected true/false, got {text!r}")
        return text == "true"
    if kind == "list":
        return tuple(t for t in text.split(",") if t)
    return kind(text)


def dump_report(report: PlanReport, include_timing: bool = True) -> str:
    lines = [MAGIC]
    for key, kind in _SCALARS:
        if key == "running_time" and not include_timing:
            continue
        lines.append(f"{key} = {_fmt(getattr(report, key), kind)}")
    for key in ("key_nodes", "path"):
        pts = getattr(report, key)
        name = "waypoints" if key == "path" else key
        lines.append(f"{name} = {len(pts)}")
        lines.extend(f"{p[0]!r} {p[1]!r}" for p in pts)
    return "\n".join(lines) + "\n"


def load_report(text: str) -> PlanReport:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ReportFormatError("not a fusionplan report (bad first line)")
    values = {}
    arrays = {}
    i = 1
    kinds = dict(_SCALARS)
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ReportFormatError(f"line {i}: expected 'key = value'")
        key, _, raw = (part.strip() for part in line.partition("="))
        if key in ("key_nodes", "waypoints"):
            try:
                count = int(raw)
                pts = []
                for j in range(count):
                    x, y = lines[i + j].split()
                    pts.append(Point(float(x), float(y)))
            except (ValueError, IndexError) as exc:
                raise ReportFormatError(f"line {i}: bad {key} array: {exc}") from None
            arrays[key] = tuple(pts)
            i += count
        elif key in kinds:
            try:
                values[key] = _parse(raw, kinds[key])
            except ValueError as exc:
                raise ReportFormatError(f"line {i}: bad value for {key}: {exc}") from None
        else:
            raise ReportFormatError(f"line {i}: unknown key {key!r}")
    missing = [k for k, _ in _SCALARS if k not in values and k != "running_time"]
    if missing or "waypoints" not in arrays:
        raise ReportFormatError(f"missing fields: {missing or ['waypoints']}")
    values.setdefault("running_time", 0.0)
    return PlanReport(path=arrays["waypoints"], key_nodes=arrays.get("key_nodes", ()), **values)


# --------------------------------------------------------------------------
# comparison tables
# --------------------------------------------------------------------------

CSV_FIELDS = [
    "case",
    "baseline_time",
    "baseline_length",
    "fusion_time",
    "fusion_length",
    "pct_time_reduction",
    "pct_length_reduction",
    "baseline_turn",
    "fusion_turn",
    "error",
]
TIMING_FIELDS = {"baseline_time", "fusion_time", "pct_time_reduction"}


def _row_values(row: ComparisonRow) -> dict:
    return {
        "case": row.label,
        "baseline_time": row.baseline_time,
        "baseline_length": row.baseline_length,
        "fusion_time": row.fusion_time,
        "fusion_length": row.fusion_length,
        "pct_time_reduction": row.pct_time_reduction,
        "pct_length_reduction": row.pct_length_reduction,
        "baseline_turn": row.baseline_turn,
        "fusion_turn": row.fusion_turn,
        "error": row.error,
    }


def comparison_csv(rows, include_timing: bool = True) -> str:
    fields = [f for f in CSV_FIELDS if include_timing or f not in TIMING_FIELDS]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        vals = _row_values(row)
        writer.writerow(["" if row.error and f not in ("case", "error") else _csv_value(vals[f]) for f in fields])
    return buf.getvalue()


def _csv_value(v):
    return repr(v) if isinstance(v, float) else v


def comparison_table(rows, include_timing: bool = True) -> str:
    """Aligned plain-text table in the layout of the usual A*-vs-fusion summary."""
    header = ["case", "A* time(s)", "A* length(cm)", "fusion time(s)", "fusion length(cm)",
              "% time red.", "% length red.", "A* turn", "fusion turn"]
    if not include_timing:
        header = [h for h in header if "time" not in h]
    body = []
    for row in rows:
        if row.error:
            body.append([row.label, f"FAILED: {row.error}"])
            continue
        cells = [
            row.label,
            f"{row.baseline_time:.6f}",
            f"{row.baseline_length:.4f}",
            f"{row.fusion_time:.6f}",
            f"{row.fusion_length:.4f}",
            f"{row.pct_time_reduction:.2f}",
            f"{row.pct_length_reduction:.2f}",
            f"{row.baseline_turn:.1f}",
            f"{row.fusion_turn:.1f}",
        ]
        if not include_timing:
            cells = [cells[0], cells[2], cells[4], cells[6], cells[7], cells[8]]
        body.append(cells)
    widths = [len(h) for h in header]
    for cells in body:
        if len(cells) == len(header):
            widths = [max(w, len(c)) for w, c in zip(widths, cells)]
    out = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    out.append("  ".join("-" * w for w in widths))
    for cells in body:
        if len(cells) == len(header):
            out.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
        else:
            out.append(cells[0].rjust(widths[0]) + "  " + cells[1])
    return "\n".join(out) + "\n"
