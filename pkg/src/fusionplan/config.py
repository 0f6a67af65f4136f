"""Run configuration: a flat ``key = value`` file plus command-line overrides.

Unset numeric APF fields resolve to cell-size-scaled defaults; the effective
configuration written next to results has every field resolved, so reloading
it reproduces the run exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .apf import ApfConfig
from .astar import Connectivity, HeuristicKind
from .fusion import REPLICA_CASES, CaseSpec, PlannerConfig
from .gridmap import Cell


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    map: str | None = None  # None: bundled replica map
    threshold: int = 128
    cell_size: float = 1.0
    planner: str = "fusion"
    heuristic: str = "euclidean"
    weight: float = 1.0
    fusion_weight: float = 1.5
    connectivity: int = 8
    G: float | None = None
    a: float | None = None
    rho0: float | None = None
    n: int = 2
    step: float | None = None
    tol: float | None = None
    max_steps: int | None = None
    lookahead: float | None = None
    inflation: float = 0.0
    repeat: int = 5
    source: Cell = REPLICA_CASES[0].source
    goal: Cell = REPLICA_CASES[0].goal
    cases: str | None = None  # None: the six built-in cases
    out: str = "out"
    render: bool = False

    def validate(self) -> "RunConfig":
        """Check every field before any planning; raise :class:`ConfigError`."""
        def bad(name, why):
            raise ConfigError(f"invalid {name}: {getattr(self, name)!r} ({why})")

        if not 0 <= self.threshold <= 256:
            bad("threshold", "must be within 0..256")
        if not (self.cell_size > 0 and math.isfinite(self.cell_size)):
            bad("cell_size", "must be positive")
        if self.planner not in ("fusion", "conventional"):
            bad("planner", "must be fusion or conventional")
        if self.heuristic not in {k.value for k in HeuristicKind}:
            bad("heuristic", "must be manhattan or euclidean")
        for name in ("weight", "fusion_weight"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                bad(name, "must be a finite number >= 0")
        if self.connectivity not in (4, 8):
            bad("connectivity", "must be 4 or 8")
        if not self.inflation >= 0:
            bad("inflation", "must be >= 0")
        if not (isinstance(self.repeat, int) and self.repeat >= 1):
            bad("repeat", "must be a positive integer")
        for name in ("source", "goal"):
            v = getattr(self, name)
            if v is None or v[0] < 0 or v[1] < 0:
                bad(name, "must be a non-negative col,row pair")
        try:
            self.apf_config()
        except ValueError as exc:
            field = str(exc).split("ApfConfig.")[-1].split(":")[0]
            flag = {"G": "G", "step_size": "step", "goal_tolerance": "tol"}.get(field, field)
            raise ConfigError(f"invalid {flag}: {exc}") from None
        return self

    def apf_config(self) -> ApfConfig:
        explicit = {
            "G": self.G,
            "a": self.a,
            "rho0": self.rho0,
            "n": self.n,
            "step_size": self.step,
            "goal_tolerance": self.tol,
            "max_steps": self.max_steps,
            "lookahead": self.lookahead,
        }
        base = ApfConfig.for_cell_size(self.cell_size)
        return replace(base, **{k: v for k, v in explicit.items() if v is not None or k == "max_steps"})

    def planner_config(self) -> PlannerConfig:
        return PlannerConfig(
            heuristic=HeuristicKind(self.heuristic),
            weight=self.weight,
            connectivity=Connectivity.parse(self.connectivity),
            fusion_weight=self.fusion_weight,
            apf=self.apf_config(),
            inflation=self.inflation,
            repeat=self.repeat,
        )

    def resolved(self) -> "RunConfig":
        """Copy with APF fields filled in from the cell-size defaults."""
        apf = self.apf_config()
        return replace(self, G=apf.G, a=apf.a, rho0=apf.rho0, step=apf.step_size,
                       tol=apf.goal_tolerance, lookahead=apf.lookahead)


_KINDS = {
    "map": "str?",
    "threshold": "int",
    "cell_size": "float",
    "planner": "str",
    "heuristic": "str",
    "weight": "float",
    "fusion_weight": "float",
    "connectivity": "int",
    "G": "float?",
    "a": "float?",
    "rho0": "float?",
    "n": "int",
    "step": "float?",
    "tol": "float?",
    "max_steps": "int?",
    "lookahead": "float?",
    "inflation": "float",
    "repeat": "int",
    "source": "cell",
    "goal": "cell",
    "cases": "str?",
    "out": "str",
    "render": "bool",
}
assert set(_KINDS) == {f.name for f in fields(RunConfig)}

_NONE = {"", "none", "auto", "default"}


def parse_cell(text: str) -> Cell:
    parts = text.replace(" ", "").split(",")
    if len(parts) != 2:
        raise ValueError(f"expected C,R, got {text!r}")
    return Cell(int(parts[0]), int(parts[1]))


def parse_value(key: str, text: str):
    kind = _KINDS.get(key)
    if kind is None:
        raise ConfigError(f"unknown config key {key!r}")
    text = text.strip()
    optional = kind.endswith("?")
    kind = kind.rstrip("?")
    if optional and text.lower() in _NONE:
        return None
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "cell":
            return parse_cell(text)
        if kind == "bool":
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"expected true/false, got {text!r}")
        return text
    except ValueError as exc:
        raise ConfigError(f"invalid {key}: {exc}") from None


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = parse_value(key.strip(), value)
    return values


def dump_config(cfg: RunConfig) -> str:
    lines = ["# fusionplan effective configuration"]
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if v is None:
            text = "none"
        elif isinstance(v, bool):
            text = "true" if v else "false"
        elif isinstance(v, tuple):
            text = f"{v[0]},{v[1]}"
        elif isinstance(v, float):
            text = repr(v)
        else:
            text = str(v)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"


def build_config(file_text: str | None = None, overrides: dict | None = None) -> RunConfig:
    """File values first, then overrides (ignoring ``None``), then validation."""
    values = parse_config_text(file_text) if file_text else {}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig(**values).validate()


def parse_cases(text: str) -> list[CaseSpec]:
    """Case file: ``label,src_col,src_row,goal_col,goal_row`` per line."""
    cases = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 5:
            raise ConfigError(f"cases line {lineno}: expected label,sc,sr,gc,gr")
        try:
            nums = [int(p) for p in parts[1:]]
        except ValueError:
            raise ConfigError(f"cases line {lineno}: non-integer coordinate") from None
        cases.append(CaseSpec((nums[0], nums[1]), (nums[2], nums[3]), parts[0]))
    if not cases:
        raise ConfigError("cases file lists no cases")
    return cases


def dump_cases(cases) -> str:
    return "".join(f"{c.label},{c.source[0]},{c.source[1]},{c.goal[0]},{c.goal[1]}\n" for c in cases)
