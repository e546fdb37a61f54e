"""Run descriptions: JSON parsing with defaults and strict validation."""

import json
from dataclasses import asdict, dataclass, fields

from .detection import SCHEME_NAMES, DetectionScheme
from .errors import QuftiError, ReferenceModeError


class ScenarioError(QuftiError, ValueError):
    """Scenario document failed validation; message carries the field path."""


@dataclass(frozen=True)
class ScenarioSpec:
    m: int = 4
    d: int = 3
    k: int = 1
    scheme: str = "nrd"
    resolved_mode: int = 1
    phases: tuple = None
    starts: int = 32
    max_iters: int = 2000
    seed: int = 0
    p_grid: tuple = None
    m_range: tuple = (2, 6)
    schemes: tuple = ("nrd", "spd", "one-nrd")
    phase_mode: str = "per-p"
    out: str = None
    svg: str = None

    @property
    def detection(self):
        return DetectionScheme(self.scheme, self.resolved_mode)

    def schemes_for_run(self):
        return [
            DetectionScheme(s, self.resolved_mode if s == "one-nrd" else 1)
            for s in self.schemes
        ]


FIELD_NAMES = tuple(f.name for f in fields(ScenarioSpec))


def _int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{path}: expected integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{path}: must be >= {minimum}, got {value}")
    return value


def _floats(value, path):
    if not isinstance(value, (list, tuple)):
        raise ScenarioError(f"{path}: expected a list of numbers")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ScenarioError(f"{path}[{i}]: expected number, got {v!r}")
        out.append(float(v))
    return tuple(out)


def _scheme(value, path):
    if not isinstance(value, str):
        raise ScenarioError(f"{path}: expected string")
    name = value.strip().lower().replace("_", "-")
    if name not in SCHEME_NAMES:
        raise ScenarioError(f"{path}: unknown scheme {value!r}, expected one of {SCHEME_NAMES}")
    return name


def validate(values):
    """Build a ``ScenarioSpec`` from a mapping, applying defaults."""
    if not isinstance(values, dict):
        raise ScenarioError("$: expected a JSON object")
    unknown = sorted(set(values) - set(FIELD_NAMES))
    if unknown:
        raise ScenarioError(f"$.{unknown[0]}: unknown key")
    kw = {}
    for key in ("m", "d", "k", "resolved_mode", "starts", "max_iters"):
        if key in values:
            kw[key] = _int(values[key], f"$.{key}", 1)
    if "seed" in values:
        kw["seed"] = _int(values["seed"], "$.seed", 0)
    if "scheme" in values:
        kw["scheme"] = _scheme(values["scheme"], "$.scheme")
    if "schemes" in values:
        if not isinstance(values["schemes"], (list, tuple)) or not values["schemes"]:
            raise ScenarioError("$.schemes: expected a non-empty list")
        kw["schemes"] = tuple(
            _scheme(s, f"$.schemes[{i}]") for i, s in enumerate(values["schemes"])
        )
    if values.get("phases") is not None:
        kw["phases"] = _floats(values["phases"], "$.phases")
    if values.get("p_grid") is not None:
        grid = _floats(values["p_grid"], "$.p_grid")
        for i, p in enumerate(grid):
            if not 0.0 <= p <= 1.0:
                raise ScenarioError(f"$.p_grid[{i}]: efficiency must lie in [0, 1]")
        kw["p_grid"] = grid
    if "m_range" in values:
        r = values["m_range"]
        if not isinstance(r, (list, tuple)) or len(r) != 2:
            raise ScenarioError("$.m_range: expected [first, last]")
        lo = _int(r[0], "$.m_range[0]", 2)
        hi = _int(r[1], "$.m_range[1]", lo)
        kw["m_range"] = (lo, hi)
    if "phase_mode" in values:
        if values["phase_mode"] not in ("fixed", "per-p", "per-config"):
            raise ScenarioError(f"$.phase_mode: unknown mode {values['phase_mode']!r}")
        kw["phase_mode"] = values["phase_mode"]
    for key in ("out", "svg"):
        if values.get(key) is not None:
            if not isinstance(values[key], str):
                raise ScenarioError(f"$.{key}: expected string path")
            kw[key] = values[key]

    spec = ScenarioSpec(**kw)
    if spec.d >= spec.m:
        raise ReferenceModeError(
            f"$.d: d={spec.d} phases in m={spec.m} modes leaves no reference mode"
        )
    if spec.resolved_mode > spec.m:
        raise ScenarioError(f"$.resolved_mode: {spec.resolved_mode} outside 1..{spec.m}")
    if spec.phases is not None and len(spec.phases) != spec.d:
        raise ScenarioError(f"$.phases: expected {spec.d} values, got {len(spec.phases)}")
    return spec


def parse_scenario(text):
    try:
        values = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"$: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    return validate(values)


def render_scenario(spec):
    values = asdict(spec)
    for key, value in values.items():
        if isinstance(value, tuple):
            values[key] = list(value)
    return json.dumps(values, indent=2, sort_keys=True)
