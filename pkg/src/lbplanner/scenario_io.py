"""Reading and writing scenario files (JSON documents).

Format::

    {
      "name": "corridors",
      "dimension": 2,
      "bounds": {"lo": [0, 0], "hi": [1, 1]},
      "obstacles": [
        {"type": "box", "lo": [0.3, 0.0], "hi": [0.35, 0.18]},
        {"type": "ball", "center": [0.5, 0.5], "radius": 0.1}
      ],
      "x_init": [0.1, 0.2],
      "goal": {"center": [0.9, 0.2], "radius": 0.05}
    }
"""

from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path

from .cspace import GoalRegion, InvalidInputError, Obstacle, Scenario

BUNDLED = ("corridors", "grids")


class ScenarioParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


class ScenarioValidationError(ValueError):
    def __init__(self, field: str, msg: str):
        super().__init__(f"{field}: {msg}")
        self.field = field


def _vector(doc, field: str, dim: int | None = None) -> list[float]:
    if not isinstance(doc, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in doc):
        raise ScenarioValidationError(field, "expected a list of numbers")
    if dim is not None and len(doc) != dim:
        raise ScenarioValidationError(field, f"expected {dim} coordinates, got {len(doc)}")
    return [float(v) for v in doc]


def _get(doc: dict, key: str, field: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ScenarioValidationError(field, "missing")
    return doc[key]


def scenario_from_dict(doc: dict) -> Scenario:
    dim = _get(doc, "dimension", "dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ScenarioValidationError("dimension", "must be an integer >= 1")
    bounds = _get(doc, "bounds", "bounds")
    lo = _vector(_get(bounds, "lo", "bounds.lo"), "bounds.lo", dim)
    hi = _vector(_get(bounds, "hi", "bounds.hi"), "bounds.hi", dim)
    if any(a >= b for a, b in zip(lo, hi)):
        raise ScenarioValidationError("bounds", "lo must be < hi on every axis")

    obstacles = []
    for k, ob in enumerate(doc.get("obstacles", [])):
        where = f"obstacles[{k}]"
        kind = _get(ob, "type", f"{where}.type")
        try:
            if kind == "box":
                obstacles.append(Obstacle.box(_vector(_get(ob, "lo", f"{where}.lo"), f"{where}.lo", dim),
                                              _vector(_get(ob, "hi", f"{where}.hi"), f"{where}.hi", dim)))
            elif kind == "ball":
                radius = _get(ob, "radius", f"{where}.radius")
                obstacles.append(Obstacle.ball(
                    _vector(_get(ob, "center", f"{where}.center"), f"{where}.center", dim), float(radius)))
            else:
                raise ScenarioValidationError(f"{where}.type", f"unknown obstacle kind {kind!r}")
        except InvalidInputError as exc:
            raise ScenarioValidationError(where, str(exc)) from None

    x_init = _vector(_get(doc, "x_init", "x_init"), "x_init", dim)
    goal = _get(doc, "goal", "goal")
    center = _vector(_get(goal, "center", "goal.center"), "goal.center", dim)
    radius = _get(goal, "radius", "goal.radius")
    if not isinstance(radius, (int, float)) or radius < 0:
        raise ScenarioValidationError("goal.radius", "must be a number >= 0")

    try:
        return Scenario(dim, (tuple(lo), tuple(hi)), tuple(obstacles), tuple(x_init),
                        GoalRegion(tuple(center), float(radius)), str(doc.get("name", "scenario")))
    except InvalidInputError as exc:
        msg = str(exc)
        field = "x_init" if "x_init" in msg else "goal.center" if "goal" in msg else "scenario"
        raise ScenarioValidationError(field, msg) from None


def scenario_to_dict(scenario: Scenario) -> dict:
    obstacles = []
    for ob in scenario.obstacles:
        if ob.kind == "box":
            obstacles.append({"type": "box", "lo": list(ob.lo), "hi": list(ob.hi)})
        else:
            obstacles.append({"type": "ball", "center": list(ob.center), "radius": ob.radius})
    return {
        "name": scenario.name,
        "dimension": scenario.dimension,
        "bounds": {"lo": list(scenario.bounds[0]), "hi": list(scenario.bounds[1])},
        "obstacles": obstacles,
        "x_init": list(scenario.x_init),
        "goal": {"center": list(scenario.goal.center), "radius": scenario.goal.radius},
    }


def loads_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ScenarioParseError("top level must be an object", 1)
    return scenario_from_dict(doc)


_NUMBER_LIST = re.compile(r"\[\s*([-0-9.eE+,\s]+?)\s*\]")


def dumps_scenario(scenario: Scenario) -> str:
    text = json.dumps(scenario_to_dict(scenario), indent=2)
    # keep coordinate vectors on one line
    text = _NUMBER_LIST.sub(lambda m: "[" + ", ".join(v.strip() for v in m.group(1).split(",")) + "]", text)
    return text + "\n"


def parse_scenario(path) -> Scenario:
    """Load a scenario file, or a bundled scenario by name (``corridors``, ``grids``)."""
    p = Path(path)
    if not p.exists() and str(path) in BUNDLED:
        return loads_scenario(bundled_text(str(path)))
    return loads_scenario(p.read_text())


def bundled_text(name: str) -> str:
    return resources.files("lbplanner.scenarios").joinpath(f"{name}.json").read_text()


def load_bundled(name: str) -> Scenario:
    if name not in BUNDLED:
        raise InvalidInputError(f"no bundled scenario {name!r}; available: {', '.join(BUNDLED)}")
    return loads_scenario(bundled_text(name))
