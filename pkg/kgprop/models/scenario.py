"""
Scenario files read by the command-line front end.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from kgprop.config import KgpropConfig
from kgprop.errors import KgpropValidationError

SCHEMA = "kgprop.scenario/1"


class Geometry(str, Enum):
    """Spacetime families a scenario can describe."""

    LINE1D = "line1d"
    STATIC = "static"
    DYNAMICS = "dynamics"
    FLRW = "flrw"
    DS = "ds"
    ADS = "ads"


class Suite(str, Enum):
    """Check batteries run by `kgprop suite`."""

    IDENTITIES = "identities"
    CONNECTION = "connection"
    KREIN = "krein"
    SPECIALTY = "specialty"


_TOP_LEVEL = frozenset({"schema", "geometry", "parameters", "grid", "tolerances", "seed"})

_PARAMETERS: Dict[Geometry, frozenset] = {
    Geometry.LINE1D: frozenset({"potential", "m"}),
    Geometry.STATIC: frozenset({"L", "lapse"}),
    Geometry.DYNAMICS: frozenset({"L", "L_plus", "W", "width", "t_minus", "t_plus", "lapse"}),
    Geometry.FLRW: frozenset({"a", "d", "modes", "l_max", "m", "mode"}),
    Geometry.DS: frozenset({"d", "nu", "alpha", "beta", "tau_prime"}),
    Geometry.ADS: frozenset({"d", "nu", "m2", "tau_prime", "u_prime", "theta"}),
}

_REQUIRED: Dict[Geometry, Tuple[str, ...]] = {
    Geometry.LINE1D: ("potential", "m"),
    Geometry.STATIC: ("L",),
    Geometry.DYNAMICS: ("L",),
    Geometry.FLRW: ("a", "d", "m"),
    Geometry.DS: ("d", "nu"),
    Geometry.ADS: ("d",),
}

# names of the two grid axes; the first one is the outer loop
GRID_AXES: Dict[Geometry, Tuple[str, str]] = {
    Geometry.LINE1D: ("t", "s"),
    Geometry.STATIC: ("t", "s"),
    Geometry.DYNAMICS: ("t", "s"),
    Geometry.FLRW: ("t", "s"),
    Geometry.DS: ("tau", "theta"),
    Geometry.ADS: ("tau", "u"),
}

# tolerances a scenario may override in the numerical configuration
CONFIG_TOLERANCES = ("rtol", "atol", "wronskian_tol", "bound_state_tol", "reflection_tol", "light_cone_tol")

SUITE_TOLERANCES: Dict[Suite, float] = {
    Suite.IDENTITIES: 1e-8,
    Suite.CONNECTION: 1e-8,
    Suite.KREIN: 1e-9,
    Suite.SPECIALTY: 1e-9,
}


def _reject_unknown(data: Dict[str, Any], allowed: frozenset, where: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise KgpropValidationError(f"Unknown {where} field(s): {', '.join(unknown)}", field=unknown[0])


def _number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise KgpropValidationError(f"{name} must be a number, got {value!r}", field=name)
    return float(value)


def canonical_json_bytes(obj: Any) -> bytes:
    """Sorted-key, ASCII-only JSON encoding used for hashing."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=True, separators=(",", ":")).encode("ascii")


@dataclass(frozen=True)
class GridAxis:
    """
    Evenly spaced samples of one coordinate.

    Attributes:
        start: First sample.
        stop: Last sample (included).
        num: Number of samples; 1 means start only.
    """

    start: float
    stop: float
    num: int

    def __post_init__(self) -> None:
        num = self.num
        if isinstance(num, bool) or not isinstance(num, (int, float)) or int(num) != num or num < 1:
            raise KgpropValidationError(f"grid axis needs a positive integer count, got {self.num}", field="grid")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise KgpropValidationError("grid bounds must be finite", field="grid")
        object.__setattr__(self, "num", int(self.num))

    @property
    def values(self) -> List[float]:
        if self.num == 1:
            return [float(self.start)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.num)]

    def to_list(self) -> List[Union[float, int]]:
        return [self.start, self.stop, self.num]

    @classmethod
    def from_json(cls, value: Any, name: str) -> "GridAxis":
        """Read [start, stop, num]."""
        if not isinstance(value, (list, tuple)) or len(value) != 3:
            raise KgpropValidationError(f"grid axis {name!r} must be [start, stop, num]", field=name)
        start, stop, num = value
        return cls(_number(start, name), _number(stop, name), num)


@dataclass(frozen=True)
class Scenario:
    """
    A validated scenario.

    Attributes:
        geometry: Target geometry.
        parameters: Geometry-specific parameters, checked against the allowed names.
        grid: The two sampling axes, keyed by name.
        tolerances: Overrides of configuration tolerances and suite thresholds.
        seed: Seed of the randomized checks; the command line may override it.
    """

    geometry: Geometry
    parameters: Dict[str, Any]
    grid: Dict[str, GridAxis] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)
    seed: Optional[int] = None

    @classmethod
    def from_dict(cls, data: Any) -> "Scenario":
        """
        Validate and build a scenario.

        Raises:
            KgpropValidationError: For a wrong schema, unknown fields or missing parameters.
        """
        if not isinstance(data, dict):
            raise KgpropValidationError("scenario must be a JSON object", field="scenario")
        _reject_unknown(data, _TOP_LEVEL, "scenario")
        if data.get("schema") != SCHEMA:
            raise KgpropValidationError(f"scenario schema must be {SCHEMA!r}, got {data.get('schema')!r}", field="schema")
        try:
            geometry = Geometry(str(data.get("geometry", "")).lower())
        except ValueError:
            raise KgpropValidationError(f"Unknown geometry: {data.get('geometry')!r}", field="geometry") from None

        parameters = data.get("parameters", {})
        if not isinstance(parameters, dict):
            raise KgpropValidationError("parameters must be an object", field="parameters")
        _reject_unknown(parameters, _PARAMETERS[geometry], f"{geometry.value} parameter")
        for name in _REQUIRED[geometry]:
            if name not in parameters:
                raise KgpropValidationError(f"{geometry.value} scenario needs parameter {name!r}", field=name)
        if geometry is Geometry.ADS and ("nu" in parameters) == ("m2" in parameters):
            raise KgpropValidationError("ads scenario needs exactly one of 'nu' and 'm2'", field="nu")

        raw_grid = data.get("grid", {})
        if not isinstance(raw_grid, dict):
            raise KgpropValidationError("grid must be an object", field="grid")
        axes = GRID_AXES[geometry]
        _reject_unknown(raw_grid, frozenset(axes), f"{geometry.value} grid")
        grid = {name: GridAxis.from_json(raw_grid[name], name) for name in axes if name in raw_grid}

        raw_tol = data.get("tolerances", {})
        if not isinstance(raw_tol, dict):
            raise KgpropValidationError("tolerances must be an object", field="tolerances")
        _reject_unknown(raw_tol, frozenset(CONFIG_TOLERANCES) | {s.value for s in Suite}, "tolerance")
        tolerances = {}
        for name, value in raw_tol.items():
            value = _number(value, name)
            if not value > 0:
                raise KgpropValidationError(f"tolerance {name!r} must be positive", field=name)
            tolerances[name] = value

        seed = data.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
            raise KgpropValidationError(f"seed must be a non-negative integer, got {seed!r}", field="seed")
        return cls(
            geometry=geometry,
            parameters=dict(parameters),
            grid=grid,
            tolerances=tolerances,
            seed=None if seed is None else int(seed),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Scenario":
        """
        Read a scenario file.

        Raises:
            KgpropValidationError: If the file is missing, is not JSON or does not validate.
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise KgpropValidationError(f"cannot read scenario {path}: {e.strerror}", field="scenario") from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise KgpropValidationError(f"scenario {path} is not valid JSON: {e.msg}", field="scenario") from e
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "schema": SCHEMA,
            "geometry": self.geometry.value,
            "parameters": self.parameters,
            "grid": {name: axis.to_list() for name, axis in self.grid.items()},
            "tolerances": self.tolerances,
        }
        if self.seed is not None:
            data["seed"] = self.seed
        return data

    @property
    def digest(self) -> str:
        """SHA-256 of the canonical JSON form."""
        return hashlib.sha256(canonical_json_bytes(self.to_dict())).hexdigest()

    @property
    def axes(self) -> Tuple[str, str]:
        return GRID_AXES[self.geometry]

    def points(self) -> List[Tuple[float, float]]:
        """
        Grid points in output order, the first axis varying slowest.

        Raises:
            KgpropValidationError: If an axis is missing.
        """
        first, second = self.axes
        for name in (first, second):
            if name not in self.grid:
                raise KgpropValidationError(f"{self.geometry.value} grid needs axis {name!r}", field=name)
        return [(x, y) for x in self.grid[first].values for y in self.grid[second].values]

    def configure(self, base: KgpropConfig) -> KgpropConfig:
        """base with the scenario's tolerance overrides applied (and its seed, if set)."""
        overrides: Dict[str, Any] = {k: v for k, v in self.tolerances.items() if k in CONFIG_TOLERANCES}
        if self.seed is not None:
            overrides["seed"] = self.seed
        config = replace(base, **overrides)
        config.validate()
        return config

    def threshold(self, suite: Suite) -> float:
        """Pass threshold of a suite."""
        return self.tolerances.get(suite.value, SUITE_TOLERANCES[suite])
