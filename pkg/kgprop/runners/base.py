"""
Base scenario runner: kernel sampling over a grid and the check batteries.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from typing_extensions import TypeAlias

from kgprop.config import KgpropConfig
from kgprop.errors import KgpropValidationError
from kgprop.krein import (
    admissible_check,
    alpha_vacuum_coefficients,
    angular_operators,
    bogoliubov_mode_coeffs,
    k_positivity,
    kato_projections,
    random_admissible_pair,
)
from kgprop.models.common import CutComplex, GegenbauerParams, PropagatorKind
from kgprop.models.scenario import Geometry, Scenario, Suite
from kgprop.spacetimes.base import sample
from kgprop.specfun import check_connection_formulas

logger = logging.getLogger("kgprop.runners")

Point: TypeAlias = Tuple[float, float]
Row: TypeAlias = List[Any]

KREIN_INSTANCES = 20
KREIN_MAX_SIZE = 8
CONNECTION_DRAWS = 30
# distance of the Gegenbauer indices from the integers below which extrapolation kicks in
INDEX_GAP = 0.05


@dataclass(frozen=True)
class CheckResult:
    """
    One line of a suite report.

    Attributes:
        name: Check name.
        residual: Worst residual over the sampled cases.
        tolerance: Pass threshold.
    """

    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.name,
            "max_residual": self.residual if math.isfinite(self.residual) else None,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class SuiteReport:
    """Outcome of one check battery on one scenario."""

    suite: Suite
    geometry: Geometry
    scenario: str
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite.value,
            "geometry": self.geometry.value,
            "scenario": self.scenario,
            "seed": self.seed,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def worst_by_name(residuals: Iterable[Dict[str, float]]) -> Dict[str, float]:
    """Merge residual dictionaries keeping the largest value per name (first-seen order)."""
    worst: Dict[str, float] = {}
    for item in residuals:
        for name, value in item.items():
            worst[name] = max(worst.get(name, 0.0), float(value))
    return worst


def checks_from(worst: Dict[str, float], tolerance: float, prefix: str = "") -> List[CheckResult]:
    return [CheckResult(f"{prefix}{name}", value, tolerance) for name, value in worst.items()]


def _generic_index(x: float) -> bool:
    return abs(x - round(x)) > INDEX_GAP


def _norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


class BaseRunner:
    """
    Evaluates one scenario.

    Subclasses build their model objects in `_prepare`, which runs in the
    constructor so that every parameter is validated before any computation.
    """

    geometry: Geometry
    kinds: Tuple[PropagatorKind, ...] = ()
    coordinate_columns: Tuple[str, ...] = ()

    def __init__(self, scenario: Scenario, config: KgpropConfig) -> None:
        if scenario.geometry is not self.geometry:
            raise KgpropValidationError(
                f"{type(self).__name__} runs {self.geometry.value} scenarios, got {scenario.geometry.value}",
                field="geometry",
            )
        self.scenario = scenario
        self.config = config
        self.parameters = scenario.parameters
        self._prepare()

    def _prepare(self) -> None:
        """Build and validate the geometry-specific objects."""

    def real(self, name: str, default: Optional[float] = None) -> float:
        """A real parameter; missing ones fall back to default."""
        value = self.parameters.get(name, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise KgpropValidationError(f"parameter {name!r} must be a real number, got {value!r}", field=name)
        return float(value)

    def number(self, name: str) -> Union[float, complex]:
        """A real parameter, or a complex one written as [re, im]."""
        value = self.parameters.get(name)
        if isinstance(value, (list, tuple)) and len(value) == 2:
            re, im = value
            if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
                return float(re) if im == 0 else complex(re, im)
        return self.real(name)

    # Kernel sampling

    @property
    def columns(self) -> List[str]:
        return list(self.coordinate_columns) + ["re", "im"]

    def check_kind(self, kind: Any) -> PropagatorKind:
        kind = PropagatorKind.parse(kind)
        if kind not in self.kinds:
            names = ", ".join(k.value for k in self.kinds)
            raise KgpropValidationError(
                f"{self.geometry.value} scenarios evaluate {names}; got {kind.value}", field="kind"
            )
        return kind

    def usable(self, point: Point) -> bool:
        """False for grid points where the kernels are not functions (light cones, chart boundaries)."""
        return True

    def sample_points(self) -> List[Point]:
        points = self.scenario.points()
        kept = [p for p in points if self.usable(p)]
        if len(kept) < len(points):
            logger.info("skipping %d of %d grid points on a light cone", len(points) - len(kept), len(points))
        return kept

    def before_sampling(self) -> None:
        """Do shared one-off work before the grid is evaluated on several workers."""

    def rows(self, point: Point, kind: PropagatorKind) -> List[Row]:
        raise NotImplementedError

    def kernel_rows(self, kind: Any) -> List[Row]:
        """All output rows for one kernel kind, in grid order."""
        kind = self.check_kind(kind)
        points = self.sample_points()
        self.before_sampling()
        if self.config.debug:
            logger.debug("evaluating %s on %d points with %s workers", kind.value, len(points), self.config.threads)
        per_point = sample(lambda p: self.rows(p, kind), points, self.config)
        return [row for rows in per_point for row in rows]

    # Check batteries

    def identity_checks(self) -> List[CheckResult]:
        raise NotImplementedError

    def specialty_checks(self) -> List[CheckResult]:
        raise KgpropValidationError(
            f"the specialty suite is not defined for {self.geometry.value} scenarios", field="suite"
        )

    def extra_krein_checks(self) -> List[CheckResult]:
        return []

    def krein_checks(self) -> List[CheckResult]:
        """Seeded random battery on pairs of admissible involutions and alpha-vacuum coefficients."""
        rng = np.random.default_rng(self.config.seed)
        tol = self.scenario.threshold(Suite.KREIN)
        worst = dict.fromkeys(
            (
                "admissible",
                "kato_projections",
                "kato_ranges",
                "angular_reconstruction",
                "k_positivity",
                "contraction",
                "vacuum_coefficients",
            ),
            0.0,
        )
        for _ in range(KREIN_INSTANCES):
            n = int(rng.integers(2, KREIN_MAX_SIZE + 1))
            space, s1, s2 = random_admissible_pair(n, rng=rng, config=self.config)
            for s in (s1, s2):
                report = admissible_check(space, s, self.config)
                residual = report.form_residual if report.admissible else math.inf
                worst["admissible"] = max(worst["admissible"], residual)

            quad = kato_projections(s1, s2, self.config)
            worst["kato_projections"] = max(worst["kato_projections"], quad.max_residual)
            ranges = max(
                _norm(s1.minus @ quad.L12p),
                _norm(quad.L12p @ s2.minus),
                _norm(s2.minus @ quad.L21p),
                _norm(quad.L21p @ s1.minus),
            )
            worst["kato_ranges"] = max(worst["kato_ranges"], ranges)

            pair = angular_operators(s1, s2, space, self.config)
            rebuilt = _norm(pair.to_full(pair.s2_block()) - s2.S) / _norm(s2.S)
            worst["angular_reconstruction"] = max(worst["angular_reconstruction"], pair.reconstruction_residual, rebuilt)
            worst["k_positivity"] = max(worst["k_positivity"], -k_positivity(space, s1, s2), 0.0)
            worst["contraction"] = max(worst["contraction"], pair.c_norm - 1.0, 0.0)

            radii = rng.uniform(0.0, 0.9, size=2)
            angles = rng.uniform(0.0, 2 * math.pi, size=2)
            a, b = (complex(r * math.cos(t), r * math.sin(t)) for r, t in zip(radii, angles))
            coeffs = alpha_vacuum_coefficients(a, b)
            modes = bogoliubov_mode_coeffs([coeffs.n], [[coeffs.m]])
            worst["vacuum_coefficients"] = max(worst["vacuum_coefficients"], modes.max_residual)

        if self.config.debug:
            logger.debug("krein battery over %d instances: %s", KREIN_INSTANCES, worst)
        return checks_from(worst, tol) + self.extra_krein_checks()

    def connection_checks(self) -> List[CheckResult]:
        """Seeded random battery of the S/Z connection formulas on (1, oo), the upper half-plane and (-1, 1) + i0."""
        rng = np.random.default_rng(self.config.seed)
        tol = self.scenario.threshold(Suite.CONNECTION)
        residuals = []
        while len(residuals) < CONNECTION_DRAWS:
            alpha, lam = (float(x) for x in rng.uniform(-2.0, 2.0, size=2))
            domain = len(residuals) % 3
            w: Union[complex, CutComplex]
            if domain == 0:
                w = complex(rng.uniform(1.1, 6.0))
            elif domain == 1:
                w = complex(rng.uniform(-2.5, 2.5), rng.uniform(0.2, 2.5))
            else:
                x = float(rng.uniform(-0.9, 0.9))
                # Z switches to its expansion around -1 close to the origin
                if abs(x) < 0.1:
                    continue
                w = CutComplex.above(x)
            if not (_generic_index(alpha) and _generic_index(lam)):
                continue
            r = check_connection_formulas(GegenbauerParams(alpha, lam), w)
            residuals.append(
                {"reflection": r.reflection, "z_from_s": r.z_from_s, "s_from_z": r.s_from_z, "closure": r.closure}
            )
        return checks_from(worst_by_name(residuals), tol)

    def run_suite(self, suite: Any) -> SuiteReport:
        """Run one battery and collect its checks."""
        try:
            suite = Suite(str(getattr(suite, "value", suite)).lower())
        except ValueError:
            raise KgpropValidationError(f"Unknown suite: {suite!r}", field="suite") from None
        handlers = {
            Suite.IDENTITIES: self.identity_checks,
            Suite.CONNECTION: self.connection_checks,
            Suite.KREIN: self.krein_checks,
            Suite.SPECIALTY: self.specialty_checks,
        }
        checks = handlers[suite]()
        report = SuiteReport(
            suite=suite,
            geometry=self.geometry,
            scenario=self.scenario.digest,
            seed=self.config.seed,
            checks=checks,
        )
        for check in report.failing():
            logger.warning("%s check %s failed: residual %.3e > %.1e", suite.value, check.name, check.residual, check.tolerance)
        return report

    def sampled(self, func: Any, points: Sequence[Point]) -> List[Any]:
        """Map func over points on the configured workers."""
        return sample(func, list(points), self.config)
