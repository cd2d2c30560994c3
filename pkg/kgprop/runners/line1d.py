"""
Runners for one-dimensional problems: a Schrodinger potential on the line, and
a single mode of an FLRW spacetime.
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

from kgprop.errors import KgpropValidationError
from kgprop.flrw import mode_potential, specialty_scan
from kgprop.models.common import PropagatorKind
from kgprop.models.flrw import FlrwModel
from kgprop.models.potential import Potential
from kgprop.models.scenario import Geometry, Suite
from kgprop.runners.base import BaseRunner, CheckResult, Point, Row, worst_by_name
from kgprop.schrodinger1d import feynman_sampler, green_residual, scattering_coefficients, specialty_residual

logger = logging.getLogger("kgprop.runners")

# step of the finite-difference Green-function check; points closer than 2h to the diagonal are skipped
GREEN_STEP = 1e-2
GREEN_TOL = 1e-6
JUMP_TOL = 1e-3


class LineRunner(BaseRunner):
    """Feynman kernels of d^2/dt^2 + m^2 - V on the line."""

    geometry = Geometry.LINE1D
    kinds = (PropagatorKind.F, PropagatorKind.FBAR, PropagatorKind.OP_F, PropagatorKind.OP_FBAR)
    coordinate_columns = ("t", "s")

    potential: Potential
    m: float

    def _prepare(self) -> None:
        data = self.parameters["potential"]
        if not isinstance(data, dict):
            raise KgpropValidationError("potential must be an object", field="potential")
        self.potential = Potential.from_dict(data)
        self.m = self.real("m")
        if not self.m > 0:
            raise KgpropValidationError(f"Mass must be positive, got {self.m}", field="m")
        self._kernels: Optional[Callable[[float, float], Tuple[complex, complex]]] = None

    def before_sampling(self) -> None:
        if self._kernels is None:
            self._kernels = feynman_sampler(self.potential, self.m, self.config)

    def rows(self, point: Point, kind: PropagatorKind) -> List[Row]:
        assert self._kernels is not None
        t, s = point
        f, fbar = self._kernels(t, s)
        value = f if kind in (PropagatorKind.F, PropagatorKind.OP_F) else fbar
        return [[t, s, value.real, value.imag]]

    def _off_diagonal(self) -> List[Point]:
        return [p for p in self.scenario.points() if abs(p[0] - p[1]) > 2 * GREEN_STEP]

    def identity_checks(self) -> List[CheckResult]:
        """Finite-difference Green-function property of F: the equation off the diagonal and the unit jump."""
        points = self._off_diagonal()
        if not points:
            raise KgpropValidationError("the identities suite needs grid points with t != s", field="grid")

        def one(point: Point) -> Dict[str, float]:
            residual, jump = green_residual(self.potential, self.m, point[0], point[1], GREEN_STEP, self.config)
            return {"green_equation": residual, "derivative_jump": abs(jump + 1)}

        worst = worst_by_name(self.sampled(one, points))
        return [
            CheckResult("green_equation", worst["green_equation"], GREEN_TOL),
            CheckResult("derivative_jump", worst["derivative_jump"], JUMP_TOL),
        ]

    def reflection_tolerance(self) -> float:
        return self.scenario.tolerances.get(Suite.SPECIALTY.value, self.config.reflection_tol)

    def specialty_checks(self) -> List[CheckResult]:
        """Reflectionlessness at the scenario mass, and F + Fbar against the classical Green functions."""
        tol = self.reflection_tolerance()
        data = scattering_coefficients(self.potential, self.m, self.config)
        checks = [CheckResult("reflection", max(abs(data.b_plus), abs(data.b_minus)), tol)]
        points = self._off_diagonal()
        if points:
            residual = specialty_residual(self.potential, self.m, points, self.config)
            checks.append(CheckResult("feynman_sum", residual, tol))
        return checks


class FlrwModeRunner(LineRunner):
    """
    One Laplacian mode of an FLRW spacetime, gauged to the line.

    Kernels are those of the mode potential V_lambda; the specialty suite scans every mode.
    """

    geometry = Geometry.FLRW

    model: FlrwModel
    mode_index: int

    def _prepare(self) -> None:
        spec = {k: self.parameters[k] for k in ("a", "d", "modes", "l_max") if k in self.parameters}
        self.model = FlrwModel.from_dict(spec)
        if not self.model.spectrum:
            raise KgpropValidationError("flrw scenario needs 'modes' or 'l_max'", field="modes")
        index = self.parameters.get("mode", 0)
        if isinstance(index, bool) or not isinstance(index, int) or not 0 <= index < len(self.model.spectrum):
            raise KgpropValidationError(
                f"mode must be an index below {len(self.model.spectrum)}, got {index!r}", field="mode"
            )
        self.mode_index = index
        self.m = self.real("m")
        if not self.m > 0:
            raise KgpropValidationError(f"Mass must be positive, got {self.m}", field="m")
        self.potential = mode_potential(self.model, self.model.spectrum[index], self.config)
        self.potential.require_jost_admissible()
        self._kernels = None
        logger.debug("flrw mode %s: %s", self.model.labels[index], self.potential.label)

    def specialty_checks(self) -> List[CheckResult]:
        """Reflection coefficients of every mode; the spacetime is special iff all vanish."""
        tol = self.reflection_tolerance()
        scan = specialty_scan(self.model, self.m, config=self.config)
        names = list(scan.names) or [f"{r.parameter:g}" for r in scan.modes]
        return [
            CheckResult(f"mode {name}", max(report.b_plus, report.b_minus), tol)
            for name, report in zip(names, scan.modes)
        ]
