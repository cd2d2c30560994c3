"""
Runners for the invariant propagators of de Sitter and anti-de Sitter space.
"""

from typing import Dict, List, Optional, Tuple, Union

from kgprop.errors import KgpropValidationError
from kgprop.models.antidesitter import AdsPairGeometry
from kgprop.models.common import PropagatorKind
from kgprop.models.desitter import DsPairGeometry, VacuumParameter
from kgprop.models.scenario import Geometry, Suite
from kgprop.runners.base import BaseRunner, CheckResult, Point, Row, checks_from, worst_by_name
from kgprop.spacetimes import (
    ads_identity_residuals,
    ads_kernel,
    ads_nu,
    ads_pair,
    alpha_twostate_kernel,
    ds_identity_residuals,
    ds_pair,
    euclidean_kernel,
    op_feynman_ads,
    op_feynman_ds,
)
from kgprop.spacetimes.base import check_dimension

# grid points with ||Z| - 1| below this are left out of the output
LIGHT_CONE_GAP = 1e-6


def _feynman_sum(f: complex, fbar: complex) -> float:
    return abs(f + fbar) / max(1.0, abs(f), abs(fbar))


class DeSitterRunner(BaseRunner):
    """
    Kernels of the Euclidean state, or of a pair of alpha-vacua when 'alpha' is given.

    The grid runs over (tau, theta) with x' = (tau_prime, north pole).
    """

    geometry = Geometry.DS
    coordinate_columns = ("tau", "tau_prime", "theta", "Z", "region")

    d: int
    nu: Union[float, complex]
    alpha: Optional[VacuumParameter]
    beta: Optional[VacuumParameter]
    tau_prime: float

    def _prepare(self) -> None:
        self.d = check_dimension(self.real("d"))
        self.nu = self.number("nu")
        self.tau_prime = self.real("tau_prime", 0.0)
        self.alpha = self.beta = None
        if "alpha" in self.parameters:
            self.alpha = VacuumParameter.from_dict(self.parameters["alpha"])
            self.beta = VacuumParameter.from_dict(self.parameters.get("beta", self.parameters["alpha"]))
        elif "beta" in self.parameters:
            raise KgpropValidationError("beta needs alpha", field="beta")
        self.kinds = self._state_kinds()

    def _state_kinds(self) -> Tuple[PropagatorKind, ...]:
        if self.alpha is None:
            return tuple(PropagatorKind)
        return (
            PropagatorKind.POS,
            PropagatorKind.NEG,
            PropagatorKind.SYM,
            PropagatorKind.F,
            PropagatorKind.FBAR,
            PropagatorKind.RET,
            PropagatorKind.ADV,
            PropagatorKind.PJ,
        )

    def geometry_at(self, point: Point) -> DsPairGeometry:
        return ds_pair(point[0], self.tau_prime, point[1], self.config)

    def usable(self, point: Point) -> bool:
        return abs(abs(self.geometry_at(point).Z) - 1) >= LIGHT_CONE_GAP

    def kernel(self, kind: PropagatorKind, geom: DsPairGeometry) -> complex:
        if self.alpha is None or self.beta is None:
            return euclidean_kernel(self.d, self.nu, kind, geom, self.config)
        return alpha_twostate_kernel(self.d, self.nu, self.alpha, self.beta, kind, geom, self.config)

    def rows(self, point: Point, kind: PropagatorKind) -> List[Row]:
        geom = self.geometry_at(point)
        value = self.kernel(kind, geom)
        return [[point[0], self.tau_prime, point[1], geom.Z, geom.region.value, value.real, value.imag]]

    def identity_checks(self) -> List[CheckResult]:
        """Propagator identities of the state at every usable grid point."""

        def one(point: Point) -> Dict[str, float]:
            geom = self.geometry_at(point)
            return ds_identity_residuals(self.d, self.nu, geom, self.alpha, self.beta, self.config)

        worst = worst_by_name(self.sampled(one, self.sample_points()))
        return checks_from(worst, self.scenario.threshold(Suite.IDENTITIES))

    def specialty_checks(self) -> List[CheckResult]:
        """F + Fbar of the operator-theoretic kernels on the points with Z < 1."""
        points = [p for p in self.sample_points() if self.geometry_at(p).Z < 1]
        if not points:
            raise KgpropValidationError("the specialty suite needs grid points with Z < 1", field="grid")

        def one(point: Point) -> float:
            geom = self.geometry_at(point)
            f = op_feynman_ds(self.d, self.nu, PropagatorKind.F, geom, self.config)
            fbar = op_feynman_ds(self.d, self.nu, PropagatorKind.FBAR, geom, self.config)
            return _feynman_sum(f, fbar)

        worst = max(self.sampled(one, points))
        return [CheckResult("feynman_sum", worst, self.scenario.threshold(Suite.SPECIALTY))]


class AntiDeSitterRunner(BaseRunner):
    """
    Kernels of the operator-theoretic state on the universal cover.

    The grid runs over (tau, u); x' = (tau_prime, u_prime) at angle theta.
    """

    geometry = Geometry.ADS
    kinds = (
        PropagatorKind.F,
        PropagatorKind.FBAR,
        PropagatorKind.OP_F,
        PropagatorKind.OP_FBAR,
        PropagatorKind.POS,
        PropagatorKind.NEG,
        PropagatorKind.SYM,
        PropagatorKind.RET,
        PropagatorKind.ADV,
        PropagatorKind.PJ,
    )
    coordinate_columns = ("tau", "tau_prime", "u", "u_prime", "theta", "Z", "n", "region")

    d: int
    nu: Union[float, complex]

    def _prepare(self) -> None:
        self.d = check_dimension(self.real("d"))
        self.nu = ads_nu(self.d, self.real("m2")) if "m2" in self.parameters else self.number("nu")
        self.tau_prime = self.real("tau_prime", 0.0)
        self.u_prime = self.real("u_prime", 0.0)
        self.theta = self.real("theta", 0.0)

    def geometry_at(self, point: Point) -> AdsPairGeometry:
        return ads_pair(point[0], point[1], self.tau_prime, self.u_prime, self.theta, self.config)

    def usable(self, point: Point) -> bool:
        return not self.geometry_at(point).null_separated

    def rows(self, point: Point, kind: PropagatorKind) -> List[Row]:
        geom = self.geometry_at(point)
        value = ads_kernel(self.d, self.nu, kind, geom, self.config)
        return [
            [
                point[0],
                self.tau_prime,
                point[1],
                self.u_prime,
                self.theta,
                geom.Z,
                geom.n,
                geom.region,
                value.real,
                value.imag,
            ]
        ]

    def identity_checks(self) -> List[CheckResult]:
        """Propagator identities at every usable grid point."""
        worst = worst_by_name(
            self.sampled(
                lambda p: ads_identity_residuals(self.d, self.nu, self.geometry_at(p), self.config),
                self.sample_points(),
            )
        )
        return checks_from(worst, self.scenario.threshold(Suite.IDENTITIES))

    def specialty_checks(self) -> List[CheckResult]:
        """F + Fbar on the points of the central region V_0."""
        points = [p for p in self.sample_points() if self.geometry_at(p).region == 0]
        if not points:
            raise KgpropValidationError("the specialty suite needs grid points in the region V_0", field="grid")

        def one(point: Point) -> float:
            geom = self.geometry_at(point)
            f = op_feynman_ads(self.d, self.nu, PropagatorKind.F, geom, config=self.config)
            fbar = op_feynman_ads(self.d, self.nu, PropagatorKind.FBAR, geom, config=self.config)
            return _feynman_sum(f, fbar)

        worst = max(self.sampled(one, points))
        return [CheckResult("feynman_sum", worst, self.scenario.threshold(Suite.SPECIALTY))]
