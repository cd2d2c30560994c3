"""
Runners for mode-truncated dynamics: static models and time-dependent generator families.
"""

import math
from typing import Any, Dict, List

import numpy as np

from kgprop.errors import KgpropValidationError
from kgprop.evolution import bogoliubov_map, static_kernels, twostate_kernels
from kgprop.models.common import PropagatorKind
from kgprop.models.evolution import DynamicsFamily, StaticModel
from kgprop.models.scenario import Geometry, Suite
from kgprop.runners.base import BaseRunner, CheckResult, Point, Row, checks_from, worst_by_name
from kgprop.spacetimes.base import identity_residuals

# asymptotic regions start this many switching widths away from t = 0
SWITCH_SPAN = 20.0

_IDENTITY_KINDS = (
    PropagatorKind.F,
    PropagatorKind.FBAR,
    PropagatorKind.POS,
    PropagatorKind.NEG,
    PropagatorKind.RET,
    PropagatorKind.ADV,
    PropagatorKind.PJ,
)


def _matrix_rows(t: float, s: float, matrix: np.ndarray) -> List[Row]:
    n = matrix.shape[0]
    return [[t, s, i, j, matrix[i, j].real, matrix[i, j].imag] for i in range(n) for j in range(n)]


def _square(value: Any, name: str) -> np.ndarray:
    try:
        arr = np.atleast_2d(np.asarray(value, dtype=float))
    except (TypeError, ValueError):
        raise KgpropValidationError(f"{name} must be a real matrix", field=name) from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise KgpropValidationError(f"{name} must be a square matrix, got shape {arr.shape}", field=name)
    return arr


class StaticRunner(BaseRunner):
    """Propagators of d^2/dt^2 + L with constant Hermitian L; one CSV row per matrix entry."""

    geometry = Geometry.STATIC
    kinds = (
        PropagatorKind.PJ,
        PropagatorKind.RET,
        PropagatorKind.ADV,
        PropagatorKind.POS,
        PropagatorKind.NEG,
        PropagatorKind.SYM,
        PropagatorKind.F,
        PropagatorKind.FBAR,
        PropagatorKind.OP_F,
        PropagatorKind.OP_FBAR,
    )
    coordinate_columns = ("t", "s", "i", "j")

    model: StaticModel

    def _prepare(self) -> None:
        self.model = StaticModel.from_dict(self.parameters)

    def rows(self, point: Point, kind: PropagatorKind) -> List[Row]:
        t, s = point
        return _matrix_rows(t, s, static_kernels(self.model, kind, t, s, self.config))

    def identity_checks(self) -> List[CheckResult]:
        """The propagator identities entry by entry at every grid point."""

        def one(point: Point) -> Dict[str, float]:
            t, s = point
            mats = {kind: static_kernels(self.model, kind, t, s, self.config) for kind in _IDENTITY_KINDS}
            n = self.model.n
            return worst_by_name(
                identity_residuals(lambda kind: complex(mats[kind][i, j])) for i in range(n) for j in range(n)
            )

        worst = worst_by_name(self.sampled(one, self.scenario.points()))
        return checks_from(worst, self.scenario.threshold(Suite.IDENTITIES))

    def specialty_checks(self) -> List[CheckResult]:
        """The operator-theoretic Feynman kernels coincide with those of the static vacuum."""

        def one(point: Point) -> Dict[str, float]:
            t, s = point
            out = {}
            for op, state in ((PropagatorKind.OP_F, PropagatorKind.F), (PropagatorKind.OP_FBAR, PropagatorKind.FBAR)):
                a = static_kernels(self.model, op, t, s, self.config)
                b = static_kernels(self.model, state, t, s, self.config)
                out[f"{op.value}_vs_{state.value}"] = float(np.max(np.abs(a - b))) / max(1.0, float(np.max(np.abs(b))))
            return out

        worst = worst_by_name(self.sampled(one, self.scenario.points()))
        return checks_from(worst, self.scenario.threshold(Suite.SPECIALTY))


class DynamicsRunner(BaseRunner):
    """
    In/out two-state kernels of a generator family.

    L is either constant or switched from L to L_plus by (1 + tanh(t / width)) / 2;
    W is constant. Pos and Neg are the out-in frequency kernels.
    """

    geometry = Geometry.DYNAMICS
    kinds = _IDENTITY_KINDS
    coordinate_columns = ("t", "s", "i", "j")

    family: DynamicsFamily

    def _prepare(self) -> None:
        lower = _square(self.parameters["L"], "L")
        W = self.parameters.get("W")
        if "L_plus" in self.parameters:
            upper = _square(self.parameters["L_plus"], "L_plus")
            if upper.shape != lower.shape:
                raise KgpropValidationError("L and L_plus must have the same shape", field="L_plus")
            width = self.real("width", 1.0)
            if not width > 0:
                raise KgpropValidationError("width must be positive", field="width")

            def L(t: float) -> np.ndarray:
                return lower + (upper - lower) * 0.5 * (1.0 + math.tanh(t / width))

            t_minus = self.real("t_minus", -SWITCH_SPAN * width)
            t_plus = self.real("t_plus", SWITCH_SPAN * width)
            self.family = DynamicsFamily.from_blocks(L, W, t_minus, t_plus, self.parameters.get("lapse"), "switched")
        else:
            self.family = DynamicsFamily.from_blocks(
                lower, W, self.real("t_minus", 0.0), self.real("t_plus", 0.0), self.parameters.get("lapse"), "constant"
            )

    def _kernel(self, point: Point, kind: PropagatorKind) -> np.ndarray:
        k = twostate_kernels(self.family, point[0], point[1], self.config)
        return {
            PropagatorKind.F: k.feynman,
            PropagatorKind.FBAR: k.anti_feynman,
            PropagatorKind.POS: k.pos_out_in,
            PropagatorKind.NEG: k.neg_out_in,
            PropagatorKind.RET: k.ret,
            PropagatorKind.ADV: k.adv,
            PropagatorKind.PJ: k.pj,
        }[kind]

    def rows(self, point: Point, kind: PropagatorKind) -> List[Row]:
        return _matrix_rows(point[0], point[1], self._kernel(point, kind))

    def identity_checks(self) -> List[CheckResult]:
        """Identities between the in/out kernels at every grid point."""
        worst = worst_by_name(
            self.sampled(
                lambda p: twostate_kernels(self.family, p[0], p[1], self.config).identity_residuals(),
                self.scenario.points(),
            )
        )
        return checks_from(worst, self.scenario.threshold(Suite.IDENTITIES))

    def extra_krein_checks(self) -> List[CheckResult]:
        bog = bogoliubov_map(self.family, self.config)
        return [CheckResult("bogoliubov_pseudounitarity", bog.pseudounitarity_residual, self.scenario.threshold(Suite.KREIN))]
