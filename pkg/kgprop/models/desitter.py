"""
de Sitter points, pair geometry and vacuum labels.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Sequence, Tuple, Union

from kgprop.errors import DomainError, KgpropValidationError
from kgprop.models.common import Number

UNIT_TOL = 1e-10


class DsRegion(str, Enum):
    """
    Position of x relative to x'.

    V+ and V- are the future and past cones (Z > 1), A+ and A- the cones of the
    antipode (Z < -1) and S the spacelike band |Z| < 1.
    """

    V_PLUS = "V+"
    V_MINUS = "V-"
    A_PLUS = "A+"
    A_MINUS = "A-"
    S = "S"


def classify_ds_region(Z: float, t: float, tA: float) -> DsRegion:
    """Region of a pair from its invariant Z and the time differences t, tA."""
    if Z > 1:
        return DsRegion.V_PLUS if t > 0 else DsRegion.V_MINUS
    if Z < -1:
        return DsRegion.A_PLUS if tA < 0 else DsRegion.A_MINUS
    return DsRegion.S


@dataclass(frozen=True)
class DsPoint:
    """
    A point of global de Sitter space dS_d of unit radius.

    The embedding is x = (sinh tau, cosh tau * omega) with omega on S^{d-1}.

    Attributes:
        tau: Global time.
        omega: Unit vector in R^d.
    """

    tau: float
    omega: Tuple[float, ...]

    def __post_init__(self) -> None:
        omega = tuple(float(w) for w in self.omega)
        if len(omega) < 2:
            raise KgpropValidationError("omega needs at least two components (d >= 2)", field="omega")
        norm = math.sqrt(sum(w * w for w in omega))
        if abs(norm - 1) > UNIT_TOL:
            raise DomainError(f"omega must be a unit vector, |omega|={norm:.12g}", field="omega")
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "omega", omega)

    @classmethod
    def zonal(cls, tau: float, theta: float, d: int) -> "DsPoint":
        """The point at polar angle theta from the north pole (1, 0, ..., 0)."""
        if int(d) != d or d < 2:
            raise KgpropValidationError(f"d must be an integer >= 2, got {d}", field="d")
        return cls(tau, (math.cos(theta), math.sin(theta)) + (0.0,) * (int(d) - 2))

    @property
    def d(self) -> int:
        return len(self.omega)

    @property
    def embedding(self) -> Tuple[float, ...]:
        c = math.cosh(self.tau)
        return (math.sinh(self.tau),) + tuple(c * w for w in self.omega)

    def antipodal(self) -> "DsPoint":
        """x^A = -x, i.e. (tau, omega) -> (-tau, -omega)."""
        return DsPoint(-self.tau, tuple(-w for w in self.omega))

    def to_dict(self) -> Dict[str, Any]:
        return {"tau": self.tau, "omega": list(self.omega)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DsPoint":
        return cls(float(data["tau"]), tuple(data["omega"]))


@dataclass(frozen=True)
class DsPairGeometry:
    """
    Invariant description of a pair (x, x').

    Attributes:
        Z: [x|x'] = -x^0 x'^0 + x.x'.
        t: x^0 - x'^0.
        tA: -(x^0 + x'^0), the time difference of x^A and x'.
        region: Region of x relative to x'.
        null_separated: True when |Z| is within the light-cone tolerance of 1.
    """

    Z: float
    t: float
    tA: float
    region: DsRegion
    null_separated: bool = False

    @classmethod
    def from_invariants(cls, Z: float, t: float = 0.0, tA: float = 0.0, tol: float = 1e-10) -> "DsPairGeometry":
        """
        Build a geometry directly from (Z, t, tA).

        Raises:
            DomainError: If Z > 1 with t = 0 or Z < -1 with tA = 0, which no pair of points realizes.
        """
        Z, t, tA = float(Z), float(t), float(tA)
        null = abs(abs(Z) - 1) < tol
        if not null and Z > 1 and t == 0:
            raise DomainError("timelike pairs (Z > 1) need a nonzero t", field="t")
        if not null and Z < -1 and tA == 0:
            raise DomainError("pairs with Z < -1 need a nonzero tA", field="tA")
        return cls(Z, t, tA, classify_ds_region(Z, t, tA), null)

    def antipodal(self) -> "DsPairGeometry":
        """Geometry of (x^A, x'): Z -> -Z and t <-> tA."""
        return DsPairGeometry(-self.Z, self.tA, self.t, classify_ds_region(-self.Z, self.tA, self.t), self.null_separated)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "Z": self.Z,
            "t": self.t,
            "tA": self.tA,
            "region": self.region.value,
            "null_separated": self.null_separated,
        }


@dataclass(frozen=True)
class VacuumParameter:
    """
    Label of a de Sitter invariant alpha-vacuum; 0 is the Euclidean state.

    Attributes:
        alpha: Complex parameter with |alpha| < 1.
    """

    alpha: complex = 0j

    def __post_init__(self) -> None:
        alpha = complex(self.alpha)
        if not abs(alpha) < 1:
            raise DomainError(f"vacuum parameter needs |alpha| < 1, got |alpha|={abs(alpha):g}", field="alpha")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def of(cls, value: Union["VacuumParameter", Number]) -> "VacuumParameter":
        return value if isinstance(value, VacuumParameter) else cls(complex(value))

    def overlap(self, other: "VacuumParameter") -> complex:
        """1 - conj(beta) alpha for self = alpha and other = beta."""
        return 1 - other.alpha.conjugate() * self.alpha

    def to_dict(self) -> Dict[str, Any]:
        return {"re": self.alpha.real, "im": self.alpha.imag}

    @classmethod
    def from_dict(cls, data: Any) -> "VacuumParameter":
        """Accept {"re": ..., "im": ...}, a [re, im] pair or a real number."""
        if isinstance(data, dict):
            return cls(complex(data.get("re", 0.0), data.get("im", 0.0)))
        if isinstance(data, Sequence) and not isinstance(data, str):
            re, im = data
            return cls(complex(re, im))
        return cls(complex(data))
