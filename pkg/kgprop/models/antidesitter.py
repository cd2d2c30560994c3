"""
Points and pair geometry on the universal cover of anti-de Sitter space, and
the Poschl-Teller mode report.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from kgprop.errors import DomainError, KgpropValidationError
from kgprop.models.potential import Potential

UNIT_TOL = 1e-10


@dataclass(frozen=True)
class AdsPoint:
    """
    A point of the universal cover in coordinates (tau, u, omega).

    The line element is (-dtau^2 + du^2 + sin(u)^2 domega^2) / cos(u)^2.

    Attributes:
        tau: Uncompactified time.
        u: Radial angle in [0, pi/2).
        omega: Unit vector on S^{d-2}, d-1 components (a sign for d = 2).
    """

    tau: float
    u: float
    omega: Tuple[float, ...] = (1.0,)

    def __post_init__(self) -> None:
        if not 0 <= self.u < math.pi / 2:
            raise DomainError(f"u must lie in [0, pi/2), got {self.u}", field="u")
        omega = tuple(float(w) for w in self.omega)
        if not omega:
            raise KgpropValidationError("omega needs at least one component", field="omega")
        norm = math.sqrt(sum(w * w for w in omega))
        if abs(norm - 1) > UNIT_TOL:
            raise DomainError(f"omega must be a unit vector, |omega|={norm:.12g}", field="omega")
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "omega", omega)

    @classmethod
    def zonal(cls, tau: float, u: float, theta: float, d: int) -> "AdsPoint":
        """The point at angle theta from (1, 0, ...); for d = 2 theta selects the sign of omega."""
        if int(d) != d or d < 2:
            raise KgpropValidationError(f"d must be an integer >= 2, got {d}", field="d")
        if d == 2:
            return cls(tau, u, (1.0 if math.cos(theta) >= 0 else -1.0,))
        return cls(tau, u, (math.cos(theta), math.sin(theta)) + (0.0,) * (int(d) - 3))

    @property
    def d(self) -> int:
        return len(self.omega) + 1

    def to_dict(self) -> Dict[str, Any]:
        return {"tau": self.tau, "u": self.u, "omega": list(self.omega)}


@dataclass(frozen=True)
class AdsPairGeometry:
    """
    Invariant description of a pair (x, x') on the universal cover.

    V_{2n} is the region -(-1)^n Z > 1 around tau - tau' = n pi and V_{2n+1}
    the region |Z| < 1 with tau - tau' in (n pi, (n+1) pi). The chart W_n
    covers V_{2n-1}, V_{2n} and V_{2n+1}; odd regions are assigned to the
    chart below them.

    Attributes:
        Z: Invariant of the pair.
        delta: tau - tau'.
        region: Index k of the region V_k.
        n: Chart index.
        s: sgn(sin|tau - tau'|) on odd regions, 0 on even ones.
        s_tilde: sgn(sin(tau - tau')) on odd regions, 0 on even ones.
        null_separated: True when |Z| is within the tolerance of 1.
    """

    Z: float
    delta: float
    region: int
    n: int
    s: int
    s_tilde: int
    null_separated: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "Z": self.Z,
            "delta": self.delta,
            "region": self.region,
            "n": self.n,
            "s": self.s,
            "s_tilde": self.s_tilde,
            "null_separated": self.null_separated,
        }


class PoschlTellerRegime(str, Enum):
    """Self-adjointness of the radial Poschl-Teller Hamiltonian near the boundary u = pi/2."""

    ESSENTIALLY_SELF_ADJOINT = "essentially_self_adjoint"
    FRIEDRICHS_DISTINGUISHED = "friedrichs_distinguished"
    UNBOUNDED_BELOW = "unbounded_below"


@dataclass(frozen=True)
class PoschlTellerReport:
    """
    Radial reduction of one angular mode of -Box + m^2.

    The mode Hamiltonian is -d^2/du^2 + (alpha^2 - 1/4)/sin^2 u + (nu^2 - 1/4)/cos^2 u.

    Attributes:
        d: Spacetime dimension.
        l: Angular momentum.
        alpha: Index at u = 0.
        nu2: nu^2 = m^2 + ((d-1)/2)^2.
        regime: Classification at the boundary.
        origin_artifact: True when alpha^2 < 1 only reflects polar coordinates at u = 0.
        note: Human-readable remark.
    """

    d: int
    l: int
    alpha: float
    nu2: float
    regime: PoschlTellerRegime
    origin_artifact: bool = False
    note: str = ""

    @property
    def potential(self) -> Optional[Potential]:
        """The mode potential, when nu is real."""
        if self.nu2 < 0:
            return None
        return Potential.poschl_teller(self.alpha, math.sqrt(self.nu2))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "l": self.l,
            "alpha": self.alpha,
            "nu2": self.nu2,
            "regime": self.regime.value,
            "origin_artifact": self.origin_artifact,
            "note": self.note,
        }
