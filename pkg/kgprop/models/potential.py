"""
One-dimensional potentials, Jost solution pairs and scattering data.
"""

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import interpolate

from kgprop.errors import KgpropValidationError, NotJostAdmissible

ArrayLike = Union[float, np.ndarray]
ScaledBranch = Callable[[float], Tuple[complex, complex]]


class PotentialKind(str, Enum):
    """Families of one-dimensional potentials."""

    ZERO = "zero"
    SCARF = "scarf"
    POSCHL_TELLER = "poschl_teller"
    TABULATED = "tabulated"
    CALLABLE = "callable"


class Direction(str, Enum):
    """Support of a classical Green function."""

    FORWARD = "forward"
    BACKWARD = "backward"

    @classmethod
    def parse(cls, value: Any) -> "Direction":
        if isinstance(value, Direction):
            return value
        text = str(value).strip().lower()
        aliases = {"ret": cls.FORWARD, "adv": cls.BACKWARD}
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            raise KgpropValidationError(f"Unknown direction: {value!r}", field="direction") from None


@dataclass(frozen=True, eq=False)
class Potential:
    """
    A potential V(t) on the real line with declared asymptotics.

    V tends to `offset` at both ends and |V(t) - offset| <= decay_constant * exp(-decay_rate |t|).

    Attributes:
        kind: The family.
        mu: Scarf index, V = offset - (mu^2 - 1/4) / cosh(t)^2.
        alpha: First trigonometric Poschl-Teller index.
        nu: Second trigonometric Poschl-Teller index.
        grid: Sample points of a tabulated potential.
        values: Sampled values of a tabulated potential.
        func: Vectorized callable for CALLABLE potentials.
        decay_rate: Declared exponential rate a of the tail; None if the tail does not decay.
        decay_constant: Declared constant C of the tail bound.
        offset: Limit of V at +-oo.
        label: Free-form name used in reports.
    """

    kind: PotentialKind
    mu: Optional[float] = None
    alpha: Optional[float] = None
    nu: Optional[float] = None
    grid: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    func: Optional[Callable[[ArrayLike], ArrayLike]] = None
    decay_rate: Optional[float] = None
    decay_constant: float = 1.0
    offset: float = 0.0
    label: str = ""
    _spline: Optional[interpolate.CubicSpline] = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind is PotentialKind.TABULATED:
            if self.grid is None or self.values is None:
                raise KgpropValidationError("Tabulated potential needs grid and values", field="grid")
            grid = np.asarray(self.grid, dtype=float)
            values = np.asarray(self.values, dtype=float)
            if grid.ndim != 1 or grid.shape != values.shape or grid.size < 4:
                raise KgpropValidationError("grid and values must be matching 1D arrays of length >= 4", field="grid")
            if np.any(np.diff(grid) <= 0):
                raise KgpropValidationError("grid must be strictly increasing", field="grid")
            object.__setattr__(self, "grid", grid)
            object.__setattr__(self, "values", values)
            object.__setattr__(self, "_spline", interpolate.CubicSpline(grid, values - self.offset))
        if self.kind is PotentialKind.CALLABLE and self.func is None:
            raise KgpropValidationError("Callable potential needs func", field="func")
        if self.decay_rate is not None and not self.decay_rate > 0:
            raise KgpropValidationError("decay_rate must be positive", field="decay_rate")

    @classmethod
    def zero(cls, offset: float = 0.0) -> "Potential":
        """The constant potential V = offset."""
        return cls(PotentialKind.ZERO, decay_rate=1.0, decay_constant=0.0, offset=offset, label="zero")

    @classmethod
    def scarf(cls, mu: float, offset: float = 0.0) -> "Potential":
        """Symmetric Scarf potential offset - (mu^2 - 1/4)/cosh(t)^2."""
        strength = abs(mu * mu - 0.25)
        return cls(
            PotentialKind.SCARF,
            mu=float(mu),
            decay_rate=2.0,
            decay_constant=4 * strength,
            offset=offset,
            label=f"scarf({mu:g})",
        )

    @classmethod
    def poschl_teller(cls, alpha: float, nu: float) -> "Potential":
        """Trigonometric Poschl-Teller potential on (0, pi/2); not Jost-admissible."""
        return cls(PotentialKind.POSCHL_TELLER, alpha=float(alpha), nu=float(nu), label=f"pt({alpha:g},{nu:g})")

    @classmethod
    def tabulated(
        cls,
        grid: Any,
        values: Any,
        decay_rate: Optional[float],
        decay_constant: float = 1.0,
        offset: float = 0.0,
    ) -> "Potential":
        """Cubic-spline potential; equal to `offset` outside the grid."""
        return cls(
            PotentialKind.TABULATED,
            grid=np.asarray(grid, dtype=float),
            values=np.asarray(values, dtype=float),
            decay_rate=decay_rate,
            decay_constant=decay_constant,
            offset=offset,
            label="tabulated",
        )

    @classmethod
    def from_callable(
        cls,
        func: Callable[[ArrayLike], ArrayLike],
        decay_rate: Optional[float],
        decay_constant: float = 1.0,
        offset: float = 0.0,
        label: str = "callable",
    ) -> "Potential":
        return cls(
            PotentialKind.CALLABLE,
            func=func,
            decay_rate=decay_rate,
            decay_constant=decay_constant,
            offset=offset,
            label=label,
        )

    def __call__(self, t: ArrayLike) -> ArrayLike:
        if self.kind is PotentialKind.POSCHL_TELLER:
            assert self.alpha is not None and self.nu is not None
            u = np.asarray(t, dtype=float)
            out = (self.alpha**2 - 0.25) / np.sin(u) ** 2 + (self.nu**2 - 0.25) / np.cos(u) ** 2
            return float(out) if np.ndim(out) == 0 else out
        return self.tail(t) + self.offset

    def tail(self, t: ArrayLike) -> ArrayLike:
        """V(t) - offset."""
        arr = np.asarray(t, dtype=float)
        if self.kind is PotentialKind.ZERO:
            out = np.zeros_like(arr)
        elif self.kind is PotentialKind.SCARF:
            assert self.mu is not None
            out = -(self.mu**2 - 0.25) / np.cosh(arr) ** 2
        elif self.kind is PotentialKind.TABULATED:
            assert self._spline is not None and self.grid is not None
            inside = (arr >= self.grid[0]) & (arr <= self.grid[-1])
            out = np.where(inside, self._spline(np.clip(arr, self.grid[0], self.grid[-1])), 0.0)
        elif self.kind is PotentialKind.CALLABLE:
            assert self.func is not None
            out = np.asarray(self.func(arr), dtype=float) - self.offset
        else:
            out = np.asarray(self(arr), dtype=float)
        return float(out) if np.ndim(out) == 0 else out

    @property
    def has_zero_tail(self) -> bool:
        """True for potentials that are identically equal to their offset."""
        if self.kind is PotentialKind.ZERO:
            return True
        return self.kind is PotentialKind.SCARF and self.mu is not None and abs(self.mu**2 - 0.25) == 0

    @property
    def is_jost_admissible(self) -> bool:
        return self.kind is not PotentialKind.POSCHL_TELLER and self.decay_rate is not None

    def require_jost_admissible(self) -> None:
        """
        Raises:
            NotJostAdmissible: If the potential has no declared decay.
        """
        if not self.is_jost_admissible:
            raise NotJostAdmissible(f"{self.label or self.kind.value} has no declared exponential decay", field="V")

    def kappa(self, k: complex) -> complex:
        """Decay exponent of the Jost solutions: sqrt(k^2 + offset) on the branch continuous with k."""
        k = complex(k)
        if k == 0:
            raise NotJostAdmissible("k = 0 is a threshold point", field="k")
        if self.offset == 0:
            return k
        kappa = k * cmath.sqrt(1 + self.offset / (k * k))
        if kappa.real < -1e-14 or abs(kappa) == 0:
            raise NotJostAdmissible(f"k={k} lies below the threshold of the offset {self.offset:g}", field="k")
        return kappa

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary (callable potentials serialize their declared data only)."""
        data: Dict[str, Any] = {"kind": self.kind.value, "offset": self.offset}
        if self.kind is PotentialKind.SCARF:
            data["mu"] = self.mu
        elif self.kind is PotentialKind.POSCHL_TELLER:
            data["alpha"] = self.alpha
            data["nu"] = self.nu
        elif self.kind is PotentialKind.TABULATED:
            assert self.grid is not None and self.values is not None
            data["grid"] = self.grid.tolist()
            data["values"] = self.values.tolist()
        if self.kind in (PotentialKind.TABULATED, PotentialKind.CALLABLE):
            data["decay_rate"] = self.decay_rate
            data["decay_constant"] = self.decay_constant
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Potential":
        """Create a Potential from a dictionary (zero, scarf, poschl_teller or tabulated)."""
        try:
            kind = PotentialKind(str(data.get("kind", "")).lower())
        except ValueError:
            raise KgpropValidationError(f"Unknown potential kind: {data.get('kind')!r}", field="kind") from None
        offset = float(data.get("offset", 0.0))
        if kind is PotentialKind.ZERO:
            return cls.zero(offset)
        if kind is PotentialKind.SCARF:
            if "mu" not in data:
                raise KgpropValidationError("Scarf potential needs mu", field="mu")
            return cls.scarf(float(data["mu"]), offset)
        if kind is PotentialKind.POSCHL_TELLER:
            return cls.poschl_teller(float(data["alpha"]), float(data["nu"]))
        if kind is PotentialKind.TABULATED:
            rate = data.get("decay_rate")
            return cls.tabulated(
                data["grid"],
                data["values"],
                None if rate is None else float(rate),
                float(data.get("decay_constant", 1.0)),
                offset,
            )
        raise KgpropValidationError("Callable potentials cannot be read from data", field="kind")


def _free_continue(kappa: complex, t0: float, psi0: complex, dpsi0: complex, t: float) -> Tuple[complex, complex]:
    """Continue data (psi0, dpsi0) at t0 as a solution of psi'' = kappa^2 psi."""
    down = (kappa * psi0 - dpsi0) / (2 * kappa) * cmath.exp(-kappa * (t - t0))
    up = (kappa * psi0 + dpsi0) / (2 * kappa) * cmath.exp(kappa * (t - t0))
    return down + up, kappa * (up - down)


@dataclass(frozen=True)
class JostSamples:
    """Jost solutions and derivatives sampled on a uniform grid of [-T, T]."""

    grid: np.ndarray
    psi_plus: np.ndarray
    dpsi_plus: np.ndarray
    psi_minus: np.ndarray
    dpsi_minus: np.ndarray


@dataclass(frozen=True, eq=False)
class JostPair:
    """
    The Jost solutions psi_+(k, .) ~ exp(-kappa t) at +oo and psi_-(k, .) ~ exp(kappa t) at -oo.

    Inside the window [-T, T] the solutions are stored in the scaled form
    psi_+ = exp(-kappa t) u and psi_- = exp(kappa t) v; outside they continue as free
    solutions.

    Attributes:
        k: Spectral parameter.
        kappa: Decay exponent, equal to k for potentials without offset.
        T: Half-width of the matching window.
        plus_scaled: t -> (u, u') on [-T, T].
        minus_scaled: t -> (v, v') on [-T, T].
        exact: True when the pair is known in closed form.
    """

    k: complex
    kappa: complex
    T: float
    plus_scaled: ScaledBranch
    minus_scaled: ScaledBranch
    exact: bool = False

    def plus(self, t: float) -> Tuple[complex, complex]:
        """(psi_+(t), psi_+'(t))."""
        kappa, T = self.kappa, self.T
        if t >= T:
            e = cmath.exp(-kappa * t)
            return e, -kappa * e
        if t < -T:
            psi0, dpsi0 = self.plus(-T)
            return _free_continue(kappa, -T, psi0, dpsi0, t)
        u, du = self.plus_scaled(t)
        e = cmath.exp(-kappa * t)
        return e * u, e * (du - kappa * u)

    def minus(self, t: float) -> Tuple[complex, complex]:
        """(psi_-(t), psi_-'(t))."""
        kappa, T = self.kappa, self.T
        if t <= -T:
            e = cmath.exp(kappa * t)
            return e, kappa * e
        if t > T:
            psi0, dpsi0 = self.minus(T)
            return _free_continue(kappa, T, psi0, dpsi0, t)
        v, dv = self.minus_scaled(t)
        e = cmath.exp(kappa * t)
        return e * v, e * (dv + kappa * v)

    def wronskian_at(self, t: float) -> Tuple[complex, float]:
        """
        W(psi_+, psi_-)(t) and the size of its largest term.

        Inside the window the scaled form u v' - u' v + 2 kappa u v is used.
        """
        if -self.T <= t <= self.T:
            u, du = self.plus_scaled(t)
            v, dv = self.minus_scaled(t)
            terms = (u * dv, -du * v, 2 * self.kappa * u * v)
        else:
            p, dp = self.plus(t)
            q, dq = self.minus(t)
            terms = (p * dq, -dp * q, 0j)
        return sum(terms), max(abs(x) for x in terms)

    def samples(self, num: int = 201) -> JostSamples:
        """Sample both solutions on a uniform grid of [-T, T]."""
        grid = np.linspace(-self.T, self.T, num)
        plus = np.array([self.plus(float(t)) for t in grid], dtype=complex)
        minus = np.array([self.minus(float(t)) for t in grid], dtype=complex)
        return JostSamples(grid, plus[:, 0], plus[:, 1], minus[:, 0], minus[:, 1])


@dataclass(frozen=True)
class ScatteringData:
    """
    Coefficients of psi_+(+-im) = A psi_-(-+im) + B psi_+(-+im).

    Attributes:
        m: Mass.
        a_plus: A(im).
        b_plus: B(im).
        a_minus: A(-im).
        b_minus: B(-im).
        condition: Largest condition number of the two matching systems.
        wronskian_discrepancy: Largest difference between the matched and the Wronskian coefficients.
    """

    m: float
    a_plus: complex
    b_plus: complex
    a_minus: complex
    b_minus: complex
    condition: float = 1.0
    wronskian_discrepancy: float = 0.0

    @property
    def reflection(self) -> float:
        """max(|B(im)|, |B(-im)|)."""
        return max(abs(self.b_plus), abs(self.b_minus))

    def is_reflectionless(self, tol: float = 1e-6) -> bool:
        return self.reflection < tol

    def as_tuple(self) -> Tuple[complex, complex, complex, complex]:
        return (self.a_plus, self.b_plus, self.a_minus, self.b_minus)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        out: Dict[str, Any] = {"m": self.m}
        for name in ("a_plus", "b_plus", "a_minus", "b_minus"):
            value = getattr(self, name)
            out[name] = [value.real, value.imag]
        out["reflection"] = self.reflection
        out["condition"] = self.condition
        return out


@dataclass
class ModeReport:
    """
    Reflection data of one mode of a scan.

    Attributes:
        parameter: Mode label (Laplacian eigenvalue, Scarf index, ...).
        m: Mass.
        b_plus: |B(im)|.
        b_minus: |B(-im)|.
        special: True when both are below the tolerance.
    """

    parameter: float
    m: float
    b_plus: float
    b_minus: float
    special: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parameter": self.parameter,
            "m": self.m,
            "b_plus": self.b_plus,
            "b_minus": self.b_minus,
            "special": self.special,
        }


def mode_reports_special(reports: List[ModeReport]) -> bool:
    """True when every mode is reflectionless."""
    return all(r.special for r in reports)


def window_for(potential: Potential, threshold: float) -> float:
    """Smallest T with decay_constant * exp(-decay_rate T) below threshold (at least 1)."""
    potential.require_jost_admissible()
    assert potential.decay_rate is not None
    if potential.has_zero_tail or potential.decay_constant <= threshold:
        return 1.0
    return max(1.0, math.log(potential.decay_constant / threshold) / potential.decay_rate)
