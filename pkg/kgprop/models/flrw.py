"""
FLRW scale factors and models.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from kgprop.errors import KgpropValidationError
from kgprop.models.potential import ModeReport

RealFunction = Callable[[float], float]


class ScaleFactorKind(str, Enum):
    """Named scale factors."""

    CONST = "const"
    COSH = "cosh"
    EXP = "exp"
    GAUSSIAN = "gaussian"
    CALLABLE = "callable"


@dataclass(frozen=True, eq=False)
class ScaleFactor:
    """
    A positive scale factor a(t) with its first two derivatives.

    Named kinds carry closed-form derivatives. Callables without derivatives are
    differentiated by fourth-order central differences with step fd_step * max(1, |t|).

    Attributes:
        kind: Which family a belongs to.
        parameter: c for const, H for exp, the width for gaussian.
        func: a(t) for CALLABLE scale factors.
        derivative: a'(t), optional.
        second_derivative: a''(t), optional.
        decay_rate: Declared exponential rate of the mode potential tails; None if they do not decay.
        decay_constant: Declared prefactor of the tail bound, per unit of |lambda| + 1.
        fd_step: Relative finite-difference step.
        label: Name used in reports.
    """

    kind: ScaleFactorKind
    parameter: float = 1.0
    func: Optional[RealFunction] = None
    derivative: Optional[RealFunction] = None
    second_derivative: Optional[RealFunction] = None
    decay_rate: Optional[float] = None
    decay_constant: float = 1.0
    fd_step: float = 1e-4
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind is ScaleFactorKind.CALLABLE and self.func is None:
            raise KgpropValidationError("Callable scale factor needs func", field="a")
        if self.kind in (ScaleFactorKind.CONST, ScaleFactorKind.GAUSSIAN) and not self.parameter > 0:
            raise KgpropValidationError(f"{self.kind.value} scale factor needs a positive parameter", field="a")
        if not self.fd_step > 0:
            raise KgpropValidationError("fd_step must be positive", field="fd_step")
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        if self.kind is ScaleFactorKind.COSH:
            return "cosh"
        if self.kind is ScaleFactorKind.CALLABLE:
            return "callable"
        return f"{self.kind.value}({self.parameter:g})"

    @classmethod
    def const(cls, c: float = 1.0) -> "ScaleFactor":
        return cls(ScaleFactorKind.CONST, float(c), decay_rate=1.0, decay_constant=0.0)

    @classmethod
    def cosh(cls) -> "ScaleFactor":
        """a(t) = cosh(t): global de Sitter of unit radius."""
        return cls(ScaleFactorKind.COSH, decay_rate=2.0, decay_constant=4.0)

    @classmethod
    def exp(cls, hubble: float = 1.0) -> "ScaleFactor":
        """a(t) = exp(H t); the mode potentials do not decay."""
        return cls(ScaleFactorKind.EXP, float(hubble))

    @classmethod
    def gaussian(cls, width: float) -> "ScaleFactor":
        """a(t) = exp(t^2 / width); the mode potentials grow quadratically."""
        return cls(ScaleFactorKind.GAUSSIAN, float(width))

    @classmethod
    def from_callable(
        cls,
        func: RealFunction,
        derivative: Optional[RealFunction] = None,
        second_derivative: Optional[RealFunction] = None,
        decay_rate: Optional[float] = None,
        decay_constant: float = 1.0,
        fd_step: float = 1e-4,
        label: str = "callable",
    ) -> "ScaleFactor":
        return cls(
            ScaleFactorKind.CALLABLE,
            func=func,
            derivative=derivative,
            second_derivative=second_derivative,
            decay_rate=decay_rate,
            decay_constant=decay_constant,
            fd_step=fd_step,
            label=label,
        )

    @property
    def decays(self) -> bool:
        return self.decay_rate is not None

    def __call__(self, t: float) -> float:
        t = float(t)
        if self.kind is ScaleFactorKind.CONST:
            return self.parameter
        if self.kind is ScaleFactorKind.COSH:
            return math.cosh(t)
        if self.kind is ScaleFactorKind.EXP:
            return math.exp(self.parameter * t)
        if self.kind is ScaleFactorKind.GAUSSIAN:
            return math.exp(t * t / self.parameter)
        assert self.func is not None
        value = float(self.func(t))
        if not value > 0:
            raise KgpropValidationError(f"scale factor must be positive, got a({t:g})={value:g}", field="a")
        return value

    def _stencil(self, t: float) -> Tuple[float, List[float]]:
        h = self.fd_step * max(1.0, abs(t))
        return h, [self(t + j * h) for j in (-2, -1, 0, 1, 2)]

    def first(self, t: float) -> float:
        """a'(t)."""
        t = float(t)
        if self.kind is ScaleFactorKind.CONST:
            return 0.0
        if self.kind is ScaleFactorKind.COSH:
            return math.sinh(t)
        if self.kind is ScaleFactorKind.EXP:
            return self.parameter * math.exp(self.parameter * t)
        if self.kind is ScaleFactorKind.GAUSSIAN:
            return 2 * t / self.parameter * math.exp(t * t / self.parameter)
        if self.derivative is not None:
            return float(self.derivative(t))
        h, (am2, am1, _, ap1, ap2) = self._stencil(t)
        return (am2 - 8 * am1 + 8 * ap1 - ap2) / (12 * h)

    def second(self, t: float) -> float:
        """a''(t)."""
        t = float(t)
        if self.kind is ScaleFactorKind.CONST:
            return 0.0
        if self.kind is ScaleFactorKind.COSH:
            return math.cosh(t)
        if self.kind is ScaleFactorKind.EXP:
            return self.parameter**2 * math.exp(self.parameter * t)
        if self.kind is ScaleFactorKind.GAUSSIAN:
            w = self.parameter
            return (2 / w + 4 * t * t / (w * w)) * math.exp(t * t / w)
        if self.second_derivative is not None:
            return float(self.second_derivative(t))
        h, (am2, am1, a0, ap1, ap2) = self._stencil(t)
        return (-am2 + 16 * am1 - 30 * a0 + 16 * ap1 - ap2) / (12 * h * h)

    def hubble(self, t: float) -> float:
        """a'/a."""
        return self.first(t) / self(t)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary (callables serialize their label only)."""
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.kind in (ScaleFactorKind.CONST, ScaleFactorKind.EXP, ScaleFactorKind.GAUSSIAN):
            data["parameter"] = self.parameter
        if self.kind is ScaleFactorKind.CALLABLE:
            data["label"] = self.label
        return data

    @classmethod
    def from_dict(cls, data: Any) -> "ScaleFactor":
        """
        Create a named scale factor from "cosh" or {"kind": ..., "parameter": ...}.

        Raises:
            KgpropValidationError: For unknown kinds or callables.
        """
        if isinstance(data, str):
            data = {"kind": data}
        if not isinstance(data, dict):
            raise KgpropValidationError("scale factor must be a name or an object", field="a")
        try:
            kind = ScaleFactorKind(str(data.get("kind", "")).lower())
        except ValueError:
            raise KgpropValidationError(f"Unknown scale factor: {data.get('kind')!r}", field="a") from None
        if kind is ScaleFactorKind.CONST:
            return cls.const(float(data.get("parameter", 1.0)))
        if kind is ScaleFactorKind.COSH:
            return cls.cosh()
        if kind is ScaleFactorKind.EXP:
            return cls.exp(float(data.get("parameter", 1.0)))
        if kind is ScaleFactorKind.GAUSSIAN:
            if "parameter" not in data:
                raise KgpropValidationError("gaussian scale factor needs 'parameter' (the width)", field="a")
            return cls.gaussian(float(data["parameter"]))
        raise KgpropValidationError("Callable scale factors cannot be read from data", field="a")


@dataclass(frozen=True, eq=False)
class FlrwModel:
    """
    The metric -dt^2 + a(t)^2 g_Sigma in d spacetime dimensions, reduced to Laplacian modes.

    Attributes:
        a: Scale factor.
        d: Spacetime dimension.
        spectrum: Eigenvalues lambda of -Delta on the spatial slice.
        labels: One name per eigenvalue.
    """

    a: ScaleFactor
    d: int
    spectrum: Tuple[float, ...] = ()
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 2:
            raise KgpropValidationError(f"d must be an integer >= 2, got {self.d}", field="d")
        spectrum = tuple(float(x) for x in self.spectrum)
        labels = tuple(self.labels) or tuple(f"lambda={x:g}" for x in spectrum)
        if len(labels) != len(spectrum):
            raise KgpropValidationError("labels must match the spectrum", field="labels")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "spectrum", spectrum)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def sphere(cls, a: ScaleFactor, d: int, l_max: int) -> "FlrwModel":
        """Spatial slice S^{d-1}: lambda = l(l+d-2) for l = 0..l_max."""
        ls = range(int(l_max) + 1)
        return cls(a, d, tuple(l * (l + d - 2) for l in ls), tuple(f"l={l}" for l in ls))

    @property
    def gauge_power(self) -> float:
        """(d-1)/2."""
        return 0.5 * (self.d - 1)

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a.to_dict(), "d": self.d, "modes": list(self.spectrum)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FlrwModel":
        """Create a model from {"a": ..., "d": ..., "modes": [...]} or {"l_max": ...} for the sphere."""
        if "a" not in data or "d" not in data:
            raise KgpropValidationError("flrw model needs 'a' and 'd'", field="a")
        a = ScaleFactor.from_dict(data["a"])
        if "l_max" in data:
            return cls.sphere(a, int(data["d"]), int(data["l_max"]))
        return cls(a, int(data["d"]), tuple(data.get("modes", ())))


@dataclass
class FlrwScan:
    """
    Per-mode reflection data of an FLRW model at one mass.

    Attributes:
        label: Scale factor name.
        d: Spacetime dimension.
        m: Mass.
        modes: One report per mode, in the order scanned.
        names: Mode labels.
    """

    label: str
    d: int
    m: float
    modes: List[ModeReport]
    names: Sequence[str] = ()

    @property
    def special(self) -> bool:
        """True when every mode is reflectionless."""
        return all(r.special for r in self.modes)

    @property
    def worst_reflection(self) -> float:
        return max((max(r.b_plus, r.b_minus) for r in self.modes), default=0.0)

    def failing(self) -> List[ModeReport]:
        return [r for r in self.modes if not r.special]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "a": self.label,
            "d": self.d,
            "m": self.m,
            "special": self.special,
            "modes": [dict(r.to_dict(), name=name) for r, name in zip(self.modes, self.names or [""] * len(self.modes))],
        }
