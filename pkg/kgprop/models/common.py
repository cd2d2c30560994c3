"""
Common value types: cut-plane arguments, Gegenbauer indices and kernel kinds.
"""

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Any, Dict, Union

from typing_extensions import TypeAlias

from kgprop.errors import KgpropValidationError

Number: TypeAlias = Union[int, float, complex]


class Side(IntEnum):
    """Approach direction for a real argument lying on a branch cut."""

    BELOW = -1
    OFF = 0
    ABOVE = 1

    def flipped(self) -> "Side":
        """Side seen after multiplying the argument by a negative number."""
        return Side(-int(self))

    @classmethod
    def parse(cls, value: Any) -> "Side":
        """Accept a Side, an int sign or one of 'above', 'below', 'off'."""
        if isinstance(value, Side):
            return value
        if isinstance(value, int):
            return cls(max(-1, min(1, value)))
        if isinstance(value, str):
            key = value.strip().upper()
            if key in cls.__members__:
                return cls[key]
        raise KgpropValidationError(f"Unknown side: {value!r}", field="side")


@dataclass(frozen=True)
class CutComplex:
    """
    A point of a cut plane.

    Attributes:
        value: The complex value.
        side: ABOVE/BELOW select the boundary value x +/- i0 when the value is real
            and lies on a cut; OFF otherwise.
    """

    value: complex
    side: Side = Side.OFF

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "side", Side.parse(self.side))
        if self.value.imag != 0 and self.side is not Side.OFF:
            raise KgpropValidationError("side must be OFF when the imaginary part is nonzero", field="side")

    @classmethod
    def of(cls, z: Union["CutComplex", Number]) -> "CutComplex":
        """Wrap a plain number (side OFF); pass CutComplex through."""
        if isinstance(z, CutComplex):
            return z
        return cls(complex(z))

    @classmethod
    def derived(cls, value: Number, side: Side) -> "CutComplex":
        """Build an intermediate argument, dropping the side when it is not real."""
        value = complex(value)
        return cls(value, side if value.imag == 0 else Side.OFF)

    @classmethod
    def above(cls, x: float) -> "CutComplex":
        return cls(complex(x), Side.ABOVE)

    @classmethod
    def below(cls, x: float) -> "CutComplex":
        return cls(complex(x), Side.BELOW)

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0

    @property
    def real(self) -> float:
        return self.value.real

    def negated(self) -> "CutComplex":
        """-z with the side flipped."""
        return CutComplex.derived(-self.value, self.side.flipped())

    def shifted(self, delta: float) -> "CutComplex":
        """z + delta for real delta, keeping the side."""
        return CutComplex.derived(self.value + delta, self.side)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {"re": self.value.real, "im": self.value.imag, "side": self.side.name.lower()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CutComplex":
        """Create a CutComplex from a dictionary."""
        return cls(complex(data.get("re", 0.0), data.get("im", 0.0)), Side.parse(data.get("side", "off")))


@dataclass(frozen=True)
class GegenbauerParams:
    """
    Indices of the Gegenbauer equation.

    Attributes:
        alpha: The index alpha.
        lam: The index lambda.
    """

    alpha: complex
    lam: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "lam", complex(self.lam))

    def with_lam(self, lam: Number) -> "GegenbauerParams":
        return GegenbauerParams(self.alpha, lam)

    def with_alpha(self, alpha: Number) -> "GegenbauerParams":
        return GegenbauerParams(alpha, self.lam)

    def negated(self) -> "GegenbauerParams":
        """(-alpha, -lambda)."""
        return GegenbauerParams(-self.alpha, -self.lam)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "lam": [self.lam.real, self.lam.imag],
        }


class PropagatorKind(str, Enum):
    """Kernel types shared by all geometries."""

    PJ = "PJ"
    RET = "Ret"
    ADV = "Adv"
    F = "F"
    FBAR = "Fbar"
    POS = "Pos"
    NEG = "Neg"
    SYM = "Sym"
    SYM_A = "SymA"
    PJ_A = "PJA"
    OP_F = "OpF"
    OP_FBAR = "OpFbar"

    @classmethod
    def parse(cls, value: Any) -> "PropagatorKind":
        """Accept an enum member, its value or its name (case-insensitive)."""
        if isinstance(value, PropagatorKind):
            return value
        text = str(value).strip()
        for member in cls:
            if text == member.value or text.upper() == member.name or text.lower() == member.value.lower():
                return member
        raise KgpropValidationError(f"Unknown propagator kind: {value!r}", field="kind")

    @property
    def is_classical(self) -> bool:
        """Kinds fixed by the causal structure alone."""
        return self in (PropagatorKind.PJ, PropagatorKind.RET, PropagatorKind.ADV)

    @property
    def needs_frequency_split(self) -> bool:
        return self in (PropagatorKind.POS, PropagatorKind.NEG, PropagatorKind.F, PropagatorKind.FBAR)
