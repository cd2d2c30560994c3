"""
Pieces shared by the de Sitter and anti-de Sitter kernels: Gegenbauer boundary
values, sign conventions, propagator identities, finite-difference residuals
and parallel sampling.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, TypeVar

from kgprop.config import KgpropConfig, resolve_config
from kgprop.errors import KgpropValidationError
from kgprop.models.common import CutComplex, GegenbauerParams, Number, PropagatorKind, Side
from kgprop.specfun import gegenbauer_s, gegenbauer_z

T = TypeVar("T")
R = TypeVar("R")

KernelLookup = Callable[[PropagatorKind], complex]


def check_dimension(d: int) -> int:
    """Validate the spacetime dimension."""
    if int(d) != d or d < 2:
        raise KgpropValidationError(f"d must be an integer >= 2, got {d}", field="d")
    return int(d)


def half_shift(d: int) -> float:
    """(d-1)/2."""
    return 0.5 * (d - 1)


def gegenbauer_params(d: int, lam: Number) -> GegenbauerParams:
    """Indices (d/2 - 1, lam) of the Gegenbauer functions of dimension d."""
    return GegenbauerParams(0.5 * d - 1, lam)


def sign(x: float) -> int:
    """sgn with sgn(0) = 0."""
    return (x > 0) - (x < 0)


def step(x: float) -> float:
    """Heaviside step with theta(0) = 1/2."""
    return 0.5 * (1 + sign(x))


def s_boundary(p: GegenbauerParams, w: float, side: Side) -> complex:
    """**S**(w), as the boundary value w +/- i0 when w lies on (-oo, -1]."""
    return gegenbauer_s(p, CutComplex(w, side if w <= -1 else Side.OFF))


def z_boundary(p: GegenbauerParams, w: float, side: Side) -> complex:
    """**Z**(w), as the boundary value w +/- i0 when w lies on (-oo, 1]."""
    return gegenbauer_z(p, CutComplex(w, side if w <= 1 else Side.OFF))


def identity_residuals(kernel: KernelLookup) -> Dict[str, float]:
    """
    Relative residuals of the identities linking the propagators of one state.

    F - Fbar = i(Pos + Neg), PJ = Ret - Adv = i(Pos - Neg), F = i Pos + Adv = i Neg + Ret
    and Fbar = -i Pos + Ret = -i Neg + Adv.
    """
    k = {kind: kernel(kind) for kind in (
        PropagatorKind.F,
        PropagatorKind.FBAR,
        PropagatorKind.POS,
        PropagatorKind.NEG,
        PropagatorKind.RET,
        PropagatorKind.ADV,
        PropagatorKind.PJ,
    )}
    scale = max(max(abs(v) for v in k.values()), 1e-300)
    F, Fbar, pos, neg = k[PropagatorKind.F], k[PropagatorKind.FBAR], k[PropagatorKind.POS], k[PropagatorKind.NEG]
    ret, adv, pj = k[PropagatorKind.RET], k[PropagatorKind.ADV], k[PropagatorKind.PJ]
    return {
        "difference": abs(F - Fbar - 1j * (pos + neg)) / scale,
        "pauli_jordan": abs(pj - (ret - adv)) / scale,
        "pauli_jordan_frequency": abs(pj - 1j * (pos - neg)) / scale,
        "feynman_pos": abs(F - (1j * pos + adv)) / scale,
        "feynman_neg": abs(F - (1j * neg + ret)) / scale,
        "anti_feynman_pos": abs(Fbar - (-1j * pos + ret)) / scale,
        "anti_feynman_neg": abs(Fbar - (-1j * neg + adv)) / scale,
    }


@dataclass(frozen=True)
class KgResidual:
    """
    Klein-Gordon residual of a kernel at two step sizes.

    Attributes:
        coarse: Relative residual at step h.
        fine: Relative residual at step h/2.
        h: The coarse step.
    """

    coarse: float
    fine: float
    h: float

    @property
    def order(self) -> float:
        """Observed convergence order log2(coarse / fine)."""
        if self.fine == 0 or self.coarse == 0:
            return math.inf
        return math.log2(self.coarse / self.fine)

    def to_dict(self) -> Dict[str, float]:
        return {"coarse": self.coarse, "fine": self.fine, "h": self.h, "order": self.order}


def second_order_terms(
    func: Callable[[float, float], complex], x: float, y: float, h: float
) -> Dict[str, complex]:
    """f and its first and second partial derivatives at (x, y) from second-order central differences."""
    f0 = func(x, y)
    fxp, fxm = func(x + h, y), func(x - h, y)
    fyp, fym = func(x, y + h), func(x, y - h)
    return {
        "f": f0,
        "fx": (fxp - fxm) / (2 * h),
        "fxx": (fxp - 2 * f0 + fxm) / (h * h),
        "fy": (fyp - fym) / (2 * h),
        "fyy": (fyp - 2 * f0 + fym) / (h * h),
    }


def relative_sum(terms: Sequence[complex]) -> float:
    """|sum(terms)| relative to the largest term; 0 when every term vanishes."""
    scale = max(abs(t) for t in terms)
    if scale == 0:
        return 0.0
    return abs(sum(terms)) / scale


def sample(func: Callable[[T], R], items: Sequence[T], config: Optional[KgpropConfig] = None) -> List[R]:
    """Map func over items on up to config.threads workers, keeping the input order."""
    cfg = resolve_config(config)
    workers = min(cfg.threads or 1, len(items))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]
