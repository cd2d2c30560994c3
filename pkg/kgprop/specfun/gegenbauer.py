"""
Gegenbauer functions **S** and **Z** in Olver's normalization.

Both solve ((1 - w^2) d^2 - 2(1 + alpha) w d + lambda^2 - (alpha + 1/2)^2) f = 0.
**S** is holomorphic off (-oo, -1] and equals 1/Gamma(alpha + 1) at w = 1;
**Z** is holomorphic off (-oo, 1] and decays as w^(-1/2-alpha-lambda) / Gamma(lambda + 1)
at +oo.
"""

import cmath
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Tuple, Union

from kgprop.errors import DegenerateParams, DomainError
from kgprop.models.common import CutComplex, GegenbauerParams, Number, Side
from kgprop.specfun.hyp2f1 import (
    INTEGER_GAP,
    RICHARDSON_STEP,
    extrapolates,
    gamma,
    hyp2f1_olver,
    near_integer,
    rgamma,
    side_pow,
)

logger = logging.getLogger("kgprop.specfun")

# below this modulus **Z** is evaluated from its expansion around w = -1
SMALL_ARGUMENT = 0.05

SQRT_PI = math.sqrt(math.pi)

Arg = Union[CutComplex, Number]


def _richardson(fn: Callable[[complex], complex], x: complex, h: float) -> complex:
    near = 0.5 * (fn(x + h) + fn(x - h))
    far = 0.5 * (fn(x + 2 * h) + fn(x - 2 * h))
    return (4 * near - far) / 3


def _step_for(x: complex) -> float:
    return RICHARDSON_STEP * max(1.0, abs(x))


def gegenbauer_s(p: GegenbauerParams, w: Arg) -> complex:
    """
    Evaluate **S**_{alpha,lambda}(w) = **F**(1/2+alpha+lambda, 1/2+alpha-lambda; alpha+1; (1-w)/2).

    Raises:
        DomainError: If w lies on (-oo, -1] without a side.
    """
    arg = CutComplex.of(w)
    x = arg.value
    if arg.is_real and x.real <= -1 and arg.side is Side.OFF:
        raise DomainError(f"w={x.real} lies on the cut of S; give a side", field="w")
    z = CutComplex.derived((1 - x) / 2, arg.side.flipped())
    return hyp2f1_olver(0.5 + p.alpha + p.lam, 0.5 + p.alpha - p.lam, p.alpha + 1, z)


def _z_main_indices(p: GegenbauerParams) -> Tuple[complex, complex, complex]:
    return 0.25 + p.alpha / 2 + p.lam / 2, 0.75 + p.alpha / 2 + p.lam / 2, 1 + p.lam


def _z_main(p: GegenbauerParams, arg: CutComplex) -> complex:
    x = arg.value
    u_side = arg.side
    if arg.is_real and -1 < x.real < 1:
        # w = x + i0 sends 1/w^2 to the side opposite to sign(x)
        u_side = arg.side if x.real < 0 else arg.side.flipped()
    u = CutComplex.derived(1 / (x * x), u_side)
    prefactor = side_pow(x, -0.5 - p.alpha - p.lam, arg.side)
    return prefactor * hyp2f1_olver(*_z_main_indices(p), u)


def _z_near_origin(p: GegenbauerParams, arg: CutComplex, lam: complex) -> complex:
    x = arg.value
    alpha = p.alpha
    u = CutComplex.derived(2 / (1 + x), arg.side.flipped())
    prefactor = side_pow(1 + x, -0.5 - alpha - lam, arg.side) * gamma(1 + 2 * lam) * rgamma(1 + lam)
    return prefactor * hyp2f1_olver(0.5 + lam, 0.5 + lam + alpha, 1 + 2 * lam, u)


def gegenbauer_z(p: GegenbauerParams, w: Arg) -> complex:
    """
    Evaluate **Z**_{alpha,lambda}(w).

    Uses w^(-1/2-alpha-lambda) **F**(1/4+alpha/2+lambda/2, 3/4+alpha/2+lambda/2; 1+lambda; 1/w^2)
    away from the origin and the expansion in 2/(1+w) for |w| < 0.05.

    Raises:
        DomainError: If w lies on (-oo, 1] without a side.

    Warns:
        DegenerateParams: If the value comes from a limit in the indices: 1 + 2 lambda close to
            a non-positive integer near the origin, or a degenerate hypergeometric transformation
            (integer alpha next to w = +-1) in the main form.
    """
    arg = CutComplex.of(w)
    x = arg.value
    if arg.is_real and x.real <= 1 and arg.side is Side.OFF:
        raise DomainError(f"w={x.real} lies on the cut of Z; give a side", field="w")

    if abs(x) >= SMALL_ARGUMENT:
        if extrapolates(*_z_main_indices(p), 1 / (x * x)):
            warnings.warn(
                DegenerateParams(f"Z at w={x} with alpha={p.alpha} hits a degenerate transformation; extrapolating"),
                stacklevel=2,
            )
        return _z_main(p, arg)

    lam = p.lam
    c = 1 + 2 * lam
    if near_integer(c, INTEGER_GAP) and round(c.real) <= 0:
        warnings.warn(
            DegenerateParams(f"Z near the origin with 1+2*lambda={c} close to a pole of Gamma; extrapolating"),
            stacklevel=2,
        )
        return _richardson(lambda ll: _z_near_origin(p, arg, ll), lam, _step_for(lam))
    return _z_near_origin(p, arg, lam)


def dot_power(w: CutComplex, alpha: complex) -> complex:
    """(w^2 - 1)^alpha_dot = (w - 1)^alpha (w + 1)^alpha, holomorphic off (-oo, 1]."""
    x = w.value
    return side_pow(x - 1, alpha, w.side) * side_pow(x + 1, alpha, w.side)


def one_minus_square_power(w: CutComplex, alpha: complex) -> complex:
    """(1 - w^2)^alpha = (1 - w)^alpha (1 + w)^alpha, holomorphic off the two outer half-lines."""
    x = w.value
    return side_pow(1 - x, alpha, w.side.flipped()) * side_pow(1 + x, alpha, w.side)


def gegenbauer_z_continued(p: GegenbauerParams, w: Arg) -> complex:
    """
    Continue **Z**_{alpha,lambda} from the upper half-plane through (-1, 1).

    Returns **Z** itself for Im w > 0 (and for real w with side ABOVE); for
    Im w < 0 the continued branch is expressed through the principal values
    of **Z**_{alpha,+-lambda} at w.
    """
    arg = CutComplex.of(w)
    x = arg.value
    if x.imag > 0 or (arg.is_real and x.real > 1):
        return gegenbauer_z(p, arg)
    if arg.is_real and (arg.side is Side.ABOVE or (arg.side is Side.OFF and -1 < x.real < 1)):
        return gegenbauer_z(p, CutComplex.above(x.real))
    alpha, lam = p.alpha, p.lam

    def continued(ll: complex) -> complex:
        q = GegenbauerParams(alpha, ll)
        s = cmath.sin(math.pi * ll)
        first = 1j * cmath.cos(math.pi * alpha) * cmath.exp(-1j * math.pi * (alpha + ll)) * gegenbauer_z(q, arg) / s
        second = (
            1j
            * 2 ** (2 * ll)
            * cmath.exp(-1j * math.pi * alpha)
            * math.pi
            * rgamma(0.5 + alpha + ll)
            * rgamma(0.5 - alpha + ll)
            * gegenbauer_z(q.with_lam(-ll), arg)
            / s
        )
        return first - second

    if near_integer(lam):
        return _richardson(continued, lam, _step_for(lam))
    return continued(lam)


def is_reflectionless_index(alpha: Number, tol: float = 1e-12) -> bool:
    """True iff alpha lies in Z + 1/2."""
    a = complex(alpha)
    shifted = a.real - 0.5
    return abs(a.imag) <= tol and abs(shifted - round(shifted)) <= tol


@dataclass(frozen=True)
class ConnectionResiduals:
    """
    Residuals of the three connection formulas, each relative to max(1, largest term).

    Attributes:
        reflection: S(-w) expressed through S(w) and S_{-alpha,-lambda}(w).
        z_from_s: Z(w) expressed through S_{alpha,lambda} and S_{-alpha,-lambda}.
        s_from_z: S(w) expressed through Z_{alpha,+-lambda}.
        closure: S(w) rebuilt from the Z's of z_from_s fed into s_from_z.
    """

    reflection: float
    z_from_s: float
    s_from_z: float
    closure: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.reflection, self.z_from_s, self.s_from_z)

    def max(self) -> float:
        return max(self.reflection, self.z_from_s, self.s_from_z)


def _relative(lhs: complex, rhs: complex, *terms: complex) -> float:
    scale = max([1.0, abs(lhs)] + [abs(t) for t in terms])
    return abs(lhs - rhs) / scale


def _z_via_s(alpha: complex, lam: complex, arg: CutComplex) -> Tuple[complex, complex]:
    """Right-hand side of the Z-from-S formula, returned as its two terms."""
    sa = cmath.sin(math.pi * alpha)
    first = -(2 ** (lam - alpha - 0.5)) * SQRT_PI * gegenbauer_s(GegenbauerParams(alpha, lam), arg)
    first *= rgamma(0.5 - alpha + lam) / sa
    second = 2 ** (lam + alpha - 0.5) * SQRT_PI * rgamma(0.5 + alpha + lam) / sa
    second *= gegenbauer_s(GegenbauerParams(-alpha, -lam), arg) / dot_power(arg, alpha)
    return first, second


def _s_via_z(alpha: complex, lam: complex, z_plus: complex, z_minus: complex) -> Tuple[complex, complex]:
    """Right-hand side of the S-from-Z formula given Z_{alpha,lambda} and Z_{alpha,-lambda}."""
    pre = 2 ** (-lam + alpha - 0.5) * SQRT_PI / cmath.sin(math.pi * lam)
    first = -pre * z_plus * rgamma(0.5 + alpha - lam)
    second = pre * 2 ** (2 * lam) * z_minus * rgamma(0.5 + alpha + lam)
    return first, second


def _reflection_rhs(alpha: complex, lam: complex, arg: CutComplex) -> Tuple[complex, complex]:
    sa = cmath.sin(math.pi * alpha)
    first = -cmath.cos(math.pi * lam) / sa * gegenbauer_s(GegenbauerParams(alpha, lam), arg)
    second = 2 ** (2 * alpha) * math.pi * gegenbauer_s(GegenbauerParams(-alpha, -lam), arg)
    second *= rgamma(0.5 + alpha + lam) * rgamma(0.5 + alpha - lam) / (sa * one_minus_square_power(arg, alpha))
    return first, second


def check_connection_formulas(p: GegenbauerParams, w: Arg) -> ConnectionResiduals:
    """
    Evaluate both sides of the three connection formulas between S and Z.

    Near-integer alpha (resp. lambda) is handled by Richardson extrapolation of
    the right-hand sides in that index. For real w > 1 the reflection S(-w) is
    taken on both sides of its cut and the worse residual is reported.
    """
    arg = CutComplex.of(w)
    alpha, lam = p.alpha, p.lam

    def in_alpha(fn: Callable[[complex], complex]) -> complex:
        if near_integer(alpha):
            return _richardson(fn, alpha, _step_for(alpha))
        return fn(alpha)

    def in_lam(fn: Callable[[complex], complex]) -> complex:
        if near_integer(lam):
            return _richardson(fn, lam, _step_for(lam))
        return fn(lam)

    s_w = gegenbauer_s(p, arg)
    z_plus = gegenbauer_z(p, arg)
    z_minus = gegenbauer_z(p.with_lam(-lam), arg)

    def reflection_at(bank: CutComplex) -> float:
        terms = _reflection_rhs(alpha, lam, bank)
        rhs = in_alpha(lambda aa: sum(_reflection_rhs(aa, lam, bank)))
        return _relative(gegenbauer_s(p, bank.negated()), rhs, *terms)

    if arg.is_real and arg.side is Side.OFF and arg.real > 1:
        # -w sits on the cut of S: the reflection is checked on both banks w +- i0
        reflection = max(reflection_at(CutComplex.above(arg.real)), reflection_at(CutComplex.below(arg.real)))
    else:
        reflection = reflection_at(arg)

    zs_terms = _z_via_s(alpha, lam, arg)
    zs_rhs = in_alpha(lambda aa: sum(_z_via_s(aa, lam, arg)))
    z_from_s = _relative(z_plus, zs_rhs, *zs_terms)

    sz_terms = _s_via_z(alpha, lam, z_plus, z_minus)
    sz_rhs = in_lam(
        lambda ll: sum(
            _s_via_z(alpha, ll, gegenbauer_z(p.with_lam(ll), arg), gegenbauer_z(p.with_lam(-ll), arg))
        )
    )
    s_from_z = _relative(s_w, sz_rhs, *sz_terms)

    z_plus_rebuilt = in_alpha(lambda aa: sum(_z_via_s(aa, lam, arg)))
    z_minus_rebuilt = in_alpha(lambda aa: sum(_z_via_s(aa, -lam, arg)))
    closed = sz_rhs if near_integer(lam) else sum(_s_via_z(alpha, lam, z_plus_rebuilt, z_minus_rebuilt))
    closure = _relative(s_w, closed, z_plus_rebuilt, z_minus_rebuilt)

    logger.debug("connection residuals at %s, w=%s: %.2e %.2e %.2e", p, arg, reflection, z_from_s, s_from_z)
    return ConnectionResiduals(reflection=reflection, z_from_s=z_from_s, s_from_z=s_from_z, closure=closure)


def gegenbauer_ode_residual(p: GegenbauerParams, w: Arg, which: str = "S", h: float = 2e-3) -> float:
    """
    Residual of the Gegenbauer equation for S or Z from a fourth-order stencil along the real direction.

    The result is relative to the largest of the three terms of the equation and |f(w)|.
    """
    arg = CutComplex.of(w)
    fn = gegenbauer_s if which.upper() == "S" else gegenbauer_z
    x = arg.value
    values = [fn(p, arg.shifted(k * h)) for k in (-2, -1, 0, 1, 2)]
    fm2, fm1, f0, fp1, fp2 = values
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    terms = (
        (1 - x * x) * d2,
        -2 * (1 + p.alpha) * x * d1,
        (p.lam**2 - (p.alpha + 0.5) ** 2) * f0,
    )
    scale = max(max(abs(t) for t in terms), abs(f0))
    if scale == 0:
        return 0.0
    return abs(sum(terms)) / scale
