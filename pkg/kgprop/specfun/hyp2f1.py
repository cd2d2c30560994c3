"""
Olver-normalized Gauss hypergeometric function **F**(a, b; c; z) = F(a, b; c; z) / Gamma(c).

The function is entire in (a, b, c) and holomorphic on the plane cut along
[1, oo). Real arguments on the cut are accepted together with a side tag and
return the boundary value from that side.

Evaluation chain:
    * Taylor series for |z| <= 0.75, Pfaff transformation when |z/(z-1)| <= 0.75;
    * otherwise the best of the 1-z, 1/z and 1/(1-z) connection formulas;
    * integration of the hypergeometric equation along a ray for the few
      points near exp(+-i pi/3) that no transformation brings inside 0.9.

Connection formulas that degenerate (b-a or c-a-b near an integer) are
evaluated at a -+ h and a -+ 2h and Richardson-extrapolated.
"""

import cmath
import logging
import math
from typing import Callable, Tuple, Union

import numpy as np
from scipy import integrate, special

from kgprop.errors import DomainError, NonConvergent
from kgprop.models.common import CutComplex, Number, Side

logger = logging.getLogger("kgprop.specfun")

SERIES_RADIUS = 0.75
TRANSFORM_RADIUS = 0.9
MAX_TERMS = 5000
INTEGER_GAP = 1e-4
RICHARDSON_STEP = 1e-5
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14

_EPS = float(np.finfo(float).eps)


def rgamma(z: Number) -> complex:
    """Reciprocal Gamma function for complex arguments (zero at the poles)."""
    return complex(special.rgamma(complex(z)))


def gamma(z: Number) -> complex:
    """Gamma function for complex arguments."""
    return complex(special.gamma(complex(z)))


def poch(a: Number, n: int) -> complex:
    """Rising factorial (a)_n for integer n >= 0."""
    out = 1.0 + 0.0j
    for k in range(n):
        out *= complex(a) + k
    return out


def side_pow(base: Number, mu: Number, side: Side = Side.OFF) -> complex:
    """
    Principal power base**mu with side-aware arguments on the negative axis.

    A negative real base takes arg = +pi for ABOVE (and OFF) and -pi for BELOW.
    """
    base = complex(base)
    mu = complex(mu)
    if base == 0:
        if mu == 0:
            return 1.0 + 0.0j
        if mu.real > 0:
            return 0.0j
        raise DomainError("Power of zero with non-positive exponent", field="base")
    if base.imag == 0 and base.real < 0:
        phase = -math.pi if side is Side.BELOW else math.pi
        log = complex(math.log(-base.real), phase)
    else:
        log = cmath.log(base)
    return cmath.exp(mu * log)


def near_integer(x: Number, gap: float = INTEGER_GAP) -> bool:
    """True when x is within gap of an integer (complex x must be nearly real)."""
    x = complex(x)
    return abs(x.imag) < gap and abs(x.real - round(x.real)) < gap


def _series(a: complex, b: complex, c: complex, z: complex) -> complex:
    """Direct summation of sum_n (a)_n (b)_n / n! * z**n / Gamma(c + n)."""
    term = rgamma(c)
    total = term
    # (a)_n (b)_n z^n / n! without the Gamma factor; only needed while c + n can still hit a pole
    p = 1.0 + 0.0j
    small = 0
    min_terms = abs(a) + abs(b) + max(0.0, -c.real) + 1
    for n in range(MAX_TERMS):
        ratio = (a + n) * (b + n) * z / (n + 1)
        if ratio == 0:
            return total
        cn = c + n
        if abs(cn) < 0.5:
            # next to a pole of Gamma(c + n) the term restarts from the rising product
            p *= ratio
            term = p * rgamma(cn + 1)
        else:
            term *= ratio / cn
            if cn.real < 1.5:
                p *= ratio
        total += term
        scale = max(abs(total), abs(term))
        if abs(term) <= _EPS * scale:
            small += 1
            if small >= 2 and n > min_terms:
                return total
        else:
            small = 0
    achieved = abs(term) / max(abs(total), 1e-300)
    raise NonConvergent(f"Hypergeometric series did not converge at z={z}", achieved_error=achieved)


def _gauss_at_one(a: complex, b: complex, c: complex) -> complex:
    s = c - a - b
    if s.real <= 0:
        raise DomainError(f"**F** diverges at z=1 for Re(c-a-b)={s.real:.3g} <= 0", field="z")
    return gamma(s) * rgamma(c - a) * rgamma(c - b)


def _pfaff(a: complex, b: complex, c: complex, z: complex, side: Side) -> complex:
    return side_pow(1 - z, -a, side.flipped()) * _series(a, c - b, c, z / (z - 1))


def _one_minus_z(a: complex, b: complex, c: complex, z: complex, side: Side) -> complex:
    s = c - a - b
    w = 1 - z
    first = _series(a, b, 1 - s, w) * rgamma(c - a) * rgamma(c - b)
    second = side_pow(w, s, side.flipped()) * _series(c - a, c - b, 1 + s, w) * rgamma(a) * rgamma(b)
    return (first - second) * math.pi / cmath.sin(math.pi * s)


def _inverse_z(a: complex, b: complex, c: complex, z: complex, side: Side) -> complex:
    mz_side = side.flipped()
    u = 1 / z
    first = side_pow(-z, -a, mz_side) * rgamma(b) * rgamma(c - a) * _series(a, a - c + 1, a - b + 1, u)
    second = side_pow(-z, -b, mz_side) * rgamma(a) * rgamma(c - b) * _series(b, b - c + 1, b - a + 1, u)
    return (first - second) * math.pi / cmath.sin(math.pi * (b - a))


def _inverse_one_minus_z(a: complex, b: complex, c: complex, z: complex, side: Side) -> complex:
    w = 1 - z
    w_side = side.flipped()
    u = 1 / w
    first = side_pow(w, -a, w_side) * rgamma(b) * rgamma(c - a) * _series(a, c - b, a - b + 1, u)
    second = side_pow(w, -b, w_side) * rgamma(a) * rgamma(c - b) * _series(b, c - a, b - a + 1, u)
    return (first - second) * math.pi / cmath.sin(math.pi * (b - a))


def _along_ray(a: complex, b: complex, c: complex, z: complex) -> complex:
    """Integrate the hypergeometric equation from 0.5 z/|z| out to z."""
    z0 = 0.5 * z / abs(z)
    dz = z - z0
    y0 = np.array([_series(a, b, c, z0), a * b * _series(a + 1, b + 1, c + 1, z0)], dtype=complex)

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        x = z0 + s * dz
        f, fp = y
        fpp = (a * b * f - (c - (a + b + 1) * x) * fp) / (x * (1 - x))
        return np.array([fp * dz, fpp * dz], dtype=complex)

    sol = integrate.solve_ivp(rhs, (0.0, 1.0), y0, method="DOP853", rtol=ODE_RTOL, atol=ODE_ATOL)
    if not sol.success:
        raise NonConvergent(f"Hypergeometric equation integration failed: {sol.message}")
    return complex(sol.y[0, -1])


Method = Callable[[complex, complex, complex, complex, Side], complex]


def _choose(z: complex) -> Tuple[str, Method, Callable[[complex, complex, complex], complex]]:
    """Pick the evaluation route for z and the parameter combination whose integrality degenerates it."""
    if abs(z) <= SERIES_RADIUS:
        return "series", lambda a, b, c, x, s: _series(a, b, c, x), lambda a, b, c: 0.5
    if abs(z / (z - 1)) <= SERIES_RADIUS:
        return "pfaff", _pfaff, lambda a, b, c: 0.5
    candidates = [
        (abs(1 - z), "1-z", _one_minus_z, lambda a, b, c: c - a - b),
        (abs(1 / z), "1/z", _inverse_z, lambda a, b, c: b - a),
        (abs(1 / (1 - z)), "1/(1-z)", _inverse_one_minus_z, lambda a, b, c: b - a),
    ]
    modulus, name, method, degenerate = min(candidates, key=lambda item: item[0])
    if modulus > TRANSFORM_RADIUS:
        return "ray", lambda a, b, c, x, s: _along_ray(a, b, c, x), lambda a, b, c: 0.5
    return name, method, degenerate


def _richardson_in_a(fn: Callable[[complex], complex], a: complex, offset: Callable[[complex], complex]) -> complex:
    """Symmetric Richardson extrapolation of fn around a, avoiding integer offsets."""
    h = RICHARDSON_STEP * max(1.0, abs(a))
    for _ in range(20):
        offsets = (offset(a + h), offset(a - h), offset(a + 2 * h), offset(a - 2 * h))
        if all(not near_integer(p, 0.5 * h) for p in offsets):
            break
        h *= 1.7
    near = 0.5 * (fn(a + h) + fn(a - h))
    far = 0.5 * (fn(a + 2 * h) + fn(a - 2 * h))
    return (4 * near - far) / 3


def extrapolates(a: Number, b: Number, c: Number, z: Union[CutComplex, Number]) -> bool:
    """True when hyp2f1_olver(a, b, c, z) goes through the Richardson limit in a."""
    x = CutComplex.of(z).value
    if x == 0 or x == 1:
        return False
    _, _, degenerate = _choose(x)
    return near_integer(degenerate(complex(a), complex(b), complex(c)))


def hyp2f1_olver(a: Number, b: Number, c: Number, z: Union[CutComplex, Number]) -> complex:
    """
    Evaluate the Olver-normalized hypergeometric function **F**(a, b; c; z).

    Args:
        a: First numerator parameter.
        b: Second numerator parameter.
        c: Denominator parameter (any complex value; poles are absorbed).
        z: Argument. Real values in (1, oo) need side ABOVE or BELOW.

    Returns:
        F(a, b; c; z) / Gamma(c).

    Raises:
        DomainError: If z lies on the cut without a side, or z = 1 where the value diverges.
        NonConvergent: If no route reaches the requested accuracy.
    """
    arg = CutComplex.of(z)
    a, b, c = complex(a), complex(b), complex(c)
    # order the numerator parameters so that symmetric calls run the same code
    if (b.real, b.imag) < (a.real, a.imag):
        a, b = b, a
    x = arg.value

    if x == 0:
        return rgamma(c)
    if x == 1:
        return _gauss_at_one(a, b, c)
    if arg.is_real and x.real > 1 and arg.side is Side.OFF:
        raise DomainError(f"z={x.real} lies on the cut [1, oo); give a side", field="z")

    name, method, degenerate = _choose(x)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("hyp2f1 a=%s b=%s c=%s z=%s side=%s via %s", a, b, c, x, arg.side.name, name)

    if near_integer(degenerate(a, b, c)):
        logger.debug("hyp2f1 %s transformation degenerate at a=%s b=%s c=%s; extrapolating", name, a, b, c)
        return _richardson_in_a(
            lambda aa: method(aa, b, c, x, arg.side),
            a,
            lambda aa: degenerate(aa, b, c),
        )
    return method(a, b, c, x, arg.side)
