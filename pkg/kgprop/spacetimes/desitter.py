"""
Invariant propagators on global de Sitter space dS_d of unit radius.

All kernels depend on the pair only through Z = [x|x'] and the signs of the
time differences t = x^0 - x'^0 and tA = -(x^0 + x'^0). The Euclidean state
comes from the sphere Green function C_{d,nu} **S**_{d/2-1, i nu}(-Z); the
operator-theoretic Feynman kernels are boundary values of the resolvent of
-Box + ((d-1)/2)^2 and are built from **Z**_{d/2-1, +-i nu}(-Z +- i0).
"""

import cmath
import logging
import math
from typing import Dict, Optional, Tuple

from kgprop.config import KgpropConfig, resolve_config
from kgprop.errors import (
    DomainError,
    ExcludedParameter,
    KgpropValidationError,
    OnLightCone,
    OnSpectrum,
    OverlapZero,
)
from kgprop.krein import alpha_vacuum_coefficients
from kgprop.models.common import Number, PropagatorKind, Side
from kgprop.models.desitter import DsPairGeometry, DsPoint, VacuumParameter, classify_ds_region
from kgprop.models.krein import VacuumCoefficients
from kgprop.spacetimes.base import (
    KgResidual,
    check_dimension,
    gegenbauer_params,
    half_shift,
    identity_residuals,
    relative_sum,
    s_boundary,
    second_order_terms,
    sign,
    step,
    z_boundary,
)
from kgprop.specfun import gamma, is_reflectionless_index

logger = logging.getLogger("kgprop.desitter")

OVERLAP_TOL = 1e-10
PARAMETER_TOL = 1e-12

TWO_STATE_KINDS = (PropagatorKind.POS, PropagatorKind.NEG, PropagatorKind.F, PropagatorKind.FBAR)


def _geometry(Z: float, t: float, tA: float, cfg: KgpropConfig) -> DsPairGeometry:
    null = abs(abs(Z) - 1) < cfg.light_cone_tol
    if null:
        logger.debug("null separated pair, Z=%.17g", Z)
    return DsPairGeometry(Z, t, tA, classify_ds_region(Z, t, tA), null)


def ds_geometry(x: DsPoint, y: DsPoint, config: Optional[KgpropConfig] = None) -> DsPairGeometry:
    """
    Invariant geometry of the pair (x, y).

    Raises:
        KgpropValidationError: If the points live in different dimensions.
    """
    if x.d != y.d:
        raise KgpropValidationError(f"points of dS_{x.d} and dS_{y.d} cannot be paired", field="omega")
    cfg = resolve_config(config)
    ex, ey = x.embedding, y.embedding
    Z = -ex[0] * ey[0] + sum(a * b for a, b in zip(ex[1:], ey[1:]))
    return _geometry(Z, ex[0] - ey[0], -(ex[0] + ey[0]), cfg)


def ds_pair(tau: float, tau_prime: float, theta: float, config: Optional[KgpropConfig] = None) -> DsPairGeometry:
    """Geometry of two points at times tau, tau' and angular separation theta."""
    cfg = resolve_config(config)
    Z = -math.sinh(tau) * math.sinh(tau_prime) + math.cosh(tau) * math.cosh(tau_prime) * math.cos(theta)
    x0, y0 = math.sinh(tau), math.sinh(tau_prime)
    return _geometry(Z, x0 - y0, -(x0 + y0), cfg)


def antipodal(x: DsPoint) -> DsPoint:
    """The antipode x^A = -x."""
    return x.antipodal()


def ds_coefficient(d: int, nu: Number) -> complex:
    """C_{d,nu} = Gamma((d-1)/2 + i nu) Gamma((d-1)/2 - i nu) / (4 pi)^(d/2)."""
    d = check_dimension(d)
    a = half_shift(d)
    nu = complex(nu)
    return gamma(a + 1j * nu) * gamma(a - 1j * nu) / (4 * math.pi) ** (0.5 * d)


def _check_euclidean_nu(d: int, nu: Number) -> complex:
    nu = complex(nu)
    if abs(nu.real) <= PARAMETER_TOL:
        if nu.imag < 0:
            raise DomainError(f"imaginary nu must have Im(nu) >= 0, got {nu}", field="nu")
        shifted = nu.imag - half_shift(d)
        if shifted > -PARAMETER_TOL and abs(shifted - round(shifted)) < PARAMETER_TOL:
            raise ExcludedParameter(
                f"nu={nu} lies in i((d-1)/2 + N0), where C_{{d,nu}} has a pole", field="nu"
            )
        return complex(0.0, nu.imag)
    if nu.real < 0:
        raise DomainError(f"nu must have Re(nu) > 0 or lie on the positive imaginary axis, got {nu}", field="nu")
    return nu


def _require_off_light_cone(geom: DsPairGeometry) -> None:
    if geom.null_separated:
        raise OnLightCone(f"kernels are distributions on the light cone, Z={geom.Z:.17g}")


def sphere_kernel(d: int, nu: Number, Z: float) -> complex:
    """
    Green function of -Delta + ((d-1)/2)^2 + nu^2 on the unit sphere S^d, C_{d,nu} **S**_{d/2-1,i nu}(-Z).

    Raises:
        DomainError: If Z lies outside [-1, 1).
    """
    d = check_dimension(d)
    nu = _check_euclidean_nu(d, nu)
    if not -1 <= Z < 1:
        raise DomainError(f"Z must lie in [-1, 1) on the sphere, got {Z}", field="Z")
    return ds_coefficient(d, nu) * s_boundary(gegenbauer_params(d, 1j * nu), -Z, Side.OFF)


def euclidean_kernel(
    d: int,
    nu: Number,
    kind: PropagatorKind,
    geom: DsPairGeometry,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    A propagator of the Euclidean state, obtained by Wick rotation from the sphere.

    With C = C_{d,nu} and S+- = **S**_{d/2-1,i nu}(-Z +- i0):
    F = i C S+, Fbar = -i C S-, Ret/Adv = i theta(+-t) C (S+ - S-),
    PJ = i sgn(t) C (S+ - S-), Pos/Neg = C **S**(-Z +- i0 sgn t) and Sym = C (S+ + S-).
    SymA and PJA are the same combinations evaluated at the antipode, with tA in place of t.
    OpF and OpFbar are forwarded to op_feynman_ds.

    Args:
        d: Spacetime dimension.
        nu: Spectral parameter; Re(nu) > 0 or nu on the positive imaginary axis.
        kind: Propagator kind.
        geom: Pair geometry.
        config: Optional configuration.

    Returns:
        The kernel value.

    Raises:
        ExcludedParameter: If nu lies in i((d-1)/2 + N0).
        OnLightCone: If the pair is null separated.
    """
    d = check_dimension(d)
    kind = PropagatorKind.parse(kind)
    if kind in (PropagatorKind.OP_F, PropagatorKind.OP_FBAR):
        return op_feynman_ds(d, nu, kind, geom, config)
    nu = _check_euclidean_nu(d, nu)
    _require_off_light_cone(geom)

    p = gegenbauer_params(d, 1j * nu)
    c = ds_coefficient(d, nu)
    Z = geom.Z

    def direct(side: Side) -> complex:
        return s_boundary(p, -Z, side)

    def jump() -> complex:
        return direct(Side.ABOVE) - direct(Side.BELOW)

    if kind is PropagatorKind.F:
        return 1j * c * direct(Side.ABOVE)
    if kind is PropagatorKind.FBAR:
        return -1j * c * direct(Side.BELOW)
    if kind is PropagatorKind.RET:
        return 1j * step(geom.t) * c * jump()
    if kind is PropagatorKind.ADV:
        return 1j * step(-geom.t) * c * jump()
    if kind is PropagatorKind.PJ:
        return 1j * sign(geom.t) * c * jump()
    if kind is PropagatorKind.POS:
        return c * direct(Side(sign(geom.t)))
    if kind is PropagatorKind.NEG:
        return c * direct(Side(-sign(geom.t)))
    if kind is PropagatorKind.SYM:
        return c * (direct(Side.ABOVE) + direct(Side.BELOW))

    plus, minus = s_boundary(p, Z, Side.ABOVE), s_boundary(p, Z, Side.BELOW)
    if kind is PropagatorKind.SYM_A:
        return c * (plus + minus)
    return 1j * sign(geom.tA) * c * (plus - minus)


def _resolvent_formula(d: int, nu: complex, branch: int, Z: float) -> complex:
    """The resolvent expression with lambda = branch * i nu."""
    a = half_shift(d)
    lam = branch * 1j * nu
    p = gegenbauer_params(d, lam)
    below = z_boundary(p, -Z, Side.BELOW)
    above = z_boundary(p, -Z, Side.ABOVE)
    scale = gamma(a + lam) / (2 ** (2 + lam) * (2 * math.pi) ** a)
    if d % 2:
        return branch * scale / cmath.sinh(math.pi * nu) * (below - above)
    return -scale / cmath.cosh(math.pi * nu) * (above + below)


def ds_resolvent(d: int, nu: Number, geom: DsPairGeometry, config: Optional[KgpropConfig] = None) -> complex:
    """
    Integral kernel of (-Box + ((d-1)/2)^2 + nu^2)^(-1) for nu off the spectrum.

    The branch lambda = i nu is used for Im(nu) < 0 and lambda = -i nu for
    Im(nu) > 0. On the positive imaginary axis nu = i mu this gives the
    resolvent at the tachyonic point mu^2.

    Args:
        d: Spacetime dimension.
        nu: Spectral parameter with Re(nu) >= 0.
        geom: Pair geometry.
        config: Optional configuration.

    Raises:
        OnSpectrum: If -nu^2 lies in the spectrum: nu > 0 real, nu = 0, or
            nu = i mu with mu in N0 (odd d) resp. N0 + 1/2 (even d).
        DomainError: If Re(nu) < 0.
        OnLightCone: If the pair is null separated.
    """
    d = check_dimension(d)
    nu = complex(nu)
    if nu.real < -PARAMETER_TOL:
        raise DomainError(f"nu must have Re(nu) >= 0, got {nu}", field="nu")
    if abs(nu.imag) <= PARAMETER_TOL:
        raise OnSpectrum(f"-nu^2 = {-(nu.real ** 2):g} lies in the continuous spectrum", field="nu")
    if abs(nu.real) <= PARAMETER_TOL:
        mu = nu.imag
        offset = 0.0 if d % 2 else 0.5
        if mu > 0 and abs((mu - offset) - round(mu - offset)) < PARAMETER_TOL and round(mu - offset) >= 0:
            raise OnSpectrum(f"mu^2 = {mu ** 2:g} is a discrete eigenvalue in d={d}", field="nu")
        nu = complex(0.0, mu)
    _require_off_light_cone(geom)
    branch = 1 if nu.imag < 0 else -1
    return _resolvent_formula(d, nu, branch, geom.Z)


def _check_positive_nu(nu: Number) -> float:
    value = complex(nu)
    if abs(value.imag) > PARAMETER_TOL or not value.real > 0:
        raise DomainError(f"nu must be positive, got {nu}", field="nu")
    return value.real


def op_feynman_ds(
    d: int,
    nu: Number,
    which: PropagatorKind,
    geom: DsPairGeometry,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    Operator-theoretic Feynman (F) or anti-Feynman (Fbar) kernel for nu > 0.

    These are the boundary values of ds_resolvent from Im(nu) < 0 and Im(nu) > 0.
    For odd d, F + Fbar vanishes for Z < 1; for even d it does not vanish for Z < -1.

    Raises:
        DomainError: If nu is not positive.
        OnLightCone: If the pair is null separated.
    """
    d = check_dimension(d)
    which = PropagatorKind.parse(which)
    if which in (PropagatorKind.F, PropagatorKind.OP_F):
        branch = 1
    elif which in (PropagatorKind.FBAR, PropagatorKind.OP_FBAR):
        branch = -1
    else:
        raise KgpropValidationError(f"op_feynman_ds computes F or Fbar, got {which.value}", field="kind")
    nu = _check_positive_nu(nu)
    _require_off_light_cone(geom)
    return _resolvent_formula(d, complex(nu), branch, geom.Z)


def _basis(d: int, nu: float, geom: DsPairGeometry, cfg: KgpropConfig) -> Dict[PropagatorKind, complex]:
    return {
        kind: euclidean_kernel(d, nu, kind, geom, cfg)
        for kind in (PropagatorKind.SYM, PropagatorKind.PJ, PropagatorKind.SYM_A, PropagatorKind.PJ_A)
    }


def alpha_twostate_kernel(
    d: int,
    nu: Number,
    alpha: VacuumParameter,
    beta: VacuumParameter,
    kind: PropagatorKind,
    geom: DsPairGeometry,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    Mixed kernels of the alpha- and beta-vacua in the basis Sym, PJ, SymA, PJA.

    With D = 1 - conj(beta) alpha and g = alpha conj(beta):

        Pos/Neg = [(1+g)/2 Sym -+ i(1-g)/2 PJ + (alpha+conj(beta))/2 SymA - i(alpha-conj(beta))/2 PJA] / D
        F    = F_0 + i [g Sym + (alpha+conj(beta))/2 SymA - i(alpha-conj(beta))/2 PJA] / D
        Fbar = Fbar_0 - i [same bracket] / D

    where F_0 and Fbar_0 are the Euclidean kernels. F and Fbar equal
    i Pos + Adv and -i Pos + Ret. Classical kinds do not depend on the state
    and are forwarded to euclidean_kernel.

    Raises:
        OverlapZero: If |1 - conj(beta) alpha| < 1e-10.
        DomainError: If nu is not positive.
    """
    cfg = resolve_config(config)
    d = check_dimension(d)
    kind = PropagatorKind.parse(kind)
    alpha, beta = VacuumParameter.of(alpha), VacuumParameter.of(beta)
    nu = _check_positive_nu(nu)
    if kind.is_classical:
        return euclidean_kernel(d, nu, kind, geom, cfg)
    if kind not in TWO_STATE_KINDS + (PropagatorKind.SYM,):
        raise KgpropValidationError(f"two-state kernels cover Pos, Neg, F, Fbar and Sym, got {kind.value}", field="kind")

    overlap = alpha.overlap(beta)
    if abs(overlap) < OVERLAP_TOL:
        raise OverlapZero(f"1 - conj(beta) alpha = {overlap:.3e} vanishes; the two vacua are not comparable")
    a, b = alpha.alpha, beta.alpha.conjugate()
    g = a * b
    basis = _basis(d, nu, geom, cfg)
    sym, pj, sym_a, pj_a = (
        basis[PropagatorKind.SYM],
        basis[PropagatorKind.PJ],
        basis[PropagatorKind.SYM_A],
        basis[PropagatorKind.PJ_A],
    )
    antipodal_part = 0.5 * (a + b) * sym_a - 0.5j * (a - b) * pj_a

    if kind in (PropagatorKind.POS, PropagatorKind.NEG, PropagatorKind.SYM):
        pos = (0.5 * (1 + g) * sym - 0.5j * (1 - g) * pj + antipodal_part) / overlap
        neg = (0.5 * (1 + g) * sym + 0.5j * (1 - g) * pj + antipodal_part) / overlap
        if kind is PropagatorKind.SYM:
            return pos + neg
        return pos if kind is PropagatorKind.POS else neg

    correction = 1j * (g * sym + antipodal_part) / overlap
    if kind is PropagatorKind.F:
        return euclidean_kernel(d, nu, PropagatorKind.F, geom, cfg) + correction
    return euclidean_kernel(d, nu, PropagatorKind.FBAR, geom, cfg) - correction


def alpha_vacuum_kernel(
    d: int,
    nu: Number,
    alpha: VacuumParameter,
    kind: PropagatorKind,
    geom: DsPairGeometry,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """Kernels of the single alpha-vacuum (beta = alpha)."""
    alpha = VacuumParameter.of(alpha)
    return alpha_twostate_kernel(d, nu, alpha, alpha, kind, geom, config)


def vacuum_coefficients(alpha: VacuumParameter, beta: VacuumParameter) -> VacuumCoefficients:
    """N and M expressing the beta-vacuum modes through the alpha-vacuum modes."""
    return alpha_vacuum_coefficients(VacuumParameter.of(alpha).alpha, VacuumParameter.of(beta).alpha)


def inout_vacua(d: int, nu: Number) -> Tuple[VacuumParameter, VacuumParameter]:
    """
    Parameters (alpha_minus, alpha_plus) of the in and out vacua.

    Odd d: both equal (-1)^((d+1)/2) e^(-pi nu). Even d: alpha_minus = i (-1)^(d/2) e^(-pi nu)
    and alpha_plus = -alpha_minus.
    """
    d = check_dimension(d)
    nu = _check_positive_nu(nu)
    weight = math.exp(-math.pi * nu)
    if d % 2:
        value = (-1) ** ((d + 1) // 2) * weight
        return VacuumParameter(value), VacuumParameter(value)
    minus = 1j * (-1) ** (d // 2) * weight
    return VacuumParameter(minus), VacuumParameter(-minus)


def scarf_mode_map(d: int, l: int) -> Tuple[float, bool]:
    """
    Scarf index of the l-th spherical mode on global de Sitter, and whether it is reflectionless.

    The mode equation of a = cosh is -H + nu^2 with H the Scarf operator of index l + (d-2)/2,
    reflectionless exactly for half-integer indices (odd d).
    """
    d = check_dimension(d)
    if int(l) != l or l < 0:
        raise KgpropValidationError(f"l must be a non-negative integer, got {l}", field="l")
    index = l + 0.5 * (d - 2)
    return index, is_reflectionless_index(index)


def ds_identity_residuals(
    d: int,
    nu: Number,
    geom: DsPairGeometry,
    alpha: Optional[VacuumParameter] = None,
    beta: Optional[VacuumParameter] = None,
    config: Optional[KgpropConfig] = None,
) -> Dict[str, float]:
    """Identity residuals of the Euclidean state, or of the (alpha, beta) two-state kernels."""
    cfg = resolve_config(config)
    if alpha is None and beta is None:
        return identity_residuals(lambda kind: euclidean_kernel(d, nu, kind, geom, cfg))
    a = VacuumParameter.of(alpha if alpha is not None else 0j)
    b = VacuumParameter.of(beta if beta is not None else a)
    return identity_residuals(lambda kind: alpha_twostate_kernel(d, nu, a, b, kind, geom, cfg))


def ds_dalembertian_residual(
    d: int,
    nu: Number,
    kind: PropagatorKind,
    tau: float,
    theta: float,
    h: float = 1e-2,
    config: Optional[KgpropConfig] = None,
) -> KgResidual:
    """
    Klein-Gordon residual of a kernel with x' at the north pole at tau' = 0.

    In (tau, theta) the operator on zonal functions is
    d_tau^2 + (d-1) tanh(tau) d_tau - (d_theta^2 + (d-2) cot(theta) d_theta) / cosh^2(tau)
    + ((d-1)/2)^2 + nu^2. Second-order differences at h and h/2 give the observed order.

    Raises:
        KgpropValidationError: If h is not positive.
    """
    cfg = resolve_config(config)
    d = check_dimension(d)
    if not h > 0:
        raise KgpropValidationError("h must be positive", field="h")
    kind = PropagatorKind.parse(kind)
    nu = complex(nu)
    mass2 = half_shift(d) ** 2 + nu * nu

    def kernel(t: float, th: float) -> complex:
        return euclidean_kernel(d, nu, kind, ds_pair(t, 0.0, th, cfg), cfg)

    def residual(step_size: float) -> float:
        terms = second_order_terms(kernel, tau, theta, step_size)
        angular = terms["fyy"] + (d - 2) * terms["fy"] / math.tan(theta)
        return relative_sum(
            (
                terms["fxx"],
                (d - 1) * math.tanh(tau) * terms["fx"],
                -angular / math.cosh(tau) ** 2,
                mass2 * terms["f"],
            )
        )

    result = KgResidual(coarse=residual(h), fine=residual(0.5 * h), h=h)
    if cfg.debug:
        logger.debug("dS KG residual %s at (%g, %g): %s", kind.value, tau, theta, result.to_dict())
    return result
