"""
Propagators on the universal cover of anti-de Sitter space AdS_d.

The time strip is unrolled: tau runs over the whole real line and pairs are
sorted into regions V_k. The resolvent of -Box - ((d-1)/2)^2 + nu^2 is given
chart by chart on W_n = V_{2n-1} u V_{2n} u V_{2n+1} through
**Z**_{d/2-1,nu}(-(-1)^n Z +- i0) and a phase e^(-+ i |n| ((d-1)/2 + nu) pi).
"""

import cmath
import logging
import math
from typing import Dict, Optional

from kgprop.config import KgpropConfig, resolve_config
from kgprop.errors import ChartBoundary, DomainError, KgpropValidationError
from kgprop.models.antidesitter import AdsPairGeometry, AdsPoint, PoschlTellerRegime, PoschlTellerReport
from kgprop.models.common import Number, PropagatorKind, Side
from kgprop.spacetimes.base import (
    KgResidual,
    check_dimension,
    gegenbauer_params,
    half_shift,
    identity_residuals,
    relative_sum,
    second_order_terms,
    sign,
    step,
    z_boundary,
)
from kgprop.specfun import gamma

logger = logging.getLogger("kgprop.antidesitter")

PARAMETER_TOL = 1e-12


def ads_nu(d: int, m2: float) -> complex:
    """nu = sqrt(m^2 + ((d-1)/2)^2) on the principal branch."""
    d = check_dimension(d)
    return complex(cmath.sqrt(m2 + half_shift(d) ** 2))


def _region(Z: float, delta: float) -> int:
    # inside [m pi, (m+1) pi) the regions V_{2m}, V_{2m+1}, V_{2m+2} follow each other
    m = math.floor(delta / math.pi)
    if abs(Z) < 1:
        return 2 * m + 1
    return 2 * m if -((-1) ** m) * Z > 1 else 2 * m + 2


def _pair(Z: float, delta: float, cfg: KgpropConfig) -> AdsPairGeometry:
    null = abs(abs(Z) - 1) < cfg.light_cone_tol
    k = _region(Z, delta)
    n = k // 2
    if k % 2:
        s_tilde = 1 if n % 2 == 0 else -1
        s = s_tilde if n >= 0 else -s_tilde
    else:
        s = s_tilde = 0
    if null:
        logger.debug("pair on a chart boundary, Z=%.17g delta=%.17g", Z, delta)
    return AdsPairGeometry(Z=Z, delta=delta, region=k, n=n, s=s, s_tilde=s_tilde, null_separated=null)


def ads_pair(
    tau: float,
    u: float,
    tau_prime: float = 0.0,
    u_prime: float = 0.0,
    theta: float = 0.0,
    config: Optional[KgpropConfig] = None,
) -> AdsPairGeometry:
    """Geometry of (tau, u) and (tau', u') at angular separation theta."""
    cfg = resolve_config(config)
    for name, value in (("u", u), ("u_prime", u_prime)):
        if not 0 <= value < math.pi / 2:
            raise DomainError(f"{name} must lie in [0, pi/2), got {value}", field=name)
    delta = tau - tau_prime
    Z = (-math.cos(delta) + math.sin(u) * math.sin(u_prime) * math.cos(theta)) / (math.cos(u) * math.cos(u_prime))
    return _pair(Z, delta, cfg)


def ads_geometry(x: AdsPoint, y: AdsPoint, config: Optional[KgpropConfig] = None) -> AdsPairGeometry:
    """
    Invariant geometry of the pair (x, y).

    Z = [-cos(tau - tau') + sin u sin u' cos theta] / (cos u cos u'), where theta is
    the angle between the two directions on S^{d-2}.
    """
    if x.d != y.d:
        raise KgpropValidationError(f"points of AdS_{x.d} and AdS_{y.d} cannot be paired", field="omega")
    cos_theta = max(-1.0, min(1.0, sum(a * b for a, b in zip(x.omega, y.omega))))
    return ads_pair(x.tau, x.u, y.tau, y.u, math.acos(cos_theta), config)


def ads_prefactor(d: int, nu: Number) -> complex:
    """sqrt(pi) Gamma((d-1)/2 + nu) / (sqrt(2) (2 pi)^(d/2) 2^nu)."""
    nu = complex(nu)
    return math.sqrt(math.pi) * gamma(half_shift(d) + nu) / (math.sqrt(2) * (2 * math.pi) ** (0.5 * d) * 2**nu)


def hyperbolic_kernel(d: int, nu: Number, Z: float) -> complex:
    """
    Green function of -Delta - ((d-1)/2)^2 + nu^2 on the hyperbolic space H^d, for [x|x'] = Z < -1.

    Raises:
        DomainError: If Z >= -1 or Re(nu) <= 0.
    """
    d = check_dimension(d)
    nu = complex(nu)
    if not nu.real > 0:
        raise DomainError(f"nu must have Re(nu) > 0, got {nu}", field="nu")
    if not Z < -1:
        raise DomainError(f"Z must be below -1 on H^d, got {Z}", field="Z")
    return ads_prefactor(d, nu) * z_boundary(gegenbauer_params(d, nu), -Z, Side.OFF)


def _require_off_boundary(geom: AdsPairGeometry) -> None:
    if geom.null_separated:
        raise ChartBoundary(f"pair is null separated (Z={geom.Z:.17g}, region V_{geom.region})", field="Z")


def _chart_value(d: int, nu: complex, geom: AdsPairGeometry, branch: int, n: Optional[int] = None) -> complex:
    """
    Resolvent-type expression on the chart W_n.

    branch = +1 gives i e^(-i|n|(a+nu)pi) Z(-(-1)^n Z + (-1)^n i0 s), the Im(nu) < 0
    resolvent and the Feynman kernel; branch = -1 gives the Im(nu) > 0 expression.
    """
    n = geom.n if n is None else n
    parity = 1 if n % 2 == 0 else -1
    side = Side(sign(branch * parity * geom.s))
    phase = cmath.exp(-branch * 1j * abs(n) * (half_shift(d) + nu) * math.pi)
    value = z_boundary(gegenbauer_params(d, nu), -parity * geom.Z, side)
    return branch * 1j * ads_prefactor(d, nu) * phase * value


def ads_resolvent(
    d: int,
    nu: Number,
    geom: AdsPairGeometry,
    chart: Optional[int] = None,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    Integral kernel of the resolvent of -Box - ((d-1)/2)^2 at -nu^2.

    Args:
        d: Spacetime dimension.
        nu: Spectral parameter with Re(nu) > 0 and nu^2 not real.
        geom: Pair geometry.
        chart: Chart W_n to evaluate on (defaults to geom.n). Only n and n+1 are
            admissible on V_{2n+1}.
        config: Optional configuration.

    Raises:
        DomainError: If Re(nu) <= 0 or nu^2 is real.
        ChartBoundary: If the pair is null separated or outside the requested chart.
    """
    d = check_dimension(d)
    nu = complex(nu)
    if not nu.real > 0 or abs(nu.imag) <= PARAMETER_TOL:
        raise DomainError(f"the resolvent needs Re(nu) > 0 and nu^2 off the real axis, got {nu}", field="nu")
    _require_off_boundary(geom)
    n = _check_chart(geom, chart)
    return _chart_value(d, nu, geom, 1 if nu.imag < 0 else -1, n)


def _check_chart(geom: AdsPairGeometry, chart: Optional[int]) -> int:
    if chart is None:
        return geom.n
    if not geom.region - 1 <= 2 * chart <= geom.region + 1:
        raise ChartBoundary(f"V_{geom.region} is not covered by the chart W_{chart}", field="chart")
    return int(chart)


def _check_positive_nu(nu: Number) -> float:
    value = complex(nu)
    if abs(value.imag) > PARAMETER_TOL or not value.real > 0:
        raise DomainError(f"nu must be positive, got {nu}", field="nu")
    return value.real


def op_feynman_ads(
    d: int,
    nu: Number,
    which: PropagatorKind,
    geom: AdsPairGeometry,
    chart: Optional[int] = None,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    Operator-theoretic Feynman (F) or anti-Feynman (Fbar) kernel for nu > 0.

    Boundary values of ads_resolvent; F + Fbar vanishes on V_0.

    Raises:
        DomainError: If nu is not positive.
        ChartBoundary: If the pair is null separated.
    """
    d = check_dimension(d)
    which = PropagatorKind.parse(which)
    if which in (PropagatorKind.F, PropagatorKind.OP_F):
        branch = 1
    elif which in (PropagatorKind.FBAR, PropagatorKind.OP_FBAR):
        branch = -1
    else:
        raise KgpropValidationError(f"op_feynman_ads computes F or Fbar, got {which.value}", field="kind")
    value = _check_positive_nu(nu)
    _require_off_boundary(geom)
    n = _check_chart(geom, chart)
    return _chart_value(d, complex(value), geom, branch, n)


def ads_classical(
    d: int,
    nu: Number,
    kind: PropagatorKind,
    geom: AdsPairGeometry,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    Retarded, advanced and Pauli-Jordan kernels from F + Fbar.

    Ret/Adv = theta(+-(tau - tau')) (F + Fbar) and PJ = Ret - Adv. Only defined for
    nu > 0, where F + Fbar has causal support.
    """
    kind = PropagatorKind.parse(kind)
    if not kind.is_classical:
        raise KgpropValidationError(f"ads_classical computes Ret, Adv or PJ, got {kind.value}", field="kind")
    total = op_feynman_ads(d, nu, PropagatorKind.F, geom, config=config) + op_feynman_ads(
        d, nu, PropagatorKind.FBAR, geom, config=config
    )
    if kind is PropagatorKind.RET:
        return step(geom.delta) * total
    if kind is PropagatorKind.ADV:
        return step(-geom.delta) * total
    return sign(geom.delta) * total


def ads_pos_neg(
    d: int,
    nu: Number,
    which: PropagatorKind,
    geom: AdsPairGeometry,
    chart: Optional[int] = None,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    Positive (Pos) and negative (Neg) frequency kernels of the state defined by F.

    On W_n: prefactor * e^(-+ i n (a+nu) pi) **Z**(-(-1)^n Z +- (-1)^n i0 s_tilde).
    """
    d = check_dimension(d)
    which = PropagatorKind.parse(which)
    if which not in (PropagatorKind.POS, PropagatorKind.NEG):
        raise KgpropValidationError(f"ads_pos_neg computes Pos or Neg, got {which.value}", field="kind")
    value = complex(_check_positive_nu(nu))
    _require_off_boundary(geom)
    n = _check_chart(geom, chart)
    pm = 1 if which is PropagatorKind.POS else -1
    parity = 1 if n % 2 == 0 else -1
    side = Side(sign(pm * parity * geom.s_tilde))
    phase = cmath.exp(-pm * 1j * n * (half_shift(d) + value) * math.pi)
    return ads_prefactor(d, value) * phase * z_boundary(gegenbauer_params(d, value), -parity * geom.Z, side)


def ads_kernel(
    d: int,
    nu: Number,
    kind: PropagatorKind,
    geom: AdsPairGeometry,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """Any kernel kind of the operator-theoretic state on the universal cover."""
    kind = PropagatorKind.parse(kind)
    if kind in (PropagatorKind.F, PropagatorKind.FBAR, PropagatorKind.OP_F, PropagatorKind.OP_FBAR):
        return op_feynman_ads(d, nu, kind, geom, config=config)
    if kind in (PropagatorKind.POS, PropagatorKind.NEG):
        return ads_pos_neg(d, nu, kind, geom, config=config)
    if kind is PropagatorKind.SYM:
        return ads_pos_neg(d, nu, PropagatorKind.POS, geom, config=config) + ads_pos_neg(
            d, nu, PropagatorKind.NEG, geom, config=config
        )
    if kind.is_classical:
        return ads_classical(d, nu, kind, geom, config)
    raise KgpropValidationError(f"{kind.value} is not defined on anti-de Sitter space", field="kind")


def ads_identity_residuals(
    d: int, nu: Number, geom: AdsPairGeometry, config: Optional[KgpropConfig] = None
) -> Dict[str, float]:
    """Identity residuals of the state defined by the operator-theoretic Feynman kernel."""
    return identity_residuals(lambda kind: ads_kernel(d, nu, kind, geom, config))


def pt_mode_analysis(d: int, l: int, nu2: float) -> PoschlTellerReport:
    """
    Radial Poschl-Teller reduction of the angular mode l and its regime at u = pi/2.

    alpha = l + (d-3)/2 for d >= 3 and alpha = 1/2 for d = 2. The regime only
    depends on nu^2: essentially self-adjoint for nu^2 >= 1, a one-parameter family
    with a distinguished Friedrichs extension for 0 <= nu^2 < 1, unbounded below for nu^2 < 0.
    When alpha^2 < 1 (d in {2, 3, 4} with l = 0) the singular term at u = 0 comes from polar
    coordinates and needs no boundary condition.
    """
    d = check_dimension(d)
    if int(l) != l or l < 0:
        raise KgpropValidationError(f"l must be a non-negative integer, got {l}", field="l")
    l = int(l)
    nu2 = float(nu2)
    alpha = 0.5 if d == 2 else l + 0.5 * (d - 3)
    if nu2 >= 1:
        regime = PoschlTellerRegime.ESSENTIALLY_SELF_ADJOINT
    elif nu2 >= 0:
        regime = PoschlTellerRegime.FRIEDRICHS_DISTINGUISHED
    else:
        regime = PoschlTellerRegime.UNBOUNDED_BELOW
    artifact = alpha * alpha < 1
    note = ""
    if artifact:
        note = "alpha^2 < 1 reflects polar coordinates at u = 0; no boundary condition is needed there"
    return PoschlTellerReport(d=d, l=l, alpha=alpha, nu2=nu2, regime=regime, origin_artifact=artifact, note=note)


def ads_kg_residual(
    d: int,
    nu: Number,
    tau: float,
    u: float,
    kind: Optional[PropagatorKind] = None,
    h: float = 1e-2,
    config: Optional[KgpropConfig] = None,
) -> KgResidual:
    """
    Klein-Gordon residual of a kernel with x' = (0, 0).

    With Z = -cos(tau)/cos(u) the operator, divided by cos^2 u, reads
    d_tau^2 - d_u^2 - (d-2)/(sin u cos u) d_u + (nu^2 - ((d-1)/2)^2)/cos^2 u.
    kind=None evaluates the resolvent (complex nu); otherwise ads_kernel.

    Raises:
        KgpropValidationError: If h is not positive.
    """
    cfg = resolve_config(config)
    d = check_dimension(d)
    if not h > 0:
        raise KgpropValidationError("h must be positive", field="h")
    nu = complex(nu)
    mass2 = nu * nu - half_shift(d) ** 2

    def kernel(t: float, r: float) -> complex:
        geom = ads_pair(t, r, config=cfg)
        if kind is None:
            return ads_resolvent(d, nu, geom, config=cfg)
        return ads_kernel(d, nu, kind, geom, cfg)

    def residual(step_size: float) -> float:
        terms = second_order_terms(kernel, tau, u, step_size)
        c = math.cos(u)
        return relative_sum(
            (
                terms["fxx"],
                -terms["fyy"],
                -(d - 2) / (math.sin(u) * c) * terms["fy"],
                mass2 / (c * c) * terms["f"],
            )
        )

    result = KgResidual(coarse=residual(h), fine=residual(0.5 * h), h=h)
    if cfg.debug:
        logger.debug("AdS KG residual at (%g, %g): %s", tau, u, result.to_dict())
    return result
