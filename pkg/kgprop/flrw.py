"""
Mode reduction of the Klein-Gordon operator on FLRW spacetimes.

On -dt^2 + a(t)^2 g_Sigma the gauged operator a^{(d-1)/2} (-Box + m^2) a^{-(d-1)/2}
acts on an eigenmode of the spatial Laplacian with eigenvalue lambda as
d^2/dt^2 - V_lambda + m^2, with

    V_lambda = (d-1)/2 (a''/a + (d-3)/2 (a'/a)^2) - lambda / a^2.

The equation is special exactly when every V_lambda is reflectionless at m.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from kgprop.config import KgpropConfig, resolve_config
from kgprop.errors import KgpropValidationError, NotJostAdmissible
from kgprop.models.flrw import FlrwModel, FlrwScan, ScaleFactor, ScaleFactorKind
from kgprop.models.potential import ModeReport, Potential
from kgprop.schrodinger1d import scattering_coefficients

logger = logging.getLogger("kgprop.flrw")


def _scale_factor(model: FlrwModel, cfg: KgpropConfig) -> ScaleFactor:
    a = model.a
    if a.kind is ScaleFactorKind.CALLABLE and a.fd_step != cfg.fd_step:
        return replace(a, fd_step=cfg.fd_step)
    return a


def _values_function(a: ScaleFactor, d: int, lam: float) -> Callable[[ArrayLike], ArrayLike]:
    p = 0.5 * (d - 1)
    q = 0.5 * (d - 3)

    def scalar(t: float) -> float:
        value = a(t)
        hubble = a.first(t) / value
        return p * (a.second(t) / value + q * hubble * hubble) - lam / (value * value)

    def values(t: ArrayLike) -> ArrayLike:
        arr = np.asarray(t, dtype=float)
        if arr.ndim == 0:
            return scalar(float(arr))
        return np.array([scalar(float(x)) for x in arr.ravel()]).reshape(arr.shape)

    return values


def mode_potential_values(
    model: FlrwModel,
    lam: float,
    t: ArrayLike,
    config: Optional[KgpropConfig] = None,
) -> ArrayLike:
    """V_lambda(t) evaluated from a and its derivatives."""
    cfg = resolve_config(config)
    return _values_function(_scale_factor(model, cfg), model.d, float(lam))(t)


def scarf_index(d: int, lam: float) -> float:
    """
    mu^2 of the Scarf form of the a = cosh(t) mode potential.

    For lambda = l(l+d-2) this is (l + (d-2)/2)^2.
    """
    return 0.25 + 0.25 * (d - 1) * (d - 3) + lam


def _callable_offset(values: Callable[[ArrayLike], ArrayLike], a: ScaleFactor, lam: float, cfg: KgpropConfig) -> float:
    assert a.decay_rate is not None
    constant = a.decay_constant * (abs(lam) + 1)
    far = cfg.max_window
    if constant > cfg.decay_threshold:
        far = min(far, max(1.0, math.log(constant / cfg.decay_threshold) / a.decay_rate))
    right, left = float(values(far)), float(values(-far))
    if abs(right - left) > 2 * cfg.decay_threshold + 1e-8 * max(1.0, abs(right)):
        raise NotJostAdmissible(
            f"V_lambda tends to different limits {left:g} and {right:g} at -oo and +oo",
            field="a",
        )
    return 0.5 * (right + left)


def mode_potential(model: FlrwModel, lam: float, config: Optional[KgpropConfig] = None) -> Potential:
    """
    The Schrodinger potential of the mode with Laplacian eigenvalue lam.

    Constant and cosh scale factors give the zero and Scarf potentials with an
    offset; other scale factors give callable potentials whose decay is the one
    declared on the scale factor.

    Args:
        model: FLRW model.
        lam: Laplacian eigenvalue.
        config: Optional configuration.

    Returns:
        The mode potential.

    Raises:
        NotJostAdmissible: If a declared-decaying callable scale factor yields
            different limits of V_lambda at -oo and +oo.
    """
    cfg = resolve_config(config)
    lam = float(lam)
    a = _scale_factor(model, cfg)
    d = model.d
    name = f"flrw[{a.label}, d={d}, lambda={lam:g}]"

    if a.kind is ScaleFactorKind.CONST:
        return replace(Potential.zero(offset=-lam / a.parameter**2), label=name)
    if a.kind is ScaleFactorKind.COSH:
        offset = 0.25 * (d - 1) ** 2
        mu2 = scarf_index(d, lam)
        if mu2 >= 0:
            return replace(Potential.scarf(math.sqrt(mu2), offset=offset), label=name)
        return Potential.from_callable(
            _values_function(a, d, lam), 2.0, 4 * abs(mu2 - 0.25), offset=offset, label=name
        )

    values = _values_function(a, d, lam)
    if not a.decays:
        return Potential.from_callable(values, None, label=name)
    offset = _callable_offset(values, a, lam, cfg)
    assert a.decay_rate is not None
    return Potential.from_callable(values, a.decay_rate, a.decay_constant * (abs(lam) + 1), offset, name)


def _scan_one(potential: Potential, lam: float, m: float, cfg: KgpropConfig) -> ModeReport:
    data = scattering_coefficients(potential, m, cfg)
    report = ModeReport(
        parameter=lam,
        m=m,
        b_plus=abs(data.b_plus),
        b_minus=abs(data.b_minus),
        special=data.is_reflectionless(cfg.reflection_tol),
    )
    if cfg.debug:
        logger.debug("%s: |B+|=%.3e |B-|=%.3e", potential.label, report.b_plus, report.b_minus)
    return report


def specialty_scan(
    model: FlrwModel,
    m: float,
    modes: Optional[Sequence[float]] = None,
    config: Optional[KgpropConfig] = None,
) -> FlrwScan:
    """
    Decide specialty of the Klein-Gordon equation mode by mode.

    Every mode potential is checked for declared decay before any solve. Modes
    are scanned on up to config.threads workers.

    Args:
        model: FLRW model.
        m: Mass; m^2 must exceed the asymptotic value of every V_lambda.
        modes: Laplacian eigenvalues (defaults to the model spectrum).
        config: Optional configuration.

    Returns:
        An FlrwScan, special iff every |B| is below config.reflection_tol.

    Raises:
        KgpropValidationError: If m is not positive or no modes are given.
        NotJostAdmissible: If some V_lambda does not decay or m^2 lies below its asymptote.
    """
    cfg = resolve_config(config)
    if not m > 0:
        raise KgpropValidationError(f"m must be positive, got {m}", field="m")
    if modes is None:
        lams: Tuple[float, ...] = model.spectrum
        names: Sequence[str] = model.labels
    else:
        lams = tuple(float(x) for x in modes)
        names = [f"lambda={x:g}" for x in lams]
    if not lams:
        raise KgpropValidationError("specialty_scan needs at least one mode", field="modes")

    potentials = [mode_potential(model, lam, cfg) for lam in lams]
    for potential in potentials:
        potential.require_jost_admissible()

    workers = min(cfg.threads or 1, len(lams))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports: List[ModeReport] = list(
                pool.map(lambda pair: _scan_one(pair[0], pair[1], m, cfg), zip(potentials, lams))
            )
    else:
        reports = [_scan_one(v, lam, m, cfg) for v, lam in zip(potentials, lams)]

    scan = FlrwScan(label=model.a.label, d=model.d, m=float(m), modes=reports, names=list(names))
    logger.info(
        "flrw scan a=%s d=%d m=%g: %d modes, special=%s, max |B|=%.3e",
        scan.label,
        scan.d,
        scan.m,
        len(reports),
        scan.special,
        scan.worst_reflection,
    )
    return scan


def _fd(func: Callable[[float], float], t: float, h: float) -> Tuple[float, float, float]:
    """f, f' and f'' at t by fourth-order central differences."""
    fm2, fm1, f0, fp1, fp2 = (func(t + j * h) for j in (-2, -1, 0, 1, 2))
    first = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    second = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    return f0, first, second


def gauge_residual(
    model: FlrwModel,
    lam: float,
    m: float,
    t: float,
    f: Optional[Callable[[float], float]] = None,
    h: float = 1e-3,
    config: Optional[KgpropConfig] = None,
) -> float:
    """
    Relative difference of a^p (-Box + m^2) a^-p f and (d^2/dt^2 - V_lambda + m^2) f at t.

    Here p = (d-1)/2 and -Box + m^2 restricted to the mode is
    d^2/dt^2 + (d-1) (a'/a) d/dt + lambda/a^2 + m^2. Both sides use the same
    finite differences, so the residual is O(h^4) plus rounding.

    Args:
        model: FLRW model.
        lam: Laplacian eigenvalue.
        m: Mass.
        t: Evaluation time.
        f: Test function (defaults to exp(-x^2/4) (1 + x)).
        h: Finite-difference step.
        config: Optional configuration.
    """
    cfg = resolve_config(config)
    if not h > 0:
        raise KgpropValidationError("h must be positive", field="h")
    a = _scale_factor(model, cfg)
    p = model.gauge_power
    test = f if f is not None else (lambda x: math.exp(-0.25 * x * x) * (1 + x))

    def ungauged(x: float) -> float:
        return a(x) ** (-p) * test(x)

    u, du, d2u = _fd(ungauged, t, h)
    value = a(t)
    lhs = value**p * (d2u + (model.d - 1) * a.hubble(t) * du + (lam / value**2 + m * m) * u)

    f0, _, d2f = _fd(test, t, h)
    potential = float(_values_function(a, model.d, float(lam))(t))
    rhs = d2f - potential * f0 + m * m * f0
    scale = max(abs(d2f), abs(potential * f0), m * m * abs(f0), 1e-300)
    return abs(lhs - rhs) / scale
