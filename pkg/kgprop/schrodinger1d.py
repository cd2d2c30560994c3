"""
Green functions of one-dimensional Schrodinger operators H = -d^2/dt^2 + V(t).

The resolvent (H + k^2)^-1 is built from the Jost solutions, the Feynman and
anti-Feynman kernels are its boundary values at k = +-im, and the classical
Green functions come from the canonical bisolution. A potential is
reflectionless at mass m exactly when F + Fbar equals the sum of the forward and
backward Green functions.
"""

import cmath
import logging
import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from kgprop.config import KgpropConfig, resolve_config
from kgprop.errors import (
    BoundStateHit,
    DecayTooSlow,
    DomainError,
    IllConditionedMatch,
    InconsistentWronskian,
    KgpropValidationError,
    NotJostAdmissible,
    SolverDiverged,
)
from kgprop.models.common import CutComplex, GegenbauerParams, Number
from kgprop.models.potential import (
    Direction,
    JostPair,
    Potential,
    ScaledBranch,
    ScatteringData,
    window_for,
)
from kgprop.specfun import gamma, gegenbauer_z_continued

logger = logging.getLogger("kgprop.schrodinger1d")

Sample = Tuple[float, float]

# relative spacing of the interior matching points, as fractions of T
MATCH_POINTS = (-0.5, -0.25, 0.25, 0.5)


def _solve(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    y0: np.ndarray,
    cfg: KgpropConfig,
) -> Callable[[float], np.ndarray]:
    """Integrate with DOP853 and return the dense interpolant."""
    if t0 == t1:
        return lambda t: y0.copy()
    sol = integrate.solve_ivp(rhs, (t0, t1), y0, method="DOP853", rtol=cfg.rtol, atol=cfg.atol, dense_output=True)
    if not sol.success:
        raise SolverDiverged(f"Integration from {t0:g} to {t1:g} failed: {sol.message}")
    if cfg.debug:
        logger.debug("solve_ivp %g -> %g: %d steps, %d evaluations", t0, t1, sol.t.size, sol.nfev)
    dense = sol.sol
    return lambda t: np.asarray(dense(t), dtype=complex)


def _check_k(k: Number) -> complex:
    k = complex(k)
    if k == 0:
        raise DomainError("k = 0 is a threshold point", field="k")
    if k.real < 0:
        raise DomainError(f"Re(k) must be non-negative, got k={k}", field="k")
    return k


def jost_solve(potential: Potential, k: Number, config: Optional[KgpropConfig] = None) -> JostPair:
    """
    Compute the Jost solutions of (H + k^2) psi = 0.

    The scaled functions u = exp(kappa t) psi_+ and v = exp(-kappa t) psi_- are
    integrated inward from the edges of the window [-T, T], where the declared
    tail bound drops below the configured threshold.

    Args:
        potential: A potential with declared exponential decay.
        k: Spectral parameter with Re(k) >= 0 (Re(k) = 0 gives the boundary values).
        config: Optional configuration.

    Returns:
        The JostPair.

    Raises:
        NotJostAdmissible: If the potential has no declared decay.
        DecayTooSlow: If the window would exceed config.max_window.
        SolverDiverged: If the integration fails.
        InconsistentWronskian: If the Wronskian at -T, 0 and T spreads beyond config.wronskian_tol.
    """
    cfg = resolve_config(config)
    k = _check_k(k)
    potential.require_jost_admissible()
    kappa = potential.kappa(k)
    T = window_for(potential, cfg.decay_threshold)
    if T > cfg.max_window:
        raise DecayTooSlow(f"Matching window T={T:.1f} exceeds max_window={cfg.max_window:g}", window=T)
    if cfg.debug:
        logger.debug("jost_solve %s k=%s kappa=%s window T=%.3f", potential.label, k, kappa, T)

    if potential.has_zero_tail:
        flat: ScaledBranch = lambda t: (1.0 + 0j, 0j)  # noqa: E731
        return JostPair(k=k, kappa=kappa, T=T, plus_scaled=flat, minus_scaled=flat, exact=True)

    tail = potential.tail

    def plus_rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], 2 * kappa * y[1] + tail(t) * y[0]], dtype=complex)

    def minus_rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], -2 * kappa * y[1] + tail(t) * y[0]], dtype=complex)

    start = np.array([1.0, 0.0], dtype=complex)
    plus_dense = _solve(plus_rhs, T, -T, start, cfg)
    minus_dense = _solve(minus_rhs, -T, T, start, cfg)

    def plus_scaled(t: float) -> Tuple[complex, complex]:
        y = plus_dense(t)
        return complex(y[0]), complex(y[1])

    def minus_scaled(t: float) -> Tuple[complex, complex]:
        y = minus_dense(t)
        return complex(y[0]), complex(y[1])

    pair = JostPair(k=k, kappa=kappa, T=T, plus_scaled=plus_scaled, minus_scaled=minus_scaled)
    _, spread = _wronskian_spread(pair, (0.0, -T, T))
    if spread > cfg.wronskian_tol:
        raise InconsistentWronskian(f"Jost solutions at k={k} do not keep a constant Wronskian", spread=spread)
    return pair


def _wronskian_spread(pair: JostPair, points: Sequence[float]) -> Tuple[complex, float]:
    """Wronskian at the first point and the relative spread over all points."""
    values = [pair.wronskian_at(t) for t in points]
    omega, _ = values[0]
    scale = max(s for _, s in values)
    if scale == 0:
        return omega, 0.0
    return omega, max(abs(w - omega) for w, _ in values) / scale


def jost_function(pair: JostPair, config: Optional[KgpropConfig] = None) -> complex:
    """
    Return omega(k) = W(psi_+, psi_-) evaluated at t = 0.

    Raises:
        InconsistentWronskian: If the values at 0 and +-T/2 disagree beyond config.wronskian_tol.
    """
    cfg = resolve_config(config)
    omega, spread = _wronskian_spread(pair, (0.0, -pair.T / 2, pair.T / 2))
    if spread > cfg.wronskian_tol:
        raise InconsistentWronskian(f"Wronskian varies across the window at k={pair.k}", spread=spread)
    return omega


def jost_wronskian_residual(pair: JostPair, num: int = 41) -> float:
    """Largest relative deviation of the Wronskian from its value at 0 over a uniform grid of [-T, T]."""
    omega, scale0 = pair.wronskian_at(0.0)
    worst = 0.0
    for t in np.linspace(-pair.T, pair.T, num):
        w, scale = pair.wronskian_at(float(t))
        worst = max(worst, abs(w - omega) / max(scale, scale0, 1e-300))
    return worst


class _FundamentalSystem:
    """Solutions c, s of psi'' = (V + k^2) psi with c(0) = s'(0) = 1 and c'(0) = s(0) = 0."""

    def __init__(self, potential: Potential, k: complex, points: Iterable[float], cfg: KgpropConfig) -> None:
        k2 = k * k

        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            q = potential(t) + k2
            return np.array([y[1], q * y[0], y[3], q * y[2]], dtype=complex)

        pts = list(points)
        start = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex)
        self._forward = _solve(rhs, 0.0, max(pts + [0.0]), start, cfg)
        self._backward = _solve(rhs, 0.0, min(pts + [0.0]), start, cfg)

    def __call__(self, t: float) -> np.ndarray:
        return self._forward(t) if t >= 0 else self._backward(t)

    def bisolution(self, t: float, s: float) -> complex:
        """c(t) s(s) - s(t) c(s); the Wronskian of (c, s) is 1."""
        yt = self(t)
        ys = self(s)
        return complex(yt[0] * ys[2] - yt[2] * ys[0])


def _bisolution_from_pair(pair: JostPair, omega: complex, t: float, s: float) -> complex:
    pt, _ = pair.plus(t)
    mt, _ = pair.minus(t)
    ps, _ = pair.plus(s)
    ms, _ = pair.minus(s)
    return (pt * ms - mt * ps) / omega


def canonical_bisolution(
    potential: Potential,
    k: Number,
    t: float,
    s: float,
    config: Optional[KgpropConfig] = None,
    cross_check: bool = True,
) -> complex:
    """
    Evaluate the canonical bisolution G(t, s) of H + k^2.

    G(t, s) = (psi1(t) psi2(s) - psi2(t) psi1(s)) / W(psi1, psi2) for any pair of
    independent solutions; here the pair with unit data at 0 is used, and the
    value is compared with the one from the Jost pair when that pair exists.

    Raises:
        InconsistentWronskian: If the two bases disagree beyond config.wronskian_tol.
    """
    cfg = resolve_config(config)
    k = complex(k)
    system = _FundamentalSystem(potential, k, (t, s), cfg)
    value = system.bisolution(t, s)
    if not cross_check or k == 0 or not potential.is_jost_admissible:
        return value

    k_jost = k if k.real >= 0 else -k
    try:
        pair = jost_solve(potential, k_jost, cfg)
    except NotJostAdmissible:
        return value
    omega, scale = pair.wronskian_at(0.0)
    if abs(omega) < cfg.bound_state_tol * max(scale, 1.0):
        return value
    other = _bisolution_from_pair(pair, omega, t, s)
    spread = abs(other - value) / max(1.0, abs(value))
    if spread > cfg.wronskian_tol:
        raise InconsistentWronskian(f"Bisolution depends on the basis at k={k}", spread=spread)
    return value


def classical_green(
    potential: Potential,
    k: Number,
    direction: Direction,
    t: float,
    s: float,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    Forward (theta(t - s) G) or backward (-theta(s - t) G) Green function; both vanish at t = s.
    """
    direction = Direction.parse(direction)
    if t == s:
        return 0j
    if direction is Direction.FORWARD and t < s:
        return 0j
    if direction is Direction.BACKWARD and t > s:
        return 0j
    value = canonical_bisolution(potential, k, t, s, config)
    return value if direction is Direction.FORWARD else -value


def _checked_omega(pair: JostPair, cfg: KgpropConfig) -> complex:
    omega = jost_function(pair, cfg)
    _, scale = pair.wronskian_at(0.0)
    if abs(omega) < cfg.bound_state_tol * max(scale, 1e-300):
        raise BoundStateHit(f"Jost function vanishes at k={pair.k}: resolvent pole", jost_value=omega)
    return omega


def _resolvent_from_pair(pair: JostPair, omega: complex, t: float, s: float) -> complex:
    if t >= s:
        return pair.plus(t)[0] * pair.minus(s)[0] / omega
    return pair.minus(t)[0] * pair.plus(s)[0] / omega


def resolvent_kernel(
    potential: Potential,
    k: Number,
    t: float,
    s: float,
    config: Optional[KgpropConfig] = None,
) -> complex:
    """
    Integral kernel of (H + k^2)^-1.

    R(t, s) = [theta(t - s) psi_+(t) psi_-(s) + theta(s - t) psi_-(t) psi_+(s)] / omega(k).

    Raises:
        BoundStateHit: If |omega(k)| is below config.bound_state_tol relative to its terms.
    """
    cfg = resolve_config(config)
    pair = jost_solve(potential, k, cfg)
    return _resolvent_from_pair(pair, _checked_omega(pair, cfg), t, s)


def _check_mass(m: float) -> float:
    if not m > 0:
        raise KgpropValidationError(f"Mass must be positive, got {m}", field="m")
    return float(m)


class _FeynmanPairs:
    """Jost data at k = im and k = -im, shared by the Feynman-type operations."""

    def __init__(self, potential: Potential, m: float, cfg: KgpropConfig) -> None:
        self.plus = jost_solve(potential, 1j * m, cfg)
        self.minus = jost_solve(potential, -1j * m, cfg)
        self.omega_plus = _checked_omega(self.plus, cfg)
        self.omega_minus = _checked_omega(self.minus, cfg)

    def kernels(self, t: float, s: float) -> Tuple[complex, complex]:
        f = _resolvent_from_pair(self.plus, self.omega_plus, t, s)
        fbar = _resolvent_from_pair(self.minus, self.omega_minus, t, s)
        return f, fbar


def feynman_kernels(
    potential: Potential,
    m: float,
    t: float,
    s: float,
    config: Optional[KgpropConfig] = None,
) -> Tuple[complex, complex]:
    """
    Feynman and anti-Feynman kernels at mass m.

    F is the resolvent evaluated with Jost data at k = im, Fbar with k = -im.

    Returns:
        (F(t, s), Fbar(t, s)).
    """
    cfg = resolve_config(config)
    return _FeynmanPairs(potential, _check_mass(m), cfg).kernels(t, s)


def feynman_sampler(
    potential: Potential, m: float, config: Optional[KgpropConfig] = None
) -> Callable[[float, float], Tuple[complex, complex]]:
    """Solve the Jost problems at k = +-im once and return (t, s) -> (F, Fbar)."""
    cfg = resolve_config(config)
    return _FeynmanPairs(potential, _check_mass(m), cfg).kernels


def _wronskian(f: Tuple[complex, complex], g: Tuple[complex, complex]) -> complex:
    return f[0] * g[1] - f[1] * g[0]


def _match(
    target: Callable[[float], Tuple[complex, complex]],
    first: Callable[[float], Tuple[complex, complex]],
    second: Callable[[float], Tuple[complex, complex]],
    T: float,
    cfg: KgpropConfig,
) -> Tuple[complex, complex, float, float]:
    """Least-squares coefficients of target = A first + B second, with a Wronskian cross-check."""
    rows: List[List[complex]] = []
    rhs: List[complex] = []
    for frac in MATCH_POINTS:
        t = frac * T
        f, g, h = first(t), second(t), target(t)
        rows.extend([[f[0], g[0]], [f[1], g[1]]])
        rhs.extend([h[0], h[1]])
    matrix = np.array(rows, dtype=complex)
    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > cfg.match_condition_limit:
        raise IllConditionedMatch("Scattering matching system is ill conditioned", condition=condition)
    (a, b), *_ = np.linalg.lstsq(matrix, np.array(rhs, dtype=complex), rcond=None)

    f0, g0, h0 = first(0.0), second(0.0), target(0.0)
    w = _wronskian(f0, g0)
    a_w = _wronskian(h0, g0) / w
    b_w = _wronskian(f0, h0) / w
    discrepancy = max(abs(a - a_w), abs(b - b_w)) / max(1.0, abs(a_w))
    return complex(a), complex(b), condition, discrepancy


def scattering_coefficients(
    potential: Potential,
    m: float,
    config: Optional[KgpropConfig] = None,
) -> ScatteringData:
    """
    Decompose psi_+(+-im) = A(+-im) psi_-(-+im) + B(+-im) psi_+(-+im).

    The coefficients are fitted by least squares to values and derivatives at
    four interior points and cross-checked against their Wronskian expressions.

    Raises:
        IllConditionedMatch: If a matching system has condition number above config.match_condition_limit.
        InconsistentWronskian: If the fitted and Wronskian coefficients disagree beyond config.wronskian_tol.
    """
    cfg = resolve_config(config)
    m = _check_mass(m)
    up = jost_solve(potential, 1j * m, cfg)
    down = jost_solve(potential, -1j * m, cfg)
    T = min(up.T, down.T)

    a_plus, b_plus, cond_plus, disc_plus = _match(up.plus, down.minus, down.plus, T, cfg)
    a_minus, b_minus, cond_minus, disc_minus = _match(down.plus, up.minus, up.plus, T, cfg)
    discrepancy = max(disc_plus, disc_minus)
    if discrepancy > cfg.wronskian_tol:
        raise InconsistentWronskian("Matched scattering data disagree with the Wronskian relations", spread=discrepancy)
    if cfg.debug:
        logger.debug("scattering %s m=%g: |B+|=%.3e |B-|=%.3e", potential.label, m, abs(b_plus), abs(b_minus))
    return ScatteringData(
        m=m,
        a_plus=a_plus,
        b_plus=b_plus,
        a_minus=a_minus,
        b_minus=b_minus,
        condition=max(cond_plus, cond_minus),
        wronskian_discrepancy=discrepancy,
    )


def specialty_residual(
    potential: Potential,
    m: float,
    samples: Sequence[Sample],
    config: Optional[KgpropConfig] = None,
) -> float:
    """
    max over samples of |F + Fbar - G_forward - G_backward| at mass m.

    The classical sum is sgn(t - s) times the canonical bisolution at k = im.
    """
    cfg = resolve_config(config)
    m = _check_mass(m)
    if not samples:
        return 0.0
    pairs = _FeynmanPairs(potential, m, cfg)
    points = [x for sample in samples for x in sample]
    system = _FundamentalSystem(potential, 1j * m, points, cfg)
    worst = 0.0
    for t, s in samples:
        f, fbar = pairs.kernels(t, s)
        sign = float(np.sign(t - s))
        worst = max(worst, abs(f + fbar - sign * system.bisolution(t, s)))
    return worst


def green_residual(
    potential: Potential,
    m: float,
    t: float,
    s: float,
    h: float = 1e-2,
    config: Optional[KgpropConfig] = None,
) -> Tuple[float, complex]:
    """
    Finite-difference check of the Feynman kernel as a Green function.

    Returns:
        (residual, jump): the relative residual of (d_t^2 + m^2 - V(t)) F(t, s) at t != s,
        and the jump of d_t F(t, s) across t = s (equal to -1 for the resolvent of H + k^2).
    """
    cfg = resolve_config(config)
    m = _check_mass(m)
    if abs(t - s) <= 2 * h:
        raise KgpropValidationError("t must be farther than 2h from s", field="t")
    pairs = _FeynmanPairs(potential, m, cfg)

    def F(x: float, y: float) -> complex:
        return pairs.kernels(x, y)[0]

    fm2, fm1, f0, fp1, fp2 = (F(t + j * h, s) for j in (-2, -1, 0, 1, 2))
    second = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    potential_term = (m * m - potential(t)) * f0
    residual = abs(second + potential_term) / max(abs(second), abs(potential_term), 1e-300)

    right = (-3 * F(s, s) + 4 * F(s + h, s) - F(s + 2 * h, s)) / (2 * h)
    left = (3 * F(s, s) - 4 * F(s - h, s) + F(s - 2 * h, s)) / (2 * h)
    return residual, right - left


def scarf32_closed_form(k: Number, t: float) -> Tuple[complex, complex]:
    """
    Jost solutions of the Scarf potential with mu = 3/2, V = -2/cosh(t)^2.

    Returns:
        (psi_+(t), psi_-(t)) with psi_+ = exp(-k t)(k + tanh t)/(k + 1) and psi_-(t) = psi_+(-t).
    """
    k = complex(k)

    def plus(x: float) -> complex:
        return cmath.exp(-k * x) * (k + math.tanh(x)) / (k + 1)

    return plus(t), plus(-t)


def scarf_jost_closed_form(mu: float, k: Number, t: float) -> Tuple[complex, complex]:
    """
    Jost solutions of the Scarf potential through the Gegenbauer function Z.

    psi_+(t) = 2^-k Gamma(1 + k) exp(i pi (1/2 + mu + k)/2) cosh(t)^(mu + 1/2) Z_{mu,k}(i sinh t),
    continued through the cut of Z for t < 0; psi_-(t) = psi_+(-t).

    Returns:
        (psi_+(t), psi_-(t)).
    """
    k = complex(k)
    params = GegenbauerParams(mu, k)
    prefactor = 2 ** (-k) * gamma(1 + k) * cmath.exp(1j * math.pi * (0.5 + mu + k) / 2)

    def plus(x: float) -> complex:
        w = CutComplex(1j * math.sinh(x))
        return prefactor * math.cosh(x) ** (mu + 0.5) * gegenbauer_z_continued(params, w)

    return plus(t), plus(-t)
