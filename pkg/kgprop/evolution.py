"""
Propagators from evolution equations in a finite mode basis.

A static stable operator d^2/dt^2 + L gives all propagators as functions of
sqrt(L). For a time-dependent generator B(t) the dynamics R(t, s) solves
(d/dt + iB(t)) R = 0; the spectral projections of the asymptotic generators
define the in and out vacua and, through the Kato projections of the krein
module, the in-out Feynman propagator.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import integrate, linalg

from kgprop.config import KgpropConfig, resolve_config
from kgprop.errors import DomainError, KgpropValidationError, SolverDiverged, StabilityRequired, ZeroModePresent
from kgprop.krein import kato_projections, kg_orthonormal_basis
from kgprop.models.common import PropagatorKind
from kgprop.models.evolution import (
    AsymptoticProjections,
    BogoliubovMap,
    DynamicsFamily,
    StaticModel,
    TwoStateKernels,
)
from kgprop.models.krein import Involution, ProjectionQuad

logger = logging.getLogger("kgprop.evolution")

_STATIC_KINDS = (
    PropagatorKind.PJ,
    PropagatorKind.RET,
    PropagatorKind.ADV,
    PropagatorKind.POS,
    PropagatorKind.NEG,
    PropagatorKind.F,
    PropagatorKind.FBAR,
    PropagatorKind.SYM,
    PropagatorKind.OP_F,
    PropagatorKind.OP_FBAR,
)


def _sin_over_root(values: np.ndarray, tau: float) -> np.ndarray:
    """sin(tau sqrt(l)) / sqrt(l), entire in l; sinh for negative l."""
    out = np.empty(values.shape, dtype=complex)
    pos = values >= 0
    omega = np.sqrt(values[pos])
    out[pos] = tau * np.sinc(tau * omega / np.pi)
    kappa = np.sqrt(-values[~pos])
    out[~pos] = np.sinh(tau * kappa) / kappa
    return out


def _operator_feynman(values: np.ndarray, tau: float, sign: int) -> np.ndarray:
    """Kernel of (-E^2 + L -+ i0)^-1 in time, for L without zero modes."""
    out = np.empty(values.shape, dtype=complex)
    pos = values > 0
    omega = np.sqrt(values[pos])
    out[pos] = sign * 1j * np.exp(-sign * 1j * omega * abs(tau)) / (2 * omega)
    kappa = np.sqrt(-values[~pos])
    out[~pos] = -np.exp(-kappa * abs(tau)) / (2 * kappa)
    return out


def _frequency_values(kind: PropagatorKind, omega: np.ndarray, tau: float) -> np.ndarray:
    phase = np.exp(-1j * omega * tau)
    if kind is PropagatorKind.POS:
        return phase / (2 * omega)
    if kind is PropagatorKind.NEG:
        return phase.conj() / (2 * omega)
    if kind is PropagatorKind.SYM:
        return np.cos(omega * tau) / omega + 0j
    if kind is PropagatorKind.F:
        return 1j * np.exp(-1j * omega * abs(tau)) / (2 * omega)
    return -1j * np.exp(1j * omega * abs(tau)) / (2 * omega)


def static_kernels(
    model: StaticModel, kind: PropagatorKind, t: float, s: float, config: Optional[KgpropConfig] = None
) -> np.ndarray:
    """
    Evaluate a propagator of d^2/dt^2 + L at times (t, s) as an n x n matrix.

    Classical kinds (PJ, Ret, Adv) accept any Hermitian L. Frequency-split kinds (Pos, Neg,
    Sym, F, Fbar) need L positive definite. OpF and OpFbar are the kernels of
    (d^2/dt^2 + L -+ i0)^-1 and need only that L has no zero eigenvalue.

    Raises:
        StabilityRequired: If a frequency-split kind is requested for non-positive L.
        DomainError: If OpF or OpFbar is requested and L has a zero eigenvalue.
    """
    cfg = resolve_config(config)
    kind = PropagatorKind.parse(kind)
    if kind not in _STATIC_KINDS:
        raise KgpropValidationError(f"Kind {kind.value} is not defined for static models", field="kind")
    values = model.eigenvalues
    tau = float(t) - float(s)
    if kind.is_classical:
        f = _sin_over_root(values, tau)
        if kind is PropagatorKind.RET:
            f = f if tau > 0 else np.zeros_like(f)
        elif kind is PropagatorKind.ADV:
            f = -f if tau < 0 else np.zeros_like(f)
    elif kind in (PropagatorKind.OP_F, PropagatorKind.OP_FBAR):
        scale = max(1.0, float(np.max(np.abs(values))))
        if np.min(np.abs(values)) <= cfg.singular_ratio * scale:
            raise DomainError("L has a zero eigenvalue", field="L")
        f = _operator_feynman(values, tau, 1 if kind is PropagatorKind.OP_F else -1)
    else:
        if not model.is_stable:
            raise StabilityRequired(f"{kind.value} needs L positive definite (smallest eigenvalue {values[0]:.3e})")
        f = _frequency_values(kind, np.sqrt(values), tau)
    if cfg.debug:
        logger.debug("static %s at tau=%g over %d modes", kind.value, tau, values.size)
    return model.apply(f)


def tachyonic_classical(
    model: StaticModel,
    t: float,
    s: float,
    kind: PropagatorKind = PropagatorKind.PJ,
    config: Optional[KgpropConfig] = None,
) -> np.ndarray:
    """
    Classical propagators for a possibly indefinite L.

    sin((t - s) sqrt(L)) / sqrt(L) is an entire function of L, so it grows like sinh along
    negative modes. Only PJ, Ret and Adv exist without a positive frequency split.

    Raises:
        StabilityRequired: If a frequency-split kind is requested.
    """
    kind = PropagatorKind.parse(kind)
    if not kind.is_classical:
        raise StabilityRequired(f"{kind.value} has no frequency split for an indefinite L")
    return static_kernels(model, kind, t, s, config)


def _integrate(family: DynamicsFamily, t0: float, t1: float, cfg: KgpropConfig) -> np.ndarray:
    size = 2 * family.n
    if t0 == t1:
        return np.eye(size, dtype=complex)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return (-1j * family.at(t) @ y.reshape(size, size)).ravel()

    sol = integrate.solve_ivp(
        rhs, (t0, t1), np.eye(size, dtype=complex).ravel(), method="DOP853", rtol=cfg.rtol, atol=cfg.atol
    )
    if not sol.success:
        raise SolverDiverged(f"Dynamics from {t0:g} to {t1:g} failed: {sol.message}")
    if cfg.debug:
        logger.debug("dynamics %g -> %g: %d steps, %d evaluations", t0, t1, sol.t.size, sol.nfev)
    return np.asarray(sol.y[:, -1].reshape(size, size))


def _free(B: np.ndarray, dt: float) -> np.ndarray:
    if dt == 0:
        return np.eye(B.shape[0], dtype=complex)
    return linalg.expm(-1j * dt * B)


def dynamics(family: DynamicsFamily, t: float, s: float, config: Optional[KgpropConfig] = None) -> np.ndarray:
    """
    The evolution R(t, s) of (d/dt + iB(t)) R = 0 with R(s, s) = 1.

    Outside [t_minus, t_plus] the generator is frozen, so those stretches are matrix
    exponentials; the interior is integrated with DOP853.

    Raises:
        SolverDiverged: If the integration fails.
    """
    cfg = resolve_config(config)
    t, s = float(t), float(s)
    if family.constant:
        return _free(family.B_minus, t - s)
    lo, hi = family.t_minus, family.t_plus
    tc, sc = min(max(t, lo), hi), min(max(s, lo), hi)
    inner = _integrate(family, sc, tc, cfg)
    outer_t = _free(family.at(t), t - tc)
    outer_s = _free(family.at(s), sc - s)
    return outer_t @ inner @ outer_s


def _spectral_split(B: np.ndarray, cfg: KgpropConfig, side: str) -> Tuple[np.ndarray, np.ndarray]:
    values, vectors = linalg.eig(B)
    scale = max(1.0, float(np.max(np.abs(values))))
    smallest = float(np.min(np.abs(values)))
    if smallest <= cfg.singular_ratio * scale:
        raise ZeroModePresent(f"B_{side} has an eigenvalue of size {smallest:.3e}", eigenvalue=smallest)
    if np.min(np.abs(values.real)) <= cfg.singular_ratio * scale:
        raise StabilityRequired(f"B_{side} has spectrum on the imaginary axis", field="B")
    inverse = np.linalg.inv(vectors)
    mask = values.real > 0
    pos = (vectors[:, mask] @ inverse[mask, :]).astype(complex)
    neg = (vectors[:, ~mask] @ inverse[~mask, :]).astype(complex)
    return pos, neg


def asymptotic_projections(family: DynamicsFamily, config: Optional[KgpropConfig] = None) -> AsymptoticProjections:
    """
    Spectral projections of B_+ and B_- onto positive and negative frequencies.

    Raises:
        ZeroModePresent: If either asymptotic generator has a zero eigenvalue.
    """
    cfg = resolve_config(config)
    plus_pos, plus_neg = _spectral_split(family.B_plus, cfg, "+")
    minus_pos, minus_neg = _spectral_split(family.B_minus, cfg, "-")
    return AsymptoticProjections(plus_pos=plus_pos, plus_neg=plus_neg, minus_pos=minus_pos, minus_neg=minus_neg)


def transported_projections(
    family: DynamicsFamily, t: float, config: Optional[KgpropConfig] = None
) -> AsymptoticProjections:
    """Out and in projections carried to time t: R(t, t_+-) Pi_+- R(t_+-, t)."""
    cfg = resolve_config(config)
    base = asymptotic_projections(family, cfg)
    plus_pos, plus_neg = base.conjugated(
        dynamics(family, t, family.t_plus, cfg), dynamics(family, family.t_plus, t, cfg), plus=True
    )
    minus_pos, minus_neg = base.conjugated(
        dynamics(family, t, family.t_minus, cfg), dynamics(family, family.t_minus, t, cfg), plus=False
    )
    return AsymptoticProjections(plus_pos=plus_pos, plus_neg=plus_neg, minus_pos=minus_pos, minus_neg=minus_neg)


def _two_state_quad(family: DynamicsFamily, t: float, cfg: KgpropConfig) -> ProjectionQuad:
    moved = transported_projections(family, t, cfg)
    return kato_projections(Involution(moved.S_plus), Involution(moved.S_minus), cfg)


def _branches(t: float, s: float) -> Tuple[float, float]:
    forward = 1.0 if t >= s else 0.0
    return forward, 1.0 - forward


def inout_feynman(family: DynamicsFamily, t: float, s: float, config: Optional[KgpropConfig] = None) -> np.ndarray:
    """
    In-out Feynman propagator on Cauchy data.

    E(t, s) = theta(t - s) Pi_{+-}^{(+)}(t) R(t, s) - theta(s - t) Pi_{+-}^{(-)}(t) R(t, s),
    where Pi_{+-}^{(+)}(t) projects onto the transported out particle space along the
    transported in antiparticle space. At t = s the forward branch is used.

    Raises:
        NotComplementary: If the two spaces are not complementary.
    """
    cfg = resolve_config(config)
    quad = _two_state_quad(family, t, cfg)
    R = dynamics(family, t, s, cfg)
    fwd, bwd = _branches(t, s)
    return fwd * quad.L12p @ R - bwd * quad.L12m @ R


def twostate_kernels(
    family: DynamicsFamily, t: float, s: float, config: Optional[KgpropConfig] = None
) -> TwoStateKernels:
    """
    Green-function level kernels of the in and out vacua at (t, s).

    Each kernel is the lapse-weighted 12 block of its Cauchy-data counterpart: i E for the
    Green functions, +E and -E for the positive and negative frequency bisolutions.
    """
    cfg = resolve_config(config)
    quad = _two_state_quad(family, t, cfg)
    R = dynamics(family, t, s, cfg)
    fwd, bwd = _branches(t, s)

    def g(matrix: np.ndarray) -> np.ndarray:
        return family.weight(family.block12(matrix))

    feynman = fwd * quad.L12p @ R - bwd * quad.L12m @ R
    anti_feynman = fwd * quad.L21m @ R - bwd * quad.L21p @ R
    return TwoStateKernels(
        feynman=1j * g(feynman),
        anti_feynman=1j * g(anti_feynman),
        pos_out_in=g(quad.L12p @ R),
        neg_out_in=-g(quad.L12m @ R),
        pos_in_out=g(quad.L21p @ R),
        neg_in_out=-g(quad.L21m @ R),
        ret=1j * fwd * g(R),
        adv=-1j * bwd * g(R),
        pj=1j * g(R),
    )


def bogoliubov_map(family: DynamicsFamily, config: Optional[KgpropConfig] = None) -> BogoliubovMap:
    """
    Express the in particle modes, carried to t_plus, in the out modes.

    With KG-normalized bases V_-^+ of ran Pi_-^{(+)} and V_+^{+-} of ran Pi_+^{(+-)},
    X = R(t_+, t_-) V_-^+ = V_+^+ N + V_+^- M, so N = V_+^{+dagger} Q X and
    M = -V_+^{-dagger} Q X.
    """
    cfg = resolve_config(config)
    space = family.space
    proj = asymptotic_projections(family, cfg)
    v_in = kg_orthonormal_basis(space, proj.minus_pos, 1)
    v_out_pos = kg_orthonormal_basis(space, proj.plus_pos, 1)
    v_out_neg = kg_orthonormal_basis(space, proj.plus_neg, -1)
    X = dynamics(family, family.t_plus, family.t_minus, cfg) @ v_in
    Q = space.Q
    result = BogoliubovMap(N=v_out_pos.conj().T @ Q @ X, M=-v_out_neg.conj().T @ Q @ X)
    if cfg.debug:
        logger.debug("bogoliubov map: pseudounitarity residual %.3e", result.pseudounitarity_residual)
    return result


def form_residual(family: DynamicsFamily, t: float, s: float, config: Optional[KgpropConfig] = None) -> float:
    """||R^dagger Q R - Q|| for R = R(t, s)."""
    R = dynamics(family, t, s, config)
    Q = family.Q
    return float(np.linalg.norm(R.conj().T @ Q @ R - Q, 2))


def cocycle_residual(
    family: DynamicsFamily, t: float, s: float, u: float, config: Optional[KgpropConfig] = None
) -> float:
    """||R(t, u) - R(t, s) R(s, u)||, relative."""
    cfg = resolve_config(config)
    direct = dynamics(family, t, u, cfg)
    composed = dynamics(family, t, s, cfg) @ dynamics(family, s, u, cfg)
    return float(np.linalg.norm(direct - composed, 2) / max(1.0, np.linalg.norm(direct, 2)))
