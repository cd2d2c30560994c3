"""
Pairs of involutions on a finite-dimensional Krein space.

Two involutions S1, S2 give two decompositions of the space into +1 and -1
eigenspaces. When Upsilon = (S1 + S2)^2 / 4 is invertible the subspaces can be
mixed: ran P1+ and ran P2- are complementary, and so are ran P2+ and ran P1-.
The projections along these decompositions are the finite-dimensional model of
two-state (in-out) propagators.
"""

import logging
from typing import Any, Optional, Tuple, Union

import numpy as np
from scipy import linalg

from kgprop.config import KgpropConfig, resolve_config
from kgprop.errors import (
    DomainError,
    KgpropValidationError,
    NotComplementary,
    OnePlusKSingular,
    PreconditionFailed,
)
from kgprop.models.common import Number
from kgprop.models.krein import (
    AdmissibilityReport,
    AngularPair,
    BogoliubovReport,
    Involution,
    KreinSpaceFD,
    LemmaReport,
    ProjectionQuad,
    VacuumCoefficients,
    hermitian_part,
)

logger = logging.getLogger("kgprop.krein")

InvolutionLike = Union[Involution, np.ndarray]

# absolute slack for positivity and range tests, relative to the matrix scale
_SLACK = 1e-10


def _involution(S: Any) -> Involution:
    return S if isinstance(S, Involution) else Involution(S)


def _same_size(*items: Involution) -> int:
    sizes = {s.n for s in items}
    if len(sizes) != 1:
        raise KgpropValidationError(f"Involutions act on spaces of different dimension: {sorted(sizes)}", field="S")
    return sizes.pop()


def _check_space(space: KreinSpaceFD, S: Involution) -> None:
    if space.n != S.n:
        raise KgpropValidationError(f"Involution of size {S.n} on a space of dimension {space.n}", field="S")


def _singular(matrix: np.ndarray, cfg: KgpropConfig) -> bool:
    sv = np.linalg.svd(matrix, compute_uv=False)
    return bool(sv[0] == 0 or sv[-1] < cfg.singular_ratio * sv[0])


def admissible_check(
    space: KreinSpaceFD, S: InvolutionLike, config: Optional[KgpropConfig] = None
) -> AdmissibilityReport:
    """
    Decide whether an involution is admissible.

    S is admissible when it preserves the form, S^dagger Q S = Q, and QS is positive
    definite, so that <v|QS w> is a scalar product.

    Args:
        space: The Krein space.
        S: The involution. A plain matrix is accepted and checked for S^2 = 1.

    Returns:
        The verdict together with the smallest eigenvalue of the Hermitian part of QS.

    Raises:
        NotInvolution: If S^2 differs from the identity.
    """
    cfg = resolve_config(config)
    inv = _involution(S)
    _check_space(space, inv)
    Q, s = space.Q, inv.S
    scale = max(1.0, float(np.linalg.norm(s, 2)) ** 2) * float(np.linalg.norm(Q, 2))
    form_residual = float(np.linalg.norm(s.conj().T @ Q @ s - Q, 2)) / scale
    witness = float(np.linalg.eigvalsh(hermitian_part(Q @ s))[0])
    admissible = form_residual <= _SLACK and witness > _SLACK * scale
    if cfg.debug:
        logger.debug("admissibility: form residual %.3e, witness %.3e", form_residual, witness)
    return AdmissibilityReport(admissible=admissible, witness=witness, form_residual=form_residual)


def upsilon(S1: InvolutionLike, S2: InvolutionLike) -> np.ndarray:
    """Return Upsilon = (S1 + S2)^2 / 4, which commutes with all four spectral projections."""
    a, b = _involution(S1), _involution(S2)
    _same_size(a, b)
    total = a.S + b.S
    return 0.25 * (total @ total)


def kato_projections(
    S1: InvolutionLike, S2: InvolutionLike, config: Optional[KgpropConfig] = None
) -> ProjectionQuad:
    """
    Build the complementary projections of a pair of involutions.

    L12p = P1+ U^-1 P2+ projects onto ran P1+ along ran P2-, L21p = P2+ U^-1 P1+
    onto ran P2+ along ran P1-, and L12m, L21m are the complementary projections.

    Raises:
        NotComplementary: If Upsilon is numerically singular.
    """
    cfg = resolve_config(config)
    a, b = _involution(S1), _involution(S2)
    ups = upsilon(a, b)
    sv = np.linalg.svd(ups, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    if cond >= cfg.complementary_condition_limit:
        raise NotComplementary(f"Upsilon has condition number {cond:.3e}", condition=cond)
    inv = np.linalg.inv(ups)
    quad = ProjectionQuad(
        L12p=a.plus @ inv @ b.plus,
        L12m=b.minus @ inv @ a.minus,
        L21p=b.plus @ inv @ a.plus,
        L21m=a.minus @ inv @ b.minus,
        condition=cond,
    )
    if cfg.debug:
        logger.debug(
            "kato projections: cond %.3e, range defect %.3e, kernel defect %.3e",
            cond,
            float(np.linalg.norm(a.minus @ quad.L12p, 2)),
            float(np.linalg.norm(quad.L12p @ b.minus, 2)),
        )
    return quad


def _orthonormal_columns(P: np.ndarray, gram: Optional[np.ndarray]) -> np.ndarray:
    cols = linalg.orth(P)
    if gram is None or cols.shape[1] == 0:
        return cols
    inner = hermitian_part(cols.conj().T @ gram @ cols)
    chol = linalg.cholesky(inner, lower=True)
    return linalg.solve_triangular(chol, cols.conj().T, lower=True).conj().T


def angular_operators(
    S1: InvolutionLike,
    S2: InvolutionLike,
    space: Optional[KreinSpaceFD] = None,
    config: Optional[KgpropConfig] = None,
) -> AngularPair:
    """
    Compute the angular operators c, d of S2 relative to S1.

    With K = S2 S1, c is the ran P1- -> ran P1+ block of (1 - K)(1 + K)^-1 and d the
    ran P1+ -> ran P1- block. When `space` is given and S1 is admissible the adapted
    basis is orthonormal for <.|QS1 .>, so `c_norm` is the operator norm in that
    scalar product; otherwise the Euclidean product is used.

    Raises:
        OnePlusKSingular: If 1 + K is numerically singular.
    """
    cfg = resolve_config(config)
    a, b = _involution(S1), _involution(S2)
    n = _same_size(a, b)
    K = b.S @ a.S
    one_plus = np.eye(n) + K
    if _singular(one_plus, cfg):
        raise OnePlusKSingular("1 + S2 S1 is singular")
    cayley = (np.eye(n) - K) @ np.linalg.inv(one_plus)

    gram = None
    if space is not None:
        _check_space(space, a)
        if admissible_check(space, a, cfg).admissible:
            gram = hermitian_part(space.Q @ a.S)
    plus = _orthonormal_columns(a.plus, gram)
    minus = _orthonormal_columns(a.minus, gram)
    basis = np.hstack([plus, minus])
    p = plus.shape[1]
    block = np.linalg.solve(basis, cayley @ basis)
    c, d = block[:p, p:], block[p:, :p]

    pair = AngularPair(c=c, d=d, basis=basis, rank=p)
    rebuilt = pair.to_full(pair.k_block())
    residual = float(np.linalg.norm(rebuilt - K, 2) / max(1.0, np.linalg.norm(K, 2)))
    if cfg.debug:
        logger.debug("angular operators: |c| = %.6f, |d| = %.6f, K residual %.3e", pair.c_norm, pair.d_norm, residual)
    return AngularPair(c=c, d=d, basis=basis, rank=p, reconstruction_residual=residual)


def q_adjoint(
    space: KreinSpaceFD, S_ref: InvolutionLike, A: Any, config: Optional[KgpropConfig] = None
) -> np.ndarray:
    """
    Return the adjoint of A with respect to the Krein form, Q^-1 A^dagger Q.

    It coincides with S A^* S, where A^* is the adjoint in the scalar product <.|QS .>
    of the admissible reference involution S.

    Raises:
        PreconditionFailed: If S_ref is not admissible.
    """
    cfg = resolve_config(config)
    ref = _involution(S_ref)
    _check_space(space, ref)
    if not admissible_check(space, ref, cfg).admissible:
        raise PreconditionFailed("Reference involution is not admissible", field="S_ref")
    mat = np.asarray(A, dtype=complex)
    if mat.shape != (space.n, space.n):
        raise KgpropValidationError(f"Operator of shape {mat.shape} on a space of dimension {space.n}", field="A")
    Q = space.Q
    adj = np.linalg.solve(Q, mat.conj().T @ Q)
    if cfg.debug:
        gram = Q @ ref.S
        hilbert_adj = np.linalg.solve(gram, mat.conj().T @ gram)
        logger.debug("q_adjoint: reference discrepancy %.3e", float(np.linalg.norm(ref.S @ hilbert_adj @ ref.S - adj)))
    return adj


def lemma_bound_check(
    P: Any, S: Any, alpha: float, config: Optional[KgpropConfig] = None
) -> LemmaReport:
    """
    Check the inverse bound for T = S(1 - P) + PS.

    P is an orthogonal projection and S a self-adjoint involution with PSP >= alpha P and
    (1 - P) S (1 - P) <= 0. Then T is invertible and ||T^-1|| <= 1 / (1 - sqrt(1 - alpha^2)).

    Raises:
        PreconditionFailed: If P, S or alpha do not satisfy the hypotheses.
    """
    cfg = resolve_config(config)
    if not 0.0 < alpha <= 1.0:
        raise PreconditionFailed(f"alpha must lie in (0, 1], got {alpha}", field="alpha")
    proj = np.asarray(P, dtype=complex)
    s = _involution(S).S
    if proj.shape != s.shape:
        raise PreconditionFailed("P and S have different shapes", field="P")
    n = s.shape[0]
    if np.linalg.norm(proj - proj.conj().T, 2) > _SLACK or np.linalg.norm(proj @ proj - proj, 2) > _SLACK:
        raise PreconditionFailed("P is not an orthogonal projection", field="P")
    if np.linalg.norm(s - s.conj().T, 2) > _SLACK:
        raise PreconditionFailed("S is not self-adjoint", field="S")
    comp = np.eye(n) - proj
    lower = np.linalg.eigvalsh(hermitian_part(proj @ s @ proj - alpha * proj))[0]
    upper = np.linalg.eigvalsh(hermitian_part(comp @ s @ comp))[-1]
    if lower < -_SLACK:
        raise PreconditionFailed(f"PSP >= alpha P fails by {-lower:.3e}", field="alpha")
    if upper > _SLACK:
        raise PreconditionFailed(f"(1 - P) S (1 - P) <= 0 fails by {upper:.3e}", field="S")

    T = s @ comp + proj @ s
    inv_norm = float(np.linalg.norm(np.linalg.inv(T), 2))
    bound = 1.0 / (1.0 - np.sqrt(max(0.0, 1.0 - alpha * alpha)))
    if cfg.debug:
        logger.debug("lemma bound: |T^-1| = %.6f, bound %.6f", inv_norm, bound)
    return LemmaReport(bound_ok=inv_norm <= bound * (1.0 + _SLACK), inv_norm=inv_norm, bound=float(bound), alpha=alpha)


def bogoliubov_mode_coeffs(N: Any, Lam: Any) -> BogoliubovReport:
    """
    Residuals of the pseudounitarity conditions of a mode transformation
    phi_beta(k) = N(k) phi_alpha(k) + sum_k' Lam(k, k') conj(phi_alpha(k')).
    """
    n_vec = np.atleast_1d(np.asarray(N, dtype=complex))
    lam = np.atleast_2d(np.asarray(Lam, dtype=complex))
    if lam.shape != (n_vec.size, n_vec.size):
        raise KgpropValidationError(f"Lam must be {n_vec.size}x{n_vec.size}, got {lam.shape}", field="Lam")
    intertwining = lam * n_vec[None, :] - lam.T * n_vec[:, None]
    normalization = lam.conj() @ lam.T - np.diag(np.abs(n_vec) ** 2 - 1.0)
    return BogoliubovReport(
        intertwining=float(np.max(np.abs(intertwining))),
        normalization=float(np.max(np.abs(normalization))),
    )


def alpha_vacuum_coefficients(alpha: Number, beta: Number) -> VacuumCoefficients:
    """
    Coefficients N, M expressing the modes of the beta vacuum through those of the alpha vacuum.

    Raises:
        DomainError: If |alpha| >= 1 or |beta| >= 1.
    """
    a, b = complex(alpha), complex(beta)
    for name, value in (("alpha", a), ("beta", b)):
        if abs(value) >= 1.0:
            raise DomainError(f"|{name}| must be < 1, got {abs(value)}", field=name)
    norm = np.sqrt((1.0 - abs(a) ** 2) * (1.0 - abs(b) ** 2))
    return VacuumCoefficients(n=complex((1.0 - b.conjugate() * a) / norm), m=complex((b.conjugate() - a.conjugate()) / norm))


def _random_generator(space: KreinSpaceFD, rng: np.random.Generator, max_norm: float) -> np.ndarray:
    n = space.n
    h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = hermitian_part(h)
    # Q^-1 (i H) is antisymmetric for the Krein form
    gen = np.linalg.solve(space.Q, 1j * h)
    return gen * (max_norm * rng.uniform(0.1, 1.0) / np.linalg.norm(gen, 2))


def random_admissible_pair(
    n: int,
    rng: Optional[np.random.Generator] = None,
    max_norm: float = 1.5,
    p: Optional[int] = None,
    config: Optional[KgpropConfig] = None,
) -> Tuple[KreinSpaceFD, Involution, Involution]:
    """
    Draw a Krein space with two admissible involutions.

    Q = diag(1_p, -1_q) and S0 = Q, so QS0 = 1. Each involution is S0 conjugated by the
    exponential of a random Q-antisymmetric generator of norm at most `max_norm`, which
    keeps it admissible.
    """
    cfg = resolve_config(config)
    if n < 1:
        raise KgpropValidationError(f"n must be positive, got {n}", field="n")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if p is None:
        p = int(rng.integers(1, n)) if n > 1 else 1
    space = KreinSpaceFD.canonical(p, n - p)
    s0 = space.Q.copy()
    pair = []
    for _ in range(2):
        u = linalg.expm(_random_generator(space, rng, max_norm))
        pair.append(Involution(u @ s0 @ np.linalg.inv(u)))
    return space, pair[0], pair[1]


def k_positivity(space: KreinSpaceFD, S1: InvolutionLike, S2: InvolutionLike) -> float:
    """Smallest eigenvalue of Q S1 S2 S1, i.e. the positivity of K = S2 S1 in the S1 scalar product."""
    a, b = _involution(S1), _involution(S2)
    _same_size(a, b)
    _check_space(space, a)
    return float(np.linalg.eigvalsh(hermitian_part(space.Q @ a.S @ b.S @ a.S))[0])


def uniform_positivity(space: KreinSpaceFD, basis: Any, S_ref: InvolutionLike, sign: int = 1) -> float:
    """
    Uniform positivity constant of the subspace spanned by the columns of `basis`.

    Returns the largest c with sign * <v|Qv> >= c <v|QS v> on the subspace, as the smallest
    generalized eigenvalue. A positive value means uniformly positive (sign = 1) or
    uniformly negative (sign = -1).

    Raises:
        PreconditionFailed: If QS_ref is not positive definite.
    """
    ref = _involution(S_ref)
    _check_space(space, ref)
    v = np.asarray(basis, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    gram = hermitian_part(v.conj().T @ space.Q @ ref.S @ v)
    form = sign * hermitian_part(v.conj().T @ space.Q @ v)
    try:
        values = linalg.eigh(form, gram, eigvals_only=True)
    except linalg.LinAlgError:
        raise PreconditionFailed("QS_ref is not positive definite on the subspace", field="S_ref") from None
    return float(values[0])


def is_maximal(space: KreinSpaceFD, basis: Any, sign: int = 1) -> bool:
    """A definite subspace is maximal when its dimension is the number of eigenvalues of Q with that sign."""
    v = np.asarray(basis)
    dim = 1 if v.ndim == 1 else np.linalg.matrix_rank(v)
    plus, minus = space.signature
    return dim == (plus if sign > 0 else minus)


def kg_orthonormal_basis(space: KreinSpaceFD, projection: Any, sign: int = 1) -> np.ndarray:
    """
    Basis of ran P, orthonormal for sign * <.|Q .>.

    Raises:
        PreconditionFailed: If the form is not definite with the given sign on ran P.
    """
    cols = linalg.orth(np.asarray(projection, dtype=complex))
    if cols.shape[1] == 0:
        return cols
    inner = sign * hermitian_part(cols.conj().T @ space.Q @ cols)
    try:
        chol = linalg.cholesky(inner, lower=True)
    except linalg.LinAlgError:
        raise PreconditionFailed("Form is not definite on the range", field="projection") from None
    return linalg.solve_triangular(chol, cols.conj().T, lower=True).conj().T
